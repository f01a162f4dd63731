#include "elastidg/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace elastidg {

namespace {

// g(t) = t(1-t) and its derivatives.
struct Bubble1d {
    double v, d1, d2;
    explicit Bubble1d(double t) : v(t * (1.0 - t)), d1(1.0 - 2.0 * t), d2(-2.0) {}
};

VectorJet empty_jet(int dim)
{
    VectorJet j;
    j.value = Vec::Zero(dim);
    j.gradient = Mat::Zero(dim, dim);
    for (int a = 0; a < dim; ++a) {
        j.hessian[static_cast<std::size_t>(a)] = Mat::Zero(dim, dim);
    }
    return j;
}

// Jet of the scalar bubble prod_b g(x_b), scaled into component a by `weights`.
VectorJet product_bubble_jet(const Vec& x, const Vec& weights)
{
    const int d = static_cast<int>(x.size());
    std::array<Bubble1d, 3> g{Bubble1d(x[0]), Bubble1d(x[1]), Bubble1d(d == 3 ? x[2] : 0.5)};
    auto prod_except = [&](int skip1, int skip2) {
        double p = 1.0;
        for (int b = 0; b < d; ++b) {
            if (b != skip1 && b != skip2) {
                p *= g[static_cast<std::size_t>(b)].v;
            }
        }
        return p;
    };
    const double value = prod_except(-1, -1);
    Vec grad(d);
    Mat hess(d, d);
    for (int b = 0; b < d; ++b) {
        grad[b] = g[static_cast<std::size_t>(b)].d1 * prod_except(b, -1);
        for (int c = 0; c < d; ++c) {
            hess(b, c) = (b == c) ? g[static_cast<std::size_t>(b)].d2 * prod_except(b, -1)
                                  : g[static_cast<std::size_t>(b)].d1 * g[static_cast<std::size_t>(c)].d1 * prod_except(b, c);
        }
    }
    VectorJet j = empty_jet(d);
    for (int a = 0; a < d; ++a) {
        j.value[a] = weights[a] * value;
        j.gradient.row(a) = weights[a] * grad.transpose();
        j.hessian[static_cast<std::size_t>(a)] = weights[a] * hess;
    }
    return j;
}

}  // namespace

Mat stiffness_apply(double mu, double lambda, const Mat& strain)
{
    const auto d = strain.rows();
    return 2.0 * mu * strain + lambda * strain.trace() * Mat::Identity(d, d);
}

ManufacturedProblem::ManufacturedProblem(std::string name, int dim, double mu, double lambda,
                                         std::function<VectorJet(const Vec&)> jet)
    : name_(std::move(name)), dim_(dim), mu_(mu), lambda_(lambda), jet_(std::move(jet))
{
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("ManufacturedProblem: dim must be 2 or 3");
    }
}

Vec ManufacturedProblem::u(const Vec& x) const { return jet_(x).value; }

Mat ManufacturedProblem::grad_u(const Vec& x) const { return jet_(x).gradient; }

Mat ManufacturedProblem::strain(const Vec& x) const
{
    const Mat g = grad_u(x);
    return 0.5 * (g + g.transpose());
}

Mat ManufacturedProblem::sigma(const Vec& x) const { return stiffness_apply(mu_, lambda_, strain(x)); }

Vec ManufacturedProblem::f(const Vec& x) const
{
    const VectorJet j = jet_(x);
    Vec grad_div = Vec::Zero(dim_);
    for (int b = 0; b < dim_; ++b) {
        grad_div += j.hessian[static_cast<std::size_t>(b)].row(b).transpose();
    }
    Vec out(dim_);
    for (int a = 0; a < dim_; ++a) {
        out[a] = mu_ * j.hessian[static_cast<std::size_t>(a)].trace() + (mu_ + lambda_) * grad_div[a];
    }
    return out;
}

ManufacturedProblem problem_2d(double mu, double lambda)
{
    auto jet = [](const Vec& x) {
        constexpr double pi = std::numbers::pi;
        const Bubble1d gx(x[0]);
        const Bubble1d gy(x[1]);
        const double ex = std::exp(x[0]);
        const double ey = std::exp(-x[1]);
        // u_1 = p(x) q(y), p = e^x g(x), q = e^{-y} g(y)
        const double p = ex * gx.v;
        const double p1 = ex * (gx.v + gx.d1);
        const double p2 = ex * (gx.v + 2.0 * gx.d1 + gx.d2);
        const double q = ey * gy.v;
        const double q1 = ey * (gy.d1 - gy.v);
        const double q2 = ey * (gy.v - 2.0 * gy.d1 + gy.d2);
        // u_2 = s(x) s(y), s = sin(pi t)
        const double sx = std::sin(pi * x[0]);
        const double sy = std::sin(pi * x[1]);
        const double cx = std::cos(pi * x[0]);
        const double cy = std::cos(pi * x[1]);

        VectorJet j = empty_jet(2);
        j.value << p * q, sx * sy;
        j.gradient << p1 * q, p * q1, pi * cx * sy, pi * sx * cy;
        j.hessian[0] << p2 * q, p1 * q1, p1 * q1, p * q2;
        j.hessian[1] << -pi * pi * sx * sy, pi * pi * cx * cy, pi * pi * cx * cy, -pi * pi * sx * sy;
        return j;
    };
    return {"2d", 2, mu, lambda, jet};
}

ManufacturedProblem problem_3d(double mu, double lambda)
{
    auto jet = [](const Vec& x) { return product_bubble_jet(x, Eigen::Vector3d(16.0, 32.0, 64.0)); };
    return {"3d", 3, mu, lambda, jet};
}

ManufacturedProblem polynomial_problem_2d(double mu, double lambda)
{
    auto jet = [](const Vec& x) { return product_bubble_jet(x, Eigen::Vector2d(1.0, -2.0)); };
    return {"2d-quartic", 2, mu, lambda, jet};
}

ManufacturedProblem zero_problem(int dim, double mu, double lambda)
{
    auto jet = [dim](const Vec&) { return empty_jet(dim); };
    return {"zero", dim, mu, lambda, jet};
}

}  // namespace elastidg
