#include "elastidg/forms.hpp"
#include "elastidg/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace elastidg;

namespace {

Vec point(std::initializer_list<double> c)
{
    Vec x(static_cast<Eigen::Index>(c.size()));
    Eigen::Index i = 0;
    for (double v : c) {
        x[i++] = v;
    }
    return x;
}

// div sigma by central differences of the closed-form sigma.
Vec fd_divergence(const ManufacturedProblem& p, const Vec& x, double h)
{
    const int d = p.dim();
    Vec div = Vec::Zero(d);
    for (int b = 0; b < d; ++b) {
        Vec xp = x;
        Vec xm = x;
        xp[b] += h;
        xm[b] -= h;
        div += (p.sigma(xp).col(b) - p.sigma(xm).col(b)) / (2 * h);
    }
    return div;
}

// grad u by central differences of u.
Mat fd_gradient(const ManufacturedProblem& p, const Vec& x, double h)
{
    const int d = p.dim();
    Mat g(d, d);
    for (int b = 0; b < d; ++b) {
        Vec xp = x;
        Vec xm = x;
        xp[b] += h;
        xm[b] -= h;
        g.col(b) = (p.u(xp) - p.u(xm)) / (2 * h);
    }
    return g;
}

}  // namespace

TEST(Problems, PointValues)
{
    EXPECT_LT((problem_2d().u(point({0.5, 0.5})) - point({0.0625, 1.0})).norm(), 1e-15);
    EXPECT_LT((problem_3d().u(point({0.5, 0.5, 0.5})) - point({0.25, 0.5, 1.0})).norm(), 1e-15);
    // Hand evaluation away from the centre: e^{x-y} x y (1-x)(1-y), sin(pi x) sin(pi y).
    const double x = 0.3;
    const double y = 0.8;
    const Vec u = problem_2d().u(point({x, y}));
    EXPECT_NEAR(u[0], std::exp(x - y) * x * y * (1 - x) * (1 - y), 1e-15);
    EXPECT_NEAR(u[1], std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y), 1e-15);
}

TEST(Problems, LoadMatchesFiniteDifferences)
{
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (const auto& p : {problem_2d(), problem_3d(), polynomial_problem_2d(), problem_2d(1.3, 4.0)}) {
        for (int t = 0; t < 10; ++t) {
            Vec x(p.dim());
            for (int c = 0; c < p.dim(); ++c) {
                x[c] = u(rng);
            }
            const Vec fd = fd_divergence(p, x, 1e-5);
            EXPECT_LT((p.f(x) - fd).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, fd.cwiseAbs().maxCoeff())) << p.name();
            const Mat g = fd_gradient(p, x, 1e-5);
            EXPECT_LT((p.grad_u(x) - g).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, g.cwiseAbs().maxCoeff()));
        }
    }
}

TEST(Problems, VanishOnBoundary)
{
    std::mt19937 rng(22);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& p : {problem_2d(), problem_3d(), polynomial_problem_2d()}) {
        const int d = p.dim();
        for (int face = 0; face < 2 * d; ++face) {
            for (int t = 0; t < 200; ++t) {
                Vec x(d);
                for (int c = 0; c < d; ++c) {
                    x[c] = u(rng);
                }
                x[face / 2] = face % 2;
                EXPECT_LT(p.u(x).norm(), 1e-13);
            }
        }
    }
}

TEST(Problems, ComplianceOfStressIsStrain)
{
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& p : {problem_2d(), problem_3d()}) {
        const ComplianceTensor ct(p.mu(), p.lambda(), p.dim());
        for (int t = 0; t < 20; ++t) {
            Vec x(p.dim());
            for (int c = 0; c < p.dim(); ++c) {
                x[c] = u(rng);
            }
            const Mat eps = p.strain(x);
            EXPECT_LT((compliance_apply(ct, p.sigma(x)) - eps).cwiseAbs().maxCoeff(),
                      1e-12 * std::max(1.0, eps.cwiseAbs().maxCoeff()));
        }
    }
}

TEST(Stiffness, HandValues)
{
    EXPECT_EQ(stiffness_apply(0.5, 1.0, Mat::Zero(2, 2)).norm(), 0.0);
    const Mat s = stiffness_apply(0.5, 1.0, Mat::Identity(2, 2));
    EXPECT_LT((s - 3.0 * Mat::Identity(2, 2)).norm(), 1e-15);
    EXPECT_LT((compliance_apply(ComplianceTensor(0.5, 1.0, 2), s) - Mat::Identity(2, 2)).norm(), 1e-15);
    Mat dev(2, 2);
    dev << 1, 3, 3, -1;
    EXPECT_LT((stiffness_apply(0.8, 5.0, dev) - 1.6 * dev).norm(), 1e-15);
}

TEST(Stiffness, RoundTripWithCompliance)
{
    std::mt19937 rng(24);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int d : {2, 3}) {
        for (const auto [mu, lambda] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.0}, std::pair{0.3, 100.0}}) {
            const ComplianceTensor ct(mu, lambda, d);
            for (int t = 0; t < 100; ++t) {
                Mat e(d, d);
                for (int i = 0; i < d; ++i) {
                    for (int j = 0; j <= i; ++j) {
                        e(i, j) = e(j, i) = u(rng);
                    }
                }
                EXPECT_LT((compliance_apply(ct, stiffness_apply(mu, lambda, e)) - e).cwiseAbs().maxCoeff(), 1e-12);
                EXPECT_LT((stiffness_apply(mu, lambda, compliance_apply(ct, e)) - e).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
    }
}

TEST(Problems, ZeroProblem)
{
    const ManufacturedProblem z = zero_problem(3);
    const Vec x = point({0.2, 0.4, 0.6});
    EXPECT_EQ(z.u(x).norm(), 0.0);
    EXPECT_EQ(z.sigma(x).norm(), 0.0);
    EXPECT_EQ(z.f(x).norm(), 0.0);
    EXPECT_THROW(zero_problem(4), std::invalid_argument);
}
