#include "elastidg/reference.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace elastidg {

namespace {

struct Rule1d {
    std::vector<double> points;
    std::vector<double> weights;
};

// Gauss-Jacobi rule for the weight (1-t)^a on [-1,1], mapped to [0,1] with
// weight (1-s)^a. Golub-Welsch on the Jacobi matrix.
Rule1d gauss_jacobi_unit(int m, double a)
{
    Eigen::VectorXd diag(m);
    Eigen::VectorXd sub(std::max(m - 1, 0));
    const double b = 0.0;
    for (int n = 0; n < m; ++n) {
        const double s = 2.0 * n + a + b;
        diag(n) = (n == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (int n = 1; n < m; ++n) {
        const double s = 2.0 * n + a + b;
        const double beta = 4.0 * n * (n + a) * (n + b) * (n + a + b) / (s * s * (s + 1.0) * (s - 1.0));
        sub(n - 1) = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);

    Rule1d r;
    r.points.resize(static_cast<std::size_t>(m));
    r.weights.resize(static_cast<std::size_t>(m));
    const double scale = std::pow(2.0, a + 1.0);
    for (int i = 0; i < m; ++i) {
        const double v0 = eig.eigenvectors()(0, i);
        r.points[static_cast<std::size_t>(i)] = 0.5 * (1.0 + eig.eigenvalues()(i));
        r.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0 / scale;
    }
    return r;
}

long binomial(int n, int k)
{
    if (k < 0 || k > n) {
        return 0;
    }
    long r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

}  // namespace

int polynomial_dimension(int dim, int degree) { return static_cast<int>(binomial(degree + dim, dim)); }

QuadratureRule make_quadrature(int dim, int exactness_degree)
{
    if (dim < 1 || dim > 3) {
        throw std::invalid_argument("make_quadrature: dim must be 1, 2 or 3");
    }
    if (exactness_degree < 0) {
        throw std::invalid_argument("make_quadrature: negative exactness degree");
    }
    const int m = (exactness_degree + 2) / 2;
    QuadratureRule q;
    q.dim = dim;
    q.degree = exactness_degree;

    const Rule1d r0 = gauss_jacobi_unit(m, 0.0);
    if (dim == 1) {
        for (int i = 0; i < m; ++i) {
            q.points.push_back(Vec::Constant(1, r0.points[static_cast<std::size_t>(i)]));
            q.weights.push_back(r0.weights[static_cast<std::size_t>(i)]);
        }
        return q;
    }
    const Rule1d r1 = gauss_jacobi_unit(m, 1.0);
    if (dim == 2) {
        for (int j = 0; j < m; ++j) {
            const double eta = r1.points[static_cast<std::size_t>(j)];
            for (int i = 0; i < m; ++i) {
                const double xi = r0.points[static_cast<std::size_t>(i)];
                q.points.push_back(Eigen::Vector2d(xi * (1.0 - eta), eta));
                q.weights.push_back(r0.weights[static_cast<std::size_t>(i)] * r1.weights[static_cast<std::size_t>(j)]);
            }
        }
        return q;
    }
    const Rule1d r2 = gauss_jacobi_unit(m, 2.0);
    for (int k = 0; k < m; ++k) {
        const double zeta = r2.points[static_cast<std::size_t>(k)];
        for (int j = 0; j < m; ++j) {
            const double eta = r1.points[static_cast<std::size_t>(j)];
            for (int i = 0; i < m; ++i) {
                const double xi = r0.points[static_cast<std::size_t>(i)];
                q.points.push_back(Eigen::Vector3d(xi * (1.0 - eta) * (1.0 - zeta), eta * (1.0 - zeta), zeta));
                q.weights.push_back(r0.weights[static_cast<std::size_t>(i)] * r1.weights[static_cast<std::size_t>(j)]
                                    * r2.weights[static_cast<std::size_t>(k)]);
            }
        }
    }
    return q;
}

ScalarBasis::ScalarBasis(int dim, int degree) : dim_(dim), degree_(degree)
{
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("ScalarBasis: dim must be 2 or 3");
    }
    if (degree < 0) {
        throw std::invalid_argument("ScalarBasis: negative degree");
    }
    centroid_ = Vec::Constant(dim, 1.0 / (dim + 1));

    for (int p = 0; p <= degree; ++p) {
        if (dim == 2) {
            for (int j = 0; j <= p; ++j) {
                exponents_.push_back({p - j, j, 0});
            }
        } else {
            for (int k = 0; k <= p; ++k) {
                for (int j = 0; j <= p - k; ++j) {
                    exponents_.push_back({p - j - k, j, k});
                }
            }
        }
    }

    // Orthonormalise the ordered monomials: QR of the weighted sample
    // matrix gives a lower-triangular (hierarchical) change of basis.
    const QuadratureRule q = make_quadrature(dim, 2 * degree);
    const int n = size();
    Eigen::MatrixXd V(q.size(), n);
    for (int i = 0; i < q.size(); ++i) {
        V.row(i) = std::sqrt(q.weights[static_cast<std::size_t>(i)])
                   * monomials(q.points[static_cast<std::size_t>(i)]).transpose();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
    Eigen::MatrixXd R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        if (R(i, i) < 0.0) {
            R.row(i) *= -1.0;
        }
    }
    Eigen::MatrixXd Rinv = R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
    coefficients_ = Rinv.transpose();

    // One refinement pass against the re-evaluated mass matrix.
    Eigen::MatrixXd W = V * coefficients_.transpose();
    Eigen::MatrixXd M = W.transpose() * W;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    coefficients_ = llt.matrixL().solve(coefficients_);
}

Eigen::VectorXd ScalarBasis::monomials(const Vec& x) const
{
    const Vec y = x - centroid_;
    Eigen::VectorXd m(size());
    for (int i = 0; i < size(); ++i) {
        const auto& e = exponents_[static_cast<std::size_t>(i)];
        double v = 1.0;
        for (int c = 0; c < dim_; ++c) {
            for (int p = 0; p < e[static_cast<std::size_t>(c)]; ++p) {
                v *= y[c];
            }
        }
        m(i) = v;
    }
    return m;
}

Eigen::MatrixXd ScalarBasis::monomial_gradients(const Vec& x) const
{
    const Vec y = x - centroid_;
    Eigen::MatrixXd g(size(), dim_);
    for (int i = 0; i < size(); ++i) {
        const auto& e = exponents_[static_cast<std::size_t>(i)];
        for (int c = 0; c < dim_; ++c) {
            if (e[static_cast<std::size_t>(c)] == 0) {
                g(i, c) = 0.0;
                continue;
            }
            double v = e[static_cast<std::size_t>(c)];
            for (int b = 0; b < dim_; ++b) {
                const int power = e[static_cast<std::size_t>(b)] - (b == c ? 1 : 0);
                for (int p = 0; p < power; ++p) {
                    v *= y[b];
                }
            }
            g(i, c) = v;
        }
    }
    return g;
}

Eigen::VectorXd ScalarBasis::values(const Vec& x) const { return coefficients_ * monomials(x); }

Eigen::MatrixXd ScalarBasis::gradients(const Vec& x) const { return coefficients_ * monomial_gradients(x); }

BasisTable ScalarBasis::tabulate(const std::vector<Vec>& points) const
{
    const auto np = static_cast<Eigen::Index>(points.size());
    BasisTable t;
    t.values.resize(np, size());
    for (int c = 0; c < dim_; ++c) {
        t.derivs[static_cast<std::size_t>(c)].resize(np, size());
    }
    for (Eigen::Index q = 0; q < np; ++q) {
        const Vec& x = points[static_cast<std::size_t>(q)];
        t.values.row(q) = values(x).transpose();
        const Eigen::MatrixXd g = gradients(x);
        for (int c = 0; c < dim_; ++c) {
            t.derivs[static_cast<std::size_t>(c)].row(q) = g.col(c).transpose();
        }
    }
    return t;
}

ScalarBasis make_basis(int dim, int degree) { return ScalarBasis(dim, degree); }

std::vector<Vec> reference_vertices(int dim)
{
    std::vector<Vec> v;
    v.push_back(Vec::Zero(dim));
    for (int c = 0; c < dim; ++c) {
        Vec e = Vec::Zero(dim);
        e[c] = 1.0;
        v.push_back(e);
    }
    return v;
}

double reference_facet_measure(int dim, int local_facet)
{
    if (local_facet < 0 || local_facet > dim) {
        throw ReferenceError("reference_facet_measure: invalid local facet");
    }
    if (dim == 2) {
        return local_facet == 0 ? std::sqrt(2.0) : 1.0;
    }
    return local_facet == 0 ? std::sqrt(3.0) / 2.0 : 0.5;
}

FacetQuadrature facet_quadrature_trace(int dim, int exactness_degree, int local_facet,
                                       const std::array<int, 3>& ordering)
{
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("facet_quadrature_trace: dim must be 2 or 3");
    }
    if (local_facet < 0 || local_facet > dim) {
        throw ReferenceError("facet_quadrature_trace: invalid local facet " + std::to_string(local_facet));
    }
    std::array<bool, 4> seen{};
    for (int a = 0; a < dim; ++a) {
        const int v = ordering[static_cast<std::size_t>(a)];
        if (v < 0 || v > dim || v == local_facet || seen[static_cast<std::size_t>(v)]) {
            throw ReferenceError("facet_quadrature_trace: ordering is not a permutation of the facet vertices");
        }
        seen[static_cast<std::size_t>(v)] = true;
    }

    const QuadratureRule q = make_quadrature(dim - 1, exactness_degree);
    const std::vector<Vec> verts = reference_vertices(dim);
    const double facet_ref_measure = (dim == 2) ? 1.0 : 0.5;
    const double scale = reference_facet_measure(dim, local_facet) / facet_ref_measure;

    FacetQuadrature out;
    out.points.reserve(static_cast<std::size_t>(q.size()));
    out.weights.reserve(static_cast<std::size_t>(q.size()));
    for (int i = 0; i < q.size(); ++i) {
        const Vec& s = q.points[static_cast<std::size_t>(i)];
        std::array<double, 3> bary{};
        bary[0] = 1.0 - s.sum();
        for (int c = 0; c < dim - 1; ++c) {
            bary[static_cast<std::size_t>(c + 1)] = s[c];
        }
        Vec x = Vec::Zero(dim);
        for (int a = 0; a < dim; ++a) {
            x += bary[static_cast<std::size_t>(a)] * verts[static_cast<std::size_t>(ordering[static_cast<std::size_t>(a)])];
        }
        out.points.push_back(x);
        out.weights.push_back(q.weights[static_cast<std::size_t>(i)] * scale);
    }
    return out;
}

}  // namespace elastidg
