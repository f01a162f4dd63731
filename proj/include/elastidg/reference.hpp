#pragma once

#include "elastidg/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace elastidg {

/// Quadrature on the reference simplex conv{0, e_1, ..., e_d}.
struct QuadratureRule {
    int dim = 0;
    int degree = 0;  // exactness degree
    std::vector<Vec> points;
    std::vector<double> weights;

    [[nodiscard]] int size() const { return static_cast<int>(weights.size()); }
};

/// Rule on the reference simplex of dimension 1..3 exact for total degree
/// `exactness_degree`. Built from collapsed Gauss-Jacobi tensor rules.
[[nodiscard]] QuadratureRule make_quadrature(int dim, int exactness_degree);

/// Values and reference gradients of a basis at a point set.
struct BasisTable {
    Eigen::MatrixXd values;                  // (points, functions)
    std::array<Eigen::MatrixXd, 3> derivs;   // d/dx_ref[c], each (points, functions)
};

/// L2-orthonormal hierarchical basis of P_degree on the reference simplex.
///
/// Functions are ordered by increasing degree, so the first binom(p+d, d)
/// entries span P_p for every p <= degree. Each function is stored as
/// coefficients over monomials centred at the reference centroid.
class ScalarBasis {
public:
    ScalarBasis(int dim, int degree);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int size() const { return static_cast<int>(exponents_.size()); }

    [[nodiscard]] Eigen::VectorXd values(const Vec& x) const;
    /// (functions, dim) matrix of reference gradients.
    [[nodiscard]] Eigen::MatrixXd gradients(const Vec& x) const;
    [[nodiscard]] BasisTable tabulate(const std::vector<Vec>& points) const;

private:
    [[nodiscard]] Eigen::VectorXd monomials(const Vec& x) const;
    [[nodiscard]] Eigen::MatrixXd monomial_gradients(const Vec& x) const;

    int dim_;
    int degree_;
    Vec centroid_;
    std::vector<std::array<int, 3>> exponents_;
    Eigen::MatrixXd coefficients_;  // row i: function i over monomials
};

[[nodiscard]] ScalarBasis make_basis(int dim, int degree);

/// Number of polynomials of total degree <= degree in dim variables.
[[nodiscard]] int polynomial_dimension(int dim, int degree);

/// Vertices of the reference simplex.
[[nodiscard]] std::vector<Vec> reference_vertices(int dim);

/// Measure of the reference-element facet opposite local vertex `local_facet`.
[[nodiscard]] double reference_facet_measure(int dim, int local_facet);

/// Facet quadrature expressed in element reference coordinates.
///
/// `ordering` lists the element-local vertices of the facet in the order in
/// which the reference facet vertices are mapped onto them. Weights are
/// scaled to the reference element's facet measure.
struct FacetQuadrature {
    std::vector<Vec> points;
    std::vector<double> weights;
};

[[nodiscard]] FacetQuadrature facet_quadrature_trace(int dim, int exactness_degree, int local_facet,
                                                     const std::array<int, 3>& ordering);

}  // namespace elastidg
