#pragma once

#include "elastidg/forms.hpp"
#include "elastidg/problems.hpp"
#include "elastidg/spaces.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace elastidg {

struct ErrorReport {
    double h = 0.0;
    Eigen::Index dofs_sigma = 0;
    Eigen::Index dofs_u = 0;
    double err_u_L2 = 0.0;
    double err_sigma_L2 = 0.0;
    double err_div = 0.0;
    double err_jump = 0.0;
    double err_star = 0.0;
    double err_A = 0.0;
    double err_u_H1 = 0.0;  // broken H1 seminorm
};

/// Errors of a discrete pair against the exact solution. h < 0 uses the
/// largest element diameter.
[[nodiscard]] ErrorReport compute_errors(const ManufacturedProblem& problem, const FieldCoefficients& stress,
                                         const FieldCoefficients& displacement, double eta, double h = -1.0);

struct NormOrders {
    double u_L2 = 0.0;
    double sigma_L2 = 0.0;
    double div = 0.0;
    double star = 0.0;
    double energy = 0.0;
};

struct ConvergenceReport {
    std::vector<ErrorReport> levels;
    std::vector<NormOrders> orders;  // orders[i] compares levels[i] and levels[i+1]
};

/// log(e_coarse / e_fine) / log(h_coarse / h_fine)
[[nodiscard]] double observed_order(double e_coarse, double e_fine, double h_coarse, double h_fine);

/// Requires at least two levels with strictly decreasing h.
[[nodiscard]] ConvergenceReport convergence_orders(const std::vector<ErrorReport>& reports);

/// Smallest singular value of B in the (star-norm Gram, L2 mass) metric:
/// the square root of the smallest eigenvalue of B G^{-1} B^T w = beta^2 M w.
[[nodiscard]] double infsup_constant(const SpMat& star_gram, const SpMat& B, const SpMat& u_mass);

/// min over the kernel of B of a(tau, tau) / |tau|_*^2.
[[nodiscard]] double kellipticity_constant(const SpMat& A, const SpMat& B, const SpMat& star_gram);

/// Largest observed |r_e(w)|_0 h_e^{1/2} / |w|_{0,e} over random polynomial
/// w of the displacement degree on every interior facet.
[[nodiscard]] double lifting_constant(std::shared_ptr<const DgSpace> displacement, int samples_per_facet,
                                      std::uint32_t seed = 7);

/// a_h(sigma, tau_i) + b_h(tau_i, u) for the exact solution and every
/// stress basis function; zero up to quadrature error by consistency.
[[nodiscard]] Eigen::VectorXd consistency_residual(const ManufacturedProblem& problem, const DgSpace& stress,
                                                   const ComplianceTensor& ct);

}  // namespace elastidg
