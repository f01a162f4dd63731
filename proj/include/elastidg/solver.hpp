#pragma once

#include "elastidg/types.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace elastidg {

enum class SolverMethod { direct, schur_cg };

struct SolverOptions {
    SolverMethod method = SolverMethod::direct;
    double cg_tolerance = 1e-13;  // relative residual of the Schur system
    int cg_max_iterations = 20000;
    std::string context;          // mesh/degree description for diagnostics
};

/// Failure of the saddle-point solve: singular factorization or CG cap hit.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SaddleSolution {
    Eigen::VectorXd stress;
    Eigen::VectorXd displacement;
    double residual_stress_equation = 0.0;  // |A s + B^T u| / max(1, |F|)
    double residual_load_equation = 0.0;    // |B s - F| / max(1, |F|)
    std::string method;
    int iterations = 0;
    double seconds = 0.0;
};

/// Solves [A B^T; B 0] (sigma; u) = (0; F).
///
/// direct: sparse LU of the full block matrix (stress unknowns first).
/// schur_cg: Cholesky of A and conjugate gradients on B A^{-1} B^T u = -F.
[[nodiscard]] SaddleSolution solve_saddle(const SpMat& A, const SpMat& B, const Eigen::VectorXd& F,
                                          const SolverOptions& options = {});

/// [A B^T; B 0] with stress unknowns first.
[[nodiscard]] SpMat saddle_matrix(const SpMat& A, const SpMat& B);

}  // namespace elastidg
