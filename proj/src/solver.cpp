#include "elastidg/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#ifdef ELASTIDG_HAVE_SUITESPARSE
#include <Eigen/CholmodSupport>
#include <Eigen/UmfPackSupport>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

namespace elastidg {

namespace {

std::string with_context(const std::string& message, const SolverOptions& options)
{
    return options.context.empty() ? message : message + " [" + options.context + "]";
}

#ifdef ELASTIDG_HAVE_SUITESPARSE
using FullFactorization = Eigen::UmfPackLU<SpMat>;
using StressFactorization = Eigen::CholmodSupernodalLLT<SpMat, Eigen::Lower>;
constexpr const char* kDirectName = "direct (UMFPACK LU)";
constexpr const char* kSchurName = "schur-cg (CHOLMOD LLT + CG)";
#else
using FullFactorization = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;
using StressFactorization = Eigen::SimplicialLLT<SpMat, Eigen::Lower>;
constexpr const char* kDirectName = "direct (SparseLU)";
constexpr const char* kSchurName = "schur-cg (SimplicialLLT + CG)";
#endif

void solve_direct(const SpMat& A, const SpMat& B, const Eigen::VectorXd& F, const SolverOptions& options,
                  SaddleSolution& out)
{
    const SpMat K = saddle_matrix(A, B);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K.rows());
    rhs.tail(F.size()) = F;

    FullFactorization lu;
    lu.analyzePattern(K);
    lu.factorize(K);
    if (lu.info() != Eigen::Success) {
        throw SolverError(with_context("saddle-point factorization failed: system is singular "
                                       "(well-posedness violated)",
                                       options));
    }
    Eigen::VectorXd x = lu.solve(rhs);
    // One step of iterative refinement against the assembled system.
    const Eigen::VectorXd r = rhs - K * x;
    x += lu.solve(r);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw SolverError(with_context("saddle-point back-substitution failed", options));
    }
    out.stress = x.head(A.rows());
    out.displacement = x.tail(B.rows());
    out.method = kDirectName;
}

void solve_schur_cg(const SpMat& A, const SpMat& B, const Eigen::VectorXd& F, const SolverOptions& options,
                    SaddleSolution& out)
{
    StressFactorization chol;
    chol.compute(A);
    if (chol.info() != Eigen::Success) {
        throw SolverError(with_context("Cholesky of the stress block failed: A is not positive definite", options));
    }
    const SpMat Bt = B.transpose();
    auto apply_schur = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
        const Eigen::VectorXd s = chol.solve(Bt * u);
        return B * s;
    };

    // S u = -F with S = B A^{-1} B^T symmetric positive definite.
    const Eigen::VectorXd b = -F;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(B.rows());
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        out.stress = Eigen::VectorXd::Zero(A.rows());
        out.displacement = u;
        out.method = kSchurName;
        return;
    }
    Eigen::VectorXd r = b;
    Eigen::VectorXd p = r;
    double rr = r.squaredNorm();
    int it = 0;
    while (std::sqrt(rr) > options.cg_tolerance * bnorm) {
        if (it >= options.cg_max_iterations) {
            throw SolverError(with_context("Schur-complement CG did not converge in "
                                               + std::to_string(it) + " iterations; relative residual "
                                               + std::to_string(std::sqrt(rr) / bnorm),
                                           options));
        }
        const Eigen::VectorXd Sp = apply_schur(p);
        const double pSp = p.dot(Sp);
        if (!(pSp > 0.0)) {
            throw SolverError(with_context("Schur complement is not positive definite (B rank deficient)", options));
        }
        const double alpha = rr / pSp;
        u += alpha * p;
        r -= alpha * Sp;
        const double rr_new = r.squaredNorm();
        p = r + (rr_new / rr) * p;
        rr = rr_new;
        ++it;
    }
    out.displacement = u;
    out.stress = -chol.solve(Bt * u);
    out.iterations = it;
    out.method = kSchurName;
}

}  // namespace

SpMat saddle_matrix(const SpMat& A, const SpMat& B)
{
    const Eigen::Index ns = A.rows();
    const Eigen::Index nu = B.rows();
    const SpMat Bt = B.transpose();
    SpMat K(ns + nu, ns + nu);
    K.reserve(A.nonZeros() + 2 * B.nonZeros());
    for (Eigen::Index j = 0; j < ns; ++j) {
        K.startVec(j);
        for (SpMat::InnerIterator it(A, j); it; ++it) {
            K.insertBack(it.row(), j) = it.value();
        }
        for (SpMat::InnerIterator it(B, j); it; ++it) {
            K.insertBack(ns + it.row(), j) = it.value();
        }
    }
    for (Eigen::Index j = 0; j < nu; ++j) {
        K.startVec(ns + j);
        for (SpMat::InnerIterator it(Bt, j); it; ++it) {
            K.insertBack(it.row(), ns + j) = it.value();
        }
    }
    K.finalize();
    return K;
}

SaddleSolution solve_saddle(const SpMat& A, const SpMat& B, const Eigen::VectorXd& F, const SolverOptions& options)
{
    if (A.rows() != A.cols() || B.cols() != A.rows() || B.rows() != F.size()) {
        throw std::invalid_argument("solve_saddle: inconsistent block dimensions");
    }
    const auto start = std::chrono::steady_clock::now();
    SaddleSolution out;
    if (options.method == SolverMethod::direct) {
        solve_direct(A, B, F, options, out);
    } else {
        solve_schur_cg(A, B, F, options, out);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double scale = std::max(1.0, F.norm());
    out.residual_stress_equation = (A * out.stress + B.transpose() * out.displacement).norm() / scale;
    out.residual_load_equation = (B * out.stress - F).norm() / scale;
    return out;
}

}  // namespace elastidg
