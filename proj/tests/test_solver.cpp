#include "elastidg/analysis.hpp"
#include "elastidg/solver.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace elastidg;

namespace {

struct Fixture {
    std::shared_ptr<const DgSpace> stress;
    std::shared_ptr<const DgSpace> disp;
    SparseSystem sys;
};

Fixture build(int dim, int n, int k, const ManufacturedProblem& p, double eta = 1.0)
{
    const auto m = oracle::uniform(dim, n);
    Fixture f;
    f.stress = build_space(m, ValueKind::symtensor, k + 1);
    f.disp = build_space(m, ValueKind::vector, k);
    f.sys = assemble_system(*f.stress, *f.disp, ComplianceTensor(p.mu(), p.lambda(), dim), eta,
                            [&](const Vec& x) { return p.f(x); });
    return f;
}

double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    return (a - b).norm() / std::max(1e-300, b.norm());
}

}  // namespace

TEST(Solver, ZeroLoadGivesZero)
{
    const Fixture f = build(2, 3, 1, zero_problem(2));
    for (auto method : {SolverMethod::direct, SolverMethod::schur_cg}) {
        const SaddleSolution s = solve_saddle(f.sys.A, f.sys.B, f.sys.F, {method});
        EXPECT_EQ(s.stress.norm(), 0.0);
        EXPECT_EQ(s.displacement.norm(), 0.0);
    }
}

TEST(Solver, ResidualInvariant2dCoarse)
{
    const Fixture f = build(2, 4, 0, problem_2d());
    const SaddleSolution s = solve_saddle(f.sys.A, f.sys.B, f.sys.F);
    EXPECT_LE(s.residual_stress_equation, 1e-9);
    EXPECT_LE(s.residual_load_equation, 1e-9);
    const double scale = std::max(1.0, f.sys.F.norm());
    EXPECT_LE((f.sys.A * s.stress + SpMat(f.sys.B.transpose()) * s.displacement).norm() / scale, 1e-9);
    EXPECT_LE((f.sys.B * s.stress - f.sys.F).norm() / scale, 1e-9);
    EXPECT_FALSE(s.method.empty());
}

TEST(Solver, DirectAndSchurAgree)
{
    for (int k : {0, 1}) {
        const Fixture f = build(2, 4, k, problem_2d());
        const SaddleSolution d = solve_saddle(f.sys.A, f.sys.B, f.sys.F, {SolverMethod::direct});
        const SaddleSolution c = solve_saddle(f.sys.A, f.sys.B, f.sys.F, {SolverMethod::schur_cg});
        EXPECT_LT(rel(c.stress, d.stress), 1e-7);
        EXPECT_LT(rel(c.displacement, d.displacement), 1e-7);
        EXPECT_GT(c.iterations, 0);
        EXPECT_LE(c.residual_load_equation, 1e-9);
    }
}

TEST(Solver, ScalingEquivariance)
{
    const Fixture f = build(2, 4, 1, problem_2d());
    const SaddleSolution s1 = solve_saddle(f.sys.A, f.sys.B, f.sys.F);
    const SaddleSolution s3 = solve_saddle(f.sys.A, f.sys.B, -3.5 * f.sys.F);
    EXPECT_LT(rel(s3.stress, -3.5 * s1.stress), 1e-12);
    EXPECT_LT(rel(s3.displacement, -3.5 * s1.displacement), 1e-12);
}

TEST(Solver, SaddleMatrixLayout)
{
    const Fixture f = build(2, 2, 0, problem_2d());
    const SpMat K = saddle_matrix(f.sys.A, f.sys.B);
    const auto ns = f.sys.A.rows();
    const auto nu = f.sys.B.rows();
    ASSERT_EQ(K.rows(), ns + nu);
    const Eigen::MatrixXd Kd(K);
    EXPECT_EQ((Kd.topLeftCorner(ns, ns) - Eigen::MatrixXd(f.sys.A)).norm(), 0.0);
    EXPECT_EQ((Kd.bottomLeftCorner(nu, ns) - Eigen::MatrixXd(f.sys.B)).norm(), 0.0);
    EXPECT_EQ((Kd.topRightCorner(ns, nu) - Eigen::MatrixXd(f.sys.B).transpose()).norm(), 0.0);
    EXPECT_EQ(Kd.bottomRightCorner(nu, nu).norm(), 0.0);
    EXPECT_EQ((Kd - Kd.transpose()).norm(), 0.0);
}

TEST(Solver, SingularSystemReported)
{
    // B with a zero row makes the saddle matrix singular.
    const Fixture f = build(2, 2, 0, problem_2d());
    SpMat B = f.sys.B;
    B.prune([](Eigen::Index row, Eigen::Index, double) { return row != 0; });
    try {
        (void)solve_saddle(f.sys.A, B, f.sys.F, {SolverMethod::direct, 1e-13, 100, "2d n=2 k=0"});
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_NE(std::string(e.what()).find("2d n=2 k=0"), std::string::npos);
    }
    EXPECT_THROW((void)solve_saddle(f.sys.A, B, f.sys.F, {SolverMethod::schur_cg, 1e-13, 100, "ctx"}), SolverError);
}

TEST(Solver, IterationCapReported)
{
    const Fixture f = build(2, 4, 1, problem_2d());
    EXPECT_THROW((void)solve_saddle(f.sys.A, f.sys.B, f.sys.F, {SolverMethod::schur_cg, 1e-13, 2, "cap"}), SolverError);
}

TEST(Solver, DimensionMismatchRejected)
{
    const Fixture f = build(2, 2, 0, problem_2d());
    EXPECT_THROW((void)solve_saddle(f.sys.A, f.sys.B, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Exactness, PolynomialSolutionReproduced)
{
    // u is a quartic bubble, so u in P_k and sigma in P_{k+1} for k >= 4.
    for (int k : {4, 5}) {
        const ManufacturedProblem p = polynomial_problem_2d();
        const Fixture f = build(2, 2, k, p);
        const SaddleSolution s = solve_saddle(f.sys.A, f.sys.B, f.sys.F);
        const ErrorReport e = compute_errors(p, {f.stress, s.stress}, {f.disp, s.displacement}, 1.0);
        EXPECT_LT(e.err_u_L2, 1e-8) << k;
        EXPECT_LT(e.err_sigma_L2, 1e-8) << k;
        EXPECT_LT(e.err_div, 1e-8) << k;
        EXPECT_LT(e.err_star, 1e-8) << k;
        EXPECT_LT(e.err_u_H1, 1e-8) << k;
    }
}

TEST(Exactness, ZeroSolutionForLowDegrees)
{
    for (int dim : {2, 3}) {
        for (int k : {0, 1}) {
            const ManufacturedProblem p = zero_problem(dim);
            const Fixture f = build(dim, 2, k, p);
            const SaddleSolution s = solve_saddle(f.sys.A, f.sys.B, f.sys.F);
            const ErrorReport e = compute_errors(p, {f.stress, s.stress}, {f.disp, s.displacement}, 1.0);
            EXPECT_LT(std::max({e.err_u_L2, e.err_sigma_L2, e.err_div, e.err_star}), 1e-8);
        }
    }
}
