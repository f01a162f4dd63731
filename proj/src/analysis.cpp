#include "elastidg/analysis.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <random>
#include <stdexcept>

namespace elastidg {

namespace {

Eigen::MatrixXd physical_gradients(const BasisTable& table, int iq, const ElementGeometry& g, int d)
{
    Eigen::MatrixXd ref(d, table.values.cols());
    for (int c = 0; c < d; ++c) {
        ref.row(c) = table.derivs[static_cast<std::size_t>(c)].row(iq);
    }
    return g.inverse_transpose * ref;  // (d, nb)
}

}  // namespace

ErrorReport compute_errors(const ManufacturedProblem& problem, const FieldCoefficients& stress,
                           const FieldCoefficients& displacement, double eta, double h)
{
    const DgSpace& ss = *stress.space;
    const DgSpace& us = *displacement.space;
    const Mesh& mesh = ss.mesh();
    const int d = mesh.dim();
    const ComplianceTensor ct(problem.mu(), problem.lambda(), d);
    const int qdeg = QuadratureDegrees::for_displacement_degree(us.degree()).error;
    const QuadratureRule q = make_quadrature(d, qdeg);
    const BasisTable ts = ss.basis().tabulate(q.points);
    const BasisTable tu = us.basis().tabulate(q.points);
    const int nbs = ss.basis_size();
    const int nbu = us.basis_size();

    double eu = 0.0, es = 0.0, ediv = 0.0, eA = 0.0, eh1 = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementGeometry& g = mesh.geometry(e);
        const Eigen::VectorXd ls = stress.element_block(e);
        const Eigen::VectorXd lu = displacement.element_block(e);
        for (int iq = 0; iq < q.size(); ++iq) {
            const Vec x = g.map(q.points[static_cast<std::size_t>(iq)]);
            const double w = q.weights[static_cast<std::size_t>(iq)] * g.abs_det;

            const Mat u_err = problem.u(x) - combine_value(us, lu, tu.values.row(iq));
            const Mat s_err = problem.sigma(x) - combine_value(ss, ls, ts.values.row(iq));

            const Eigen::MatrixXd gs = physical_gradients(ts, iq, g, d);
            Vec div_h = Vec::Zero(d);
            for (int c = 0; c < ss.components(); ++c) {
                div_h += ss.component_unit(c) * (gs * ls.segment(c * nbs, nbs));
            }
            const Vec div_err = problem.f(x) - div_h;

            const Eigen::MatrixXd gu = physical_gradients(tu, iq, g, d);
            Mat grad_h(d, d);
            for (int a = 0; a < d; ++a) {
                grad_h.row(a) = (gu * lu.segment(a * nbu, nbu)).transpose();
            }
            const Mat grad_err = problem.grad_u(x) - grad_h;

            eu += w * u_err.squaredNorm();
            es += w * s_err.squaredNorm();
            ediv += w * div_err.squaredNorm();
            eA += w * ct.apply(s_err).cwiseProduct(s_err).sum();
            eh1 += w * grad_err.squaredNorm();
        }
    }

    // The exact stress is continuous, so [sigma - sigma_h] = -[sigma_h].
    const int fdeg = QuadratureDegrees::for_displacement_degree(us.degree()).error;
    const FacetTraceTables tables(ss.basis(), fdeg);
    double ejump = 0.0;
    for (int fid = 0; fid < mesh.num_facets(); ++fid) {
        const Facet& f = mesh.facet(fid);
        if (!f.is_interior()) {
            continue;
        }
        const auto& ep = tables.at(f.plus);
        const auto& em = tables.at(f.minus);
        const double scale = facet_weight_scale(f, f.plus, d);
        const Eigen::VectorXd lp = stress.element_block(f.plus.element);
        const Eigen::VectorXd lm = stress.element_block(f.minus.element);
        double acc = 0.0;
        for (std::size_t iq = 0; iq < ep.quadrature.weights.size(); ++iq) {
            const auto r = static_cast<Eigen::Index>(iq);
            const Mat sp = combine_value(ss, lp, ep.table.values.row(r));
            const Mat sm = combine_value(ss, lm, em.table.values.row(r));
            acc += ep.quadrature.weights[iq] * scale * tensor_trace(sp, sm, f.normal).jump.squaredNorm();
        }
        ejump += eta / f.diameter * acc;
    }

    ErrorReport r;
    r.h = h < 0.0 ? mesh.max_element_diameter() : h;
    r.dofs_sigma = ss.total_dofs();
    r.dofs_u = us.total_dofs();
    r.err_u_L2 = std::sqrt(eu);
    r.err_sigma_L2 = std::sqrt(es);
    r.err_div = std::sqrt(ediv);
    r.err_jump = std::sqrt(ejump);
    r.err_star = std::sqrt(es + ediv + ejump);
    r.err_A = std::sqrt(eA);
    r.err_u_H1 = std::sqrt(eh1);
    return r;
}

double observed_order(double e_coarse, double e_fine, double h_coarse, double h_fine)
{
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

ConvergenceReport convergence_orders(const std::vector<ErrorReport>& reports)
{
    if (reports.size() < 2) {
        throw std::invalid_argument("convergence_orders: need at least two levels");
    }
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (!(reports[i].h < reports[i - 1].h)) {
            throw std::invalid_argument("convergence_orders: h must be strictly decreasing");
        }
    }
    ConvergenceReport out;
    out.levels = reports;
    for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
        const ErrorReport& c = reports[i];
        const ErrorReport& f = reports[i + 1];
        NormOrders o;
        o.u_L2 = observed_order(c.err_u_L2, f.err_u_L2, c.h, f.h);
        o.sigma_L2 = observed_order(c.err_sigma_L2, f.err_sigma_L2, c.h, f.h);
        o.div = observed_order(c.err_div, f.err_div, c.h, f.h);
        o.star = observed_order(c.err_star, f.err_star, c.h, f.h);
        o.energy = observed_order(c.err_A, f.err_A, c.h, f.h);
        out.orders.push_back(o);
    }
    return out;
}

double infsup_constant(const SpMat& star_gram, const SpMat& B, const SpMat& u_mass)
{
    const Eigen::MatrixXd G(star_gram);
    const Eigen::MatrixXd Bd(B);
    const Eigen::MatrixXd M(u_mass);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("infsup_constant: star-norm Gram matrix is not positive definite");
    }
    const Eigen::MatrixXd X = llt.solve(Bd.transpose());
    Eigen::MatrixXd S = Bd * X;
    S = 0.5 * (S + S.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, M, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("infsup_constant: eigenvalue solve failed");
    }
    const double lo = eig.eigenvalues()(0);
    const double hi = eig.eigenvalues()(eig.eigenvalues().size() - 1);
    if (lo <= 1e-12 * hi) {
        throw std::runtime_error("infsup_constant: B is rank deficient (zero singular value)");
    }
    return std::sqrt(lo);
}

double kellipticity_constant(const SpMat& A, const SpMat& B, const SpMat& star_gram)
{
    const Eigen::MatrixXd Bt = Eigen::MatrixXd(B).transpose();
    const Eigen::Index ns = Bt.rows();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Bt);
    const Eigen::Index rank = qr.rank();
    if (rank >= ns) {
        throw std::runtime_error("kellipticity_constant: kernel of B is empty");
    }
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd Z = Q.rightCols(ns - rank);
    Eigen::MatrixXd Az = Z.transpose() * Eigen::MatrixXd(A) * Z;
    Eigen::MatrixXd Gz = Z.transpose() * Eigen::MatrixXd(star_gram) * Z;
    Az = 0.5 * (Az + Az.transpose()).eval();
    Gz = 0.5 * (Gz + Gz.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(Az, Gz, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("kellipticity_constant: eigenvalue solve failed");
    }
    return eig.eigenvalues()(0);
}

double lifting_constant(std::shared_ptr<const DgSpace> displacement, int samples_per_facet, std::uint32_t seed)
{
    const Mesh& mesh = displacement->mesh();
    const int d = mesh.dim();
    const int k = displacement->degree();
    const int qdeg = QuadratureDegrees::for_displacement_degree(k).facet;
    const FacetTraceTables tables(displacement->basis(), qdeg);
    const SpMat M = assemble_mass(*displacement);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);

    // Polynomials of degree k in the physical coordinates restricted to the facet.
    const ScalarBasis poly(d, k);
    double worst = 0.0;
    for (int fid = 0; fid < mesh.num_facets(); ++fid) {
        const Facet& f = mesh.facet(fid);
        if (!f.is_interior()) {
            continue;
        }
        const auto& ep = tables.at(f.plus);
        const double scale = facet_weight_scale(f, f.plus, d);
        const ElementGeometry& gp = mesh.geometry(f.plus.element);
        for (int s = 0; s < samples_per_facet; ++s) {
            Eigen::MatrixXd coeffs(d, poly.size());
            for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
                coeffs.data()[i] = dist(rng);
            }
            // Evaluate on the plus element's reference coordinates so w is a
            // polynomial trace on e.
            auto w = [&](const Vec& x) -> Vec {
                const Vec xref = gp.jacobian.inverse() * (x - gp.origin);
                return coeffs * poly.values(xref);
            };
            double wnorm2 = 0.0;
            for (std::size_t iq = 0; iq < ep.quadrature.weights.size(); ++iq) {
                wnorm2 += ep.quadrature.weights[iq] * scale * w(gp.map(ep.quadrature.points[iq])).squaredNorm();
            }
            const FieldCoefficients r = lifting_apply(displacement, fid, w, qdeg);
            const double rnorm = std::sqrt(r.values.dot(M * r.values));
            worst = std::max(worst, rnorm * std::sqrt(f.diameter) / std::sqrt(wnorm2));
        }
    }
    return worst;
}

Eigen::VectorXd consistency_residual(const ManufacturedProblem& problem, const DgSpace& stress,
                                     const ComplianceTensor& ct)
{
    const Mesh& mesh = stress.mesh();
    const int d = mesh.dim();
    const int nb = stress.basis_size();
    const int k = stress.degree() - 1;
    const auto degrees = QuadratureDegrees::for_displacement_degree(k);
    const QuadratureRule q = make_quadrature(d, degrees.error);
    const BasisTable table = stress.basis().tabulate(q.points);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(stress.total_dofs());

    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementGeometry& g = mesh.geometry(e);
        auto local = r.segment(stress.offset(e), stress.dofs_per_element());
        for (int iq = 0; iq < q.size(); ++iq) {
            const Vec x = g.map(q.points[static_cast<std::size_t>(iq)]);
            const double w = q.weights[static_cast<std::size_t>(iq)] * g.abs_det;
            const Mat Asigma = ct.apply(problem.sigma(x));
            const Vec u = problem.u(x);
            const Eigen::MatrixXd grad = physical_gradients(table, iq, g, d);
            for (int c = 0; c < stress.components(); ++c) {
                const Mat& E = stress.component_unit(c);
                const double a = Asigma.cwiseProduct(E).sum();
                // (div(phi E), u) = grad(phi) . (E u)
                const Vec Eu = E * u;
                local.segment(c * nb, nb) +=
                    w * (a * table.values.row(iq).transpose() + grad.transpose() * Eu);
            }
        }
    }

    const FacetTraceTables tables(stress.basis(), degrees.error);
    for (int fid = 0; fid < mesh.num_facets(); ++fid) {
        const Facet& f = mesh.facet(fid);
        if (!f.is_interior()) {
            continue;
        }
        const auto& ep = tables.at(f.plus);
        const double scale = facet_weight_scale(f, f.plus, d);
        const ElementGeometry& gp = mesh.geometry(f.plus.element);
        const std::array<const FacetSide*, 2> sides{&f.plus, &f.minus};
        const std::array<double, 2> signs{1.0, -1.0};
        for (std::size_t s = 0; s < 2; ++s) {
            const auto& entry = tables.at(*sides[s]);
            auto local = r.segment(stress.offset(sides[s]->element), stress.dofs_per_element());
            for (std::size_t iq = 0; iq < ep.quadrature.weights.size(); ++iq) {
                const Vec u = problem.u(gp.map(ep.quadrature.points[iq]));
                const double w = ep.quadrature.weights[iq] * scale;
                for (int c = 0; c < stress.components(); ++c) {
                    const double jump_dot_u = (stress.component_unit(c) * f.normal).dot(u);
                    local.segment(c * nb, nb) -= (w * signs[s] * jump_dot_u)
                                                 * entry.table.values.row(static_cast<Eigen::Index>(iq)).transpose();
                }
            }
        }
    }
    return r;
}

}  // namespace elastidg
