#include "elastidg/forms.hpp"

#include "block_sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace elastidg {

ComplianceTensor::ComplianceTensor(double mu, double lambda, int dim) : mu_(mu), lambda_(lambda), dim_(dim)
{
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("ComplianceTensor: dim must be 2 or 3");
    }
    if (mu == 0.0) {
        throw std::invalid_argument("ComplianceTensor: mu must be nonzero");
    }
    if (2.0 * mu + dim * lambda == 0.0) {
        throw std::invalid_argument("ComplianceTensor: 2 mu + d lambda = 0, tensor is singular");
    }
}

Mat ComplianceTensor::apply(const Mat& sigma) const
{
    const double shift = lambda_ / (2.0 * mu_ + dim_ * lambda_) * sigma.trace();
    return (sigma - shift * Mat::Identity(dim_, dim_)) / (2.0 * mu_);
}

Eigen::MatrixXd ComplianceTensor::voigt_matrix() const
{
    const int nc = voigt_size(dim_);
    Eigen::MatrixXd C(nc, nc);
    for (int c = 0; c < nc; ++c) {
        const Mat Ac = apply(voigt_unit(dim_, c));
        for (int c2 = 0; c2 < nc; ++c2) {
            C(c, c2) = Ac.cwiseProduct(voigt_unit(dim_, c2)).sum();
        }
    }
    return C;
}

Mat compliance_apply(const ComplianceTensor& ct, const Mat& sigma) { return ct.apply(sigma); }

Mat sym_product(const Vec& u, const Vec& v) { return 0.5 * (u * v.transpose() + v * u.transpose()); }

VectorTrace vector_trace(const Vec& plus, const std::optional<Vec>& minus, const Vec& normal)
{
    if (!minus) {
        return {plus, sym_product(plus, normal)};
    }
    // n^- = -n^+
    return {0.5 * (plus + *minus), sym_product(plus, normal) - sym_product(*minus, normal)};
}

TensorTrace tensor_trace(const Mat& plus, const std::optional<Mat>& minus, const Vec& normal)
{
    if (!minus) {
        return {plus, plus * normal};
    }
    return {0.5 * (plus + *minus), plus * normal - *minus * normal};
}

FacetTraceTables::FacetTraceTables(const ScalarBasis& basis, int exactness_degree)
{
    const int d = basis.dim();
    for (int lf = 0; lf <= d; ++lf) {
        std::array<int, 3> verts{-1, -1, -1};
        int m = 0;
        for (int a = 0; a <= d; ++a) {
            if (a != lf) {
                verts[static_cast<std::size_t>(m++)] = a;
            }
        }
        do {
            Entry entry;
            entry.quadrature = facet_quadrature_trace(d, exactness_degree, lf, verts);
            entry.table = basis.tabulate(entry.quadrature.points);
            num_points_ = static_cast<int>(entry.quadrature.weights.size());
            entries_.emplace(std::array<int, 4>{lf, verts[0], verts[1], verts[2]}, std::move(entry));
        } while (std::next_permutation(verts.begin(), verts.begin() + d));
    }
}

const FacetTraceTables::Entry& FacetTraceTables::at(const FacetSide& side) const
{
    const auto it = entries_.find({side.local_facet, side.ordering[0], side.ordering[1], side.ordering[2]});
    if (it == entries_.end()) {
        throw ReferenceError("FacetTraceTables: inconsistent facet ordering");
    }
    return it->second;
}

double facet_weight_scale(const Facet& facet, const FacetSide& side, int dim)
{
    return facet.measure / reference_facet_measure(dim, side.local_facet);
}

std::vector<FacetTraceSample> facet_traces(const FieldCoefficients& field, int facet_id, int exactness_degree)
{
    const DgSpace& space = *field.space;
    const Mesh& mesh = space.mesh();
    const int d = mesh.dim();
    const Facet& f = mesh.facet(facet_id);
    const FacetTraceTables tables(space.basis(), exactness_degree);

    const auto& plus = tables.at(f.plus);
    const double scale = facet_weight_scale(f, f.plus, d);
    const ElementGeometry& gp = mesh.geometry(f.plus.element);
    const Eigen::VectorXd local_p = field.element_block(f.plus.element);
    Eigen::VectorXd local_m;
    const FacetTraceTables::Entry* minus = nullptr;
    if (f.is_interior()) {
        minus = &tables.at(f.minus);
        local_m = field.element_block(f.minus.element);
    }

    std::vector<FacetTraceSample> out;
    for (std::size_t q = 0; q < plus.quadrature.weights.size(); ++q) {
        const auto iq = static_cast<Eigen::Index>(q);
        FacetTraceSample s;
        s.x = gp.map(plus.quadrature.points[q]);
        s.weight = plus.quadrature.weights[q] * scale;
        const Mat vp = combine_value(space, local_p, plus.table.values.row(iq));
        if (space.kind() == ValueKind::vector) {
            std::optional<Vec> vm;
            if (minus) {
                vm = combine_value(space, local_m, minus->table.values.row(iq));
            }
            const VectorTrace t = vector_trace(vp, vm, f.normal);
            s.average = t.average;
            s.jump = t.tensor_jump;
        } else {
            std::optional<Mat> tm;
            if (minus) {
                tm = combine_value(space, local_m, minus->table.values.row(iq));
            }
            const TensorTrace t = tensor_trace(vp, tm, f.normal);
            s.average = t.average;
            s.jump = t.jump;
        }
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

// Rows (q, a), columns (c, i): sqrt(w_q) * sign * phi_i(q) * (E_c n)_a.
Eigen::MatrixXd stress_normal_trace(const DgSpace& stress, const BasisTable& table,
                                    std::span<const double> sqrt_w, const Vec& normal, double sign)
{
    const int d = stress.dim();
    const int nb = stress.basis_size();
    const auto nq = static_cast<Eigen::Index>(sqrt_w.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(nq * d, stress.dofs_per_element());
    for (int c = 0; c < stress.components(); ++c) {
        const Vec En = stress.component_unit(c) * normal;
        for (Eigen::Index q = 0; q < nq; ++q) {
            const double s = sign * sqrt_w[static_cast<std::size_t>(q)];
            for (int a = 0; a < d; ++a) {
                if (En[a] != 0.0) {
                    T.block(q * d + a, c * nb, 1, nb) = (s * En[a]) * table.values.row(q);
                }
            }
        }
    }
    return T;
}

// Rows (q, a), columns (a', i): sqrt(w_q) * factor * phi_i(q) delta_{a a'}.
Eigen::MatrixXd vector_trace_matrix(const DgSpace& disp, const BasisTable& table, std::span<const double> sqrt_w,
                                    double factor)
{
    const int d = disp.dim();
    const int nb = disp.basis_size();
    const auto nq = static_cast<Eigen::Index>(sqrt_w.size());
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(nq * d, disp.dofs_per_element());
    for (Eigen::Index q = 0; q < nq; ++q) {
        const double s = factor * sqrt_w[static_cast<std::size_t>(q)];
        for (int a = 0; a < d; ++a) {
            U.block(q * d + a, a * nb, 1, nb) = s * table.values.row(q);
        }
    }
    return U;
}

std::vector<double> sqrt_weights(const FacetQuadrature& q, double scale)
{
    std::vector<double> s(q.weights.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = std::sqrt(q.weights[i] * scale);
    }
    return s;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

int facet_degree(const DgSpace& stress) { return QuadratureDegrees::for_displacement_degree(stress.degree() - 1).facet; }

void add_jump_penalty(detail::BlockSparseBuilder& builder, const DgSpace& stress, std::span<const double> eta)
{
    const Mesh& mesh = stress.mesh();
    const int d = mesh.dim();
    const FacetTraceTables tables(stress.basis(), facet_degree(stress));
    for (int fid = 0; fid < mesh.num_facets(); ++fid) {
        const Facet& f = mesh.facet(fid);
        if (!f.is_interior()) {
            continue;
        }
        const double coeff = eta[static_cast<std::size_t>(fid)] / f.diameter;
        if (coeff == 0.0) {
            continue;
        }
        const auto& ep = tables.at(f.plus);
        const auto& em = tables.at(f.minus);
        const auto sw = sqrt_weights(ep.quadrature, facet_weight_scale(f, f.plus, d));
        const Eigen::MatrixXd Tp = stress_normal_trace(stress, ep.table, sw, f.normal, 1.0);
        const Eigen::MatrixXd Tm = stress_normal_trace(stress, em.table, sw, f.normal, -1.0);
        const Eigen::MatrixXd pp = symmetrized(coeff * (Tp.transpose() * Tp));
        const Eigen::MatrixXd mm = symmetrized(coeff * (Tm.transpose() * Tm));
        const Eigen::MatrixXd pm = coeff * (Tp.transpose() * Tm);
        builder.add(f.plus.element, f.plus.element, pp);
        builder.add(f.minus.element, f.minus.element, mm);
        builder.add(f.plus.element, f.minus.element, pm);
        builder.add(f.minus.element, f.plus.element, pm.transpose());
    }
}

std::vector<double> uniform_eta(const Mesh& mesh, double eta)
{
    return std::vector<double>(static_cast<std::size_t>(mesh.num_facets()), eta);
}

}  // namespace

SpMat assemble_a(const DgSpace& stress, const ComplianceTensor& ct, std::span<const double> eta)
{
    if (stress.kind() != ValueKind::symtensor) {
        throw std::invalid_argument("assemble_a: stress space must be symmetric-tensor valued");
    }
    const Mesh& mesh = stress.mesh();
    if (static_cast<int>(eta.size()) != mesh.num_facets()) {
        throw std::invalid_argument("assemble_a: eta must have one entry per facet");
    }
    if (std::any_of(eta.begin(), eta.end(), [](double e) { return e < 0.0; })) {
        throw std::invalid_argument("assemble_a: eta must be non-negative");
    }
    const int nb = stress.basis_size();
    const int ndof = stress.dofs_per_element();
    detail::BlockSparseBuilder builder(mesh, ndof, ndof);

    // Orthonormal reference basis: int_K phi_i phi_j = |det J| delta_ij.
    const Eigen::MatrixXd C = symmetrized(ct.voigt_matrix());
    Eigen::MatrixXd ref_block = Eigen::MatrixXd::Zero(ndof, ndof);
    for (int c = 0; c < stress.components(); ++c) {
        for (int c2 = 0; c2 < stress.components(); ++c2) {
            ref_block.block(c * nb, c2 * nb, nb, nb).diagonal().setConstant(C(c, c2));
        }
    }
    for (int e = 0; e < mesh.num_elements(); ++e) {
        builder.add(e, e, mesh.geometry(e).abs_det * ref_block);
    }
    add_jump_penalty(builder, stress, eta);
    return builder.finish();
}

SpMat assemble_a(const DgSpace& stress, const ComplianceTensor& ct, double eta)
{
    const auto etas = uniform_eta(stress.mesh(), eta);
    return assemble_a(stress, ct, etas);
}

SpMat assemble_b(const DgSpace& stress, const DgSpace& displacement)
{
    if (stress.kind() != ValueKind::symtensor || displacement.kind() != ValueKind::vector) {
        throw std::invalid_argument("assemble_b: expected (symtensor, vector) spaces");
    }
    if (&stress.mesh() != &displacement.mesh()) {
        throw std::invalid_argument("assemble_b: spaces live on different meshes");
    }
    const Mesh& mesh = stress.mesh();
    const int d = mesh.dim();
    const int nbs = stress.basis_size();
    const int nbu = displacement.basis_size();
    detail::BlockSparseBuilder builder(mesh, displacement.dofs_per_element(), stress.dofs_per_element());

    const auto degrees = QuadratureDegrees::for_displacement_degree(displacement.degree());
    const QuadratureRule q = make_quadrature(d, degrees.volume);
    const BasisTable ts = stress.basis().tabulate(q.points);
    const BasisTable tu = displacement.basis().tabulate(q.points);

    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementGeometry& g = mesh.geometry(e);
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(displacement.dofs_per_element(), stress.dofs_per_element());
        for (int iq = 0; iq < q.size(); ++iq) {
            const double w = q.weights[static_cast<std::size_t>(iq)] * g.abs_det;
            // Physical gradients of the stress scalar basis, (d, nbs).
            Eigen::MatrixXd ref_grad(d, nbs);
            for (int c = 0; c < d; ++c) {
                ref_grad.row(c) = ts.derivs[static_cast<std::size_t>(c)].row(iq);
            }
            const Eigen::MatrixXd grad = g.inverse_transpose * ref_grad;
            const Eigen::RowVectorXd phi_u = w * tu.values.row(iq);
            for (int c = 0; c < stress.components(); ++c) {
                // div(phi E_c) = E_c grad(phi)
                const Eigen::MatrixXd div = stress.component_unit(c) * grad;
                for (int a = 0; a < d; ++a) {
                    block.block(a * nbu, c * nbs, nbu, nbs).noalias() += phi_u.transpose() * div.row(a);
                }
            }
        }
        builder.add(e, e, block);
    }

    const FacetTraceTables stables(stress.basis(), degrees.facet);
    const FacetTraceTables utables(displacement.basis(), degrees.facet);
    for (int fid = 0; fid < mesh.num_facets(); ++fid) {
        const Facet& f = mesh.facet(fid);
        if (!f.is_interior()) {
            continue;
        }
        const auto sw = sqrt_weights(stables.at(f.plus).quadrature, facet_weight_scale(f, f.plus, d));
        const std::array<const FacetSide*, 2> sides{&f.plus, &f.minus};
        const std::array<double, 2> signs{1.0, -1.0};
        std::array<Eigen::MatrixXd, 2> T;
        std::array<Eigen::MatrixXd, 2> U;
        for (std::size_t s = 0; s < 2; ++s) {
            T[s] = stress_normal_trace(stress, stables.at(*sides[s]).table, sw, f.normal, signs[s]);
            U[s] = vector_trace_matrix(displacement, utables.at(*sides[s]).table, sw, 0.5);
        }
        for (std::size_t s = 0; s < 2; ++s) {
            for (std::size_t t = 0; t < 2; ++t) {
                builder.add(sides[s]->element, sides[t]->element, -(U[s].transpose() * T[t]));
            }
        }
    }
    return builder.finish();
}

Eigen::VectorXd assemble_load(const DgSpace& displacement, const VectorFunction& f)
{
    const Mesh& mesh = displacement.mesh();
    const int d = mesh.dim();
    const int nb = displacement.basis_size();
    const QuadratureRule q =
        make_quadrature(d, QuadratureDegrees::for_displacement_degree(displacement.degree()).volume);
    const BasisTable table = displacement.basis().tabulate(q.points);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(displacement.total_dofs());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementGeometry& g = mesh.geometry(e);
        auto local = F.segment(displacement.offset(e), displacement.dofs_per_element());
        for (int iq = 0; iq < q.size(); ++iq) {
            const Vec fx = f(g.map(q.points[static_cast<std::size_t>(iq)]));
            const double w = q.weights[static_cast<std::size_t>(iq)] * g.abs_det;
            for (int a = 0; a < d; ++a) {
                local.segment(a * nb, nb) += (w * fx[a]) * table.values.row(iq).transpose();
            }
        }
    }
    return F;
}

SpMat assemble_star_gram(const DgSpace& stress, double eta)
{
    const Mesh& mesh = stress.mesh();
    const int d = mesh.dim();
    const int nb = stress.basis_size();
    const int ndof = stress.dofs_per_element();
    detail::BlockSparseBuilder builder(mesh, ndof, ndof);

    const QuadratureRule q = make_quadrature(d, 2 * stress.degree());
    const BasisTable table = stress.basis().tabulate(q.points);
    Eigen::MatrixXd frob(stress.components(), stress.components());
    for (int c = 0; c < stress.components(); ++c) {
        for (int c2 = 0; c2 < stress.components(); ++c2) {
            frob(c, c2) = stress.component_unit(c).cwiseProduct(stress.component_unit(c2)).sum();
        }
    }
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementGeometry& g = mesh.geometry(e);
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(ndof, ndof);
        for (int c = 0; c < stress.components(); ++c) {
            block.block(c * nb, c * nb, nb, nb).diagonal().setConstant(frob(c, c) * g.abs_det);
        }
        // Divergence rows: D(q*d + a, (c, i)) = sqrt(w) (E_c grad phi_i)_a
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q.size()) * d, ndof);
        for (int iq = 0; iq < q.size(); ++iq) {
            const double sw = std::sqrt(q.weights[static_cast<std::size_t>(iq)] * g.abs_det);
            Eigen::MatrixXd ref_grad(d, nb);
            for (int c = 0; c < d; ++c) {
                ref_grad.row(c) = table.derivs[static_cast<std::size_t>(c)].row(iq);
            }
            const Eigen::MatrixXd grad = g.inverse_transpose * ref_grad;
            for (int c = 0; c < stress.components(); ++c) {
                D.block(static_cast<Eigen::Index>(iq) * d, c * nb, d, nb) = sw * (stress.component_unit(c) * grad);
            }
        }
        block += symmetrized(D.transpose() * D);
        builder.add(e, e, block);
    }
    const auto etas = uniform_eta(mesh, eta);
    add_jump_penalty(builder, stress, etas);
    return builder.finish();
}

SpMat assemble_mass(const DgSpace& space)
{
    const Mesh& mesh = space.mesh();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(space.total_dofs()));
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double det = mesh.geometry(e).abs_det;
        for (int c = 0; c < space.components(); ++c) {
            const double w = space.component_unit(c).squaredNorm();
            for (int i = 0; i < space.basis_size(); ++i) {
                const auto k = space.dof(e, c, i);
                trips.emplace_back(k, k, w * det);
            }
        }
    }
    SpMat M(space.total_dofs(), space.total_dofs());
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

FieldCoefficients lifting_apply(std::shared_ptr<const DgSpace> displacement, int facet_id, const VectorFunction& w,
                                int exactness_degree)
{
    const DgSpace& space = *displacement;
    const Mesh& mesh = space.mesh();
    const int d = mesh.dim();
    const int nb = space.basis_size();
    if (facet_id < 0 || facet_id >= mesh.num_facets()) {
        throw std::out_of_range("lifting_apply: invalid facet id");
    }
    const int degree =
        exactness_degree < 0 ? QuadratureDegrees::for_displacement_degree(space.degree()).facet : exactness_degree;
    const Facet& f = mesh.facet(facet_id);
    const FacetTraceTables tables(space.basis(), degree);

    FieldCoefficients r = zero_field(displacement);
    const auto& ep = tables.at(f.plus);
    const double scale = facet_weight_scale(f, f.plus, d);
    const ElementGeometry& gp = mesh.geometry(f.plus.element);
    std::vector<Vec> wq;
    for (const auto& x : ep.quadrature.points) {
        wq.push_back(w(gp.map(x)));
    }

    const double factor = f.is_interior() ? 0.5 : 1.0;
    std::vector<const FacetSide*> sides{&f.plus};
    if (f.is_interior()) {
        sides.push_back(&f.minus);
    }
    for (const FacetSide* side : sides) {
        const auto& entry = tables.at(*side);
        const double det = mesh.geometry(side->element).abs_det;
        auto local = r.values.segment(space.offset(side->element), space.dofs_per_element());
        for (std::size_t q = 0; q < wq.size(); ++q) {
            const double wt = ep.quadrature.weights[q] * scale;
            for (int a = 0; a < d; ++a) {
                local.segment(a * nb, nb) -=
                    (factor * wt * wq[q][a] / det) * entry.table.values.row(static_cast<Eigen::Index>(q)).transpose();
            }
        }
    }
    return r;
}

SparseSystem assemble_system(const DgSpace& stress, const DgSpace& displacement, const ComplianceTensor& ct,
                             double eta, const VectorFunction& f)
{
    return {assemble_a(stress, ct, eta), assemble_b(stress, displacement), assemble_load(displacement, f)};
}

}  // namespace elastidg
