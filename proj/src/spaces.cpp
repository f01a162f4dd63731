#include "elastidg/spaces.hpp"

#include <stdexcept>

namespace elastidg {

std::pair<int, int> voigt_indices(int dim, int c)
{
    if (dim == 2) {
        static constexpr std::pair<int, int> map2[3] = {{0, 0}, {1, 1}, {0, 1}};
        return map2[c];
    }
    static constexpr std::pair<int, int> map3[6] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
    return map3[c];
}

Mat voigt_unit(int dim, int c)
{
    const auto [a, b] = voigt_indices(dim, c);
    Mat E = Mat::Zero(dim, dim);
    E(a, b) = 1.0;
    E(b, a) = 1.0;
    return E;
}

Eigen::VectorXd to_voigt(const Mat& symmetric)
{
    const auto dim = static_cast<int>(symmetric.rows());
    Eigen::VectorXd v(voigt_size(dim));
    for (int c = 0; c < voigt_size(dim); ++c) {
        const auto [a, b] = voigt_indices(dim, c);
        v(c) = symmetric(a, b);
    }
    return v;
}

DgSpace::DgSpace(std::shared_ptr<const Mesh> mesh, ValueKind kind, int degree)
    : mesh_(std::move(mesh)), kind_(kind), basis_(mesh_->dim(), degree)
{
    const int d = mesh_->dim();
    components_ = kind == ValueKind::vector ? d : voigt_size(d);
    for (int c = 0; c < components_; ++c) {
        if (kind == ValueKind::vector) {
            Mat e = Mat::Zero(d, 1);
            e(c, 0) = 1.0;
            units_.push_back(e);
        } else {
            units_.push_back(voigt_unit(d, c));
        }
    }
}

std::shared_ptr<const DgSpace> build_space(std::shared_ptr<const Mesh> mesh, ValueKind kind, int degree)
{
    if (!mesh) {
        throw std::invalid_argument("build_space: null mesh");
    }
    if (degree < 0) {
        throw std::invalid_argument("build_space: negative degree");
    }
    return std::make_shared<const DgSpace>(std::move(mesh), kind, degree);
}

FieldCoefficients zero_field(std::shared_ptr<const DgSpace> space)
{
    const auto n = space->total_dofs();
    return {std::move(space), Eigen::VectorXd::Zero(n)};
}

Mat combine_value(const DgSpace& space, const Eigen::Ref<const Eigen::VectorXd>& local,
                  const Eigen::Ref<const Eigen::RowVectorXd>& phi)
{
    const int d = space.dim();
    const int nb = space.basis_size();
    if (space.kind() == ValueKind::vector) {
        Mat v(d, 1);
        for (int c = 0; c < d; ++c) {
            v(c, 0) = phi.dot(local.segment(c * nb, nb));
        }
        return v;
    }
    Mat t(d, d);
    for (int c = 0; c < space.components(); ++c) {
        const auto [a, b] = voigt_indices(d, c);
        const double s = phi.dot(local.segment(c * nb, nb));
        t(a, b) = s;
        t(b, a) = s;
    }
    return t;
}

FieldCoefficients l2_project(std::shared_ptr<const DgSpace> space, const AnalyticField& field, int quad_degree)
{
    const Mesh& mesh = space->mesh();
    const int d = mesh.dim();
    const int qdeg = quad_degree < 0 ? 2 * space->degree() + 8 : quad_degree;
    const QuadratureRule q = make_quadrature(d, qdeg);
    const BasisTable table = space->basis().tabulate(q.points);
    const int nb = space->basis_size();

    FieldCoefficients out = zero_field(space);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementGeometry& g = mesh.geometry(e);
        auto local = out.values.segment(space->offset(e), space->dofs_per_element());
        for (int iq = 0; iq < q.size(); ++iq) {
            const Mat val = field(g.map(q.points[static_cast<std::size_t>(iq)]));
            const double w = q.weights[static_cast<std::size_t>(iq)];
            for (int c = 0; c < space->components(); ++c) {
                double comp = 0.0;
                if (space->kind() == ValueKind::vector) {
                    comp = val(c, 0);
                } else {
                    const auto [a, b] = voigt_indices(d, c);
                    comp = val(a, b);
                }
                // Orthonormal reference basis: coefficient = (f, phi_i)_ref.
                local.segment(c * nb, nb) += (w * comp) * table.values.row(iq).transpose();
            }
        }
    }
    return out;
}

FieldValues evaluate_field(const FieldCoefficients& field, int element, const std::vector<Vec>& reference_points)
{
    const DgSpace& space = *field.space;
    const int d = space.dim();
    const int nb = space.basis_size();
    const ElementGeometry& g = space.mesh().geometry(element);
    const BasisTable table = space.basis().tabulate(reference_points);
    const Eigen::VectorXd local = field.element_block(element);

    FieldValues out;
    const auto np = reference_points.size();
    out.values.reserve(np);
    for (std::size_t p = 0; p < np; ++p) {
        const auto ip = static_cast<Eigen::Index>(p);
        out.values.push_back(combine_value(space, local, table.values.row(ip)));

        // Physical gradients of the scalar basis: (nb, d).
        Eigen::MatrixXd ref_grad(nb, d);
        for (int c = 0; c < d; ++c) {
            ref_grad.col(c) = table.derivs[static_cast<std::size_t>(c)].row(ip).transpose();
        }
        const Eigen::MatrixXd phys_grad = ref_grad * g.inverse_transpose.transpose();

        if (space.kind() == ValueKind::vector) {
            Mat grad(d, d);
            for (int a = 0; a < d; ++a) {
                grad.row(a) = local.segment(a * nb, nb).transpose() * phys_grad;
            }
            out.gradient.push_back(grad);
        } else {
            Vec div = Vec::Zero(d);
            for (int c = 0; c < space.components(); ++c) {
                const Vec grad_c = (local.segment(c * nb, nb).transpose() * phys_grad).transpose();
                div += space.component_unit(c) * grad_c;
            }
            out.divergence.push_back(div);
        }
    }
    return out;
}

}  // namespace elastidg
