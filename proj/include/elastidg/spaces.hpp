#pragma once

#include "elastidg/mesh.hpp"
#include "elastidg/reference.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace elastidg {

enum class ValueKind { vector, symtensor };

/// Number of stored components of a symmetric d x d tensor.
[[nodiscard]] constexpr int voigt_size(int dim) { return dim * (dim + 1) / 2; }

/// Matrix indices of Voigt component c: diagonals first, then (1,2),(0,2),(0,1) in 3D / (0,1) in 2D.
[[nodiscard]] std::pair<int, int> voigt_indices(int dim, int c);

/// Unit symmetric tensor for Voigt component c: e_a e_a^T on the diagonal,
/// e_a e_b^T + e_b e_a^T off it. The Frobenius product of two of these
/// carries weight 2 on off-diagonal components.
[[nodiscard]] Mat voigt_unit(int dim, int c);

[[nodiscard]] Eigen::VectorXd to_voigt(const Mat& symmetric);

/// Fully discontinuous space of degree-p polynomials per element.
///
/// DOF layout: element-major, then component (vector: x,y[,z];
/// symtensor: Voigt order), basis index innermost.
class DgSpace {
public:
    DgSpace(std::shared_ptr<const Mesh> mesh, ValueKind kind, int degree);

    [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
    [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
    [[nodiscard]] ValueKind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return mesh_->dim(); }
    [[nodiscard]] int degree() const { return basis_.degree(); }
    [[nodiscard]] const ScalarBasis& basis() const { return basis_; }
    [[nodiscard]] int basis_size() const { return basis_.size(); }
    [[nodiscard]] int components() const { return components_; }
    [[nodiscard]] int dofs_per_element() const { return components_ * basis_.size(); }
    [[nodiscard]] Eigen::Index total_dofs() const
    {
        return static_cast<Eigen::Index>(mesh_->num_elements()) * dofs_per_element();
    }
    [[nodiscard]] Eigen::Index offset(int element) const
    {
        return static_cast<Eigen::Index>(element) * dofs_per_element();
    }
    [[nodiscard]] Eigen::Index dof(int element, int component, int basis_index) const
    {
        return offset(element) + component * basis_size() + basis_index;
    }
    /// Value unit of component c: e_c (vector) or the Voigt unit tensor.
    [[nodiscard]] const Mat& component_unit(int c) const { return units_[static_cast<std::size_t>(c)]; }

private:
    std::shared_ptr<const Mesh> mesh_;
    ValueKind kind_;
    ScalarBasis basis_;
    int components_;
    std::vector<Mat> units_;
};

[[nodiscard]] std::shared_ptr<const DgSpace> build_space(std::shared_ptr<const Mesh> mesh, ValueKind kind,
                                                         int degree);

/// Coefficient vector of a discrete field.
struct FieldCoefficients {
    std::shared_ptr<const DgSpace> space;
    Eigen::VectorXd values;

    [[nodiscard]] auto element_block(int element) const
    {
        return values.segment(space->offset(element), space->dofs_per_element());
    }
};

[[nodiscard]] FieldCoefficients zero_field(std::shared_ptr<const DgSpace> space);

/// Analytic field: returns a d x 1 vector or a symmetric d x d matrix.
using AnalyticField = std::function<Mat(const Vec&)>;

/// Elementwise L2 projection. quad_degree < 0 selects 2*degree + 8.
[[nodiscard]] FieldCoefficients l2_project(std::shared_ptr<const DgSpace> space, const AnalyticField& field,
                                           int quad_degree = -1);

struct FieldValues {
    std::vector<Mat> values;      // d x 1 or d x d per point
    std::vector<Vec> divergence;  // symtensor fields only
    std::vector<Mat> gradient;    // vector fields only: (a, b) = d u_a / d x_b
};

/// Evaluates a field on one element at reference points.
[[nodiscard]] FieldValues evaluate_field(const FieldCoefficients& field, int element,
                                         const std::vector<Vec>& reference_points);

/// Value at one point from precomputed scalar basis values.
[[nodiscard]] Mat combine_value(const DgSpace& space, const Eigen::Ref<const Eigen::VectorXd>& local,
                                const Eigen::Ref<const Eigen::RowVectorXd>& phi);

}  // namespace elastidg
