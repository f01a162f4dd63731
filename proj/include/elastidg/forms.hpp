#pragma once

#include "elastidg/spaces.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace elastidg {

/// Isotropic compliance A sigma = (sigma - lambda/(2 mu + d lambda) tr(sigma) I) / (2 mu).
class ComplianceTensor {
public:
    ComplianceTensor(double mu, double lambda, int dim);

    [[nodiscard]] double mu() const { return mu_; }
    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] int dim() const { return dim_; }

    [[nodiscard]] Mat apply(const Mat& sigma) const;
    /// Matrix of A E_c : E_c' over the Voigt unit tensors.
    [[nodiscard]] Eigen::MatrixXd voigt_matrix() const;

private:
    double mu_;
    double lambda_;
    int dim_;
};

[[nodiscard]] Mat compliance_apply(const ComplianceTensor& ct, const Mat& sigma);

/// Symmetric tensor product u (.) v = (u v^T + v u^T) / 2.
[[nodiscard]] Mat sym_product(const Vec& u, const Vec& v);

/// Average {v} and tensor jump [[v]] of a vector field.
struct VectorTrace {
    Vec average;
    Mat tensor_jump;
};

/// Average {tau} and normal jump [tau] of a tensor field.
struct TensorTrace {
    Mat average;
    Vec jump;
};

/// Traces on a facet with plus-side normal n. Without a minus value the
/// facet is a boundary facet: {v} = v, [[v]] = v (.) n, {tau} = tau and
/// [tau] is reported as the one-sided value tau n.
[[nodiscard]] VectorTrace vector_trace(const Vec& plus, const std::optional<Vec>& minus, const Vec& normal);
[[nodiscard]] TensorTrace tensor_trace(const Mat& plus, const std::optional<Mat>& minus, const Vec& normal);

/// Facet quadrature and basis tables for every (local facet, vertex
/// ordering) an element side can present.
class FacetTraceTables {
public:
    struct Entry {
        FacetQuadrature quadrature;
        BasisTable table;
    };

    FacetTraceTables(const ScalarBasis& basis, int exactness_degree);

    [[nodiscard]] const Entry& at(const FacetSide& side) const;
    [[nodiscard]] int num_points() const { return num_points_; }

private:
    std::map<std::array<int, 4>, Entry> entries_;
    int num_points_ = 0;
};

/// Physical quadrature weight scale on a facet side: |e| / |reference facet|.
[[nodiscard]] double facet_weight_scale(const Facet& facet, const FacetSide& side, int dim);

struct FacetTraceSample {
    Vec x;
    double weight = 0.0;
    Mat average;  // {v} (d x 1) or {tau} (d x d)
    Mat jump;     // [[v]] (d x d) or [tau] (d x 1)
};

/// Average and jump of a discrete field at the facet quadrature points.
[[nodiscard]] std::vector<FacetTraceSample> facet_traces(const FieldCoefficients& field, int facet,
                                                         int exactness_degree);

/// Quadrature degrees used throughout, given displacement degree k.
struct QuadratureDegrees {
    int volume;
    int facet;
    int error;

    [[nodiscard]] static QuadratureDegrees for_displacement_degree(int k)
    {
        return {2 * (k + 2) + 2, 2 * (k + 2) + 2, 2 * (k + 2) + 4};
    }
};

/// Stress-stress block: compliance mass plus eta_e / h_e [sigma].[tau] on
/// interior facets. `eta` holds one value per facet (boundary entries unused).
[[nodiscard]] SpMat assemble_a(const DgSpace& stress, const ComplianceTensor& ct, std::span<const double> eta);
[[nodiscard]] SpMat assemble_a(const DgSpace& stress, const ComplianceTensor& ct, double eta);

/// Displacement-by-stress block: (div_h tau, v) - sum over interior facets of [tau].{v}.
[[nodiscard]] SpMat assemble_b(const DgSpace& stress, const DgSpace& displacement);

using VectorFunction = std::function<Vec(const Vec&)>;

[[nodiscard]] Eigen::VectorXd assemble_load(const DgSpace& displacement, const VectorFunction& f);

/// Full-space star-norm Gram matrix: L2 + broken divergence + weighted jumps.
[[nodiscard]] SpMat assemble_star_gram(const DgSpace& stress, double eta);

/// Block-diagonal L2 mass matrix of a space.
[[nodiscard]] SpMat assemble_mass(const DgSpace& space);

/// r_e(w) in V_h: (r_e(w), v) = -int_e w . {v} ds for all v in V_h.
/// On a boundary facet {v} = v.
[[nodiscard]] FieldCoefficients lifting_apply(std::shared_ptr<const DgSpace> displacement, int facet,
                                              const VectorFunction& w, int exactness_degree = -1);

struct SparseSystem {
    SpMat A;
    SpMat B;
    Eigen::VectorXd F;
};

[[nodiscard]] SparseSystem assemble_system(const DgSpace& stress, const DgSpace& displacement,
                                           const ComplianceTensor& ct, double eta, const VectorFunction& f);

}  // namespace elastidg
