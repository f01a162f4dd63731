// Brute-force evaluation of the discrete forms from pointwise field values.
// Used as an independent check on the assembled matrices.
#pragma once

#include "elastidg/forms.hpp"

#include <cmath>
#include <random>

namespace oracle {

using namespace elastidg;

inline constexpr int kDegree = 14;

// sum_K int_K g(values of fields at a point) dx
template <class G>
double volume_sum(const FieldCoefficients& a, const FieldCoefficients& b, G g)
{
    const Mesh& mesh = a.space->mesh();
    const QuadratureRule q = make_quadrature(mesh.dim(), kDegree);
    double s = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const FieldValues fa = evaluate_field(a, e, q.points);
        const FieldValues fb = evaluate_field(b, e, q.points);
        const double det = mesh.geometry(e).abs_det;
        for (int i = 0; i < q.size(); ++i) {
            s += q.weights[static_cast<std::size_t>(i)] * det * g(fa, fb, static_cast<std::size_t>(i));
        }
    }
    return s;
}

// sum over facets (interior only unless `boundary`) of int_e g(sample_a, sample_b, facet) ds
template <class G>
double facet_sum(const FieldCoefficients& a, const FieldCoefficients& b, bool boundary, G g)
{
    const Mesh& mesh = a.space->mesh();
    double s = 0.0;
    for (int f = 0; f < mesh.num_facets(); ++f) {
        if (!boundary && !mesh.facet(f).is_interior()) {
            continue;
        }
        const auto ta = facet_traces(a, f, kDegree);
        const auto tb = facet_traces(b, f, kDegree);
        for (std::size_t i = 0; i < ta.size(); ++i) {
            s += ta[i].weight * g(ta[i], tb[i], mesh.facet(f));
        }
    }
    return s;
}

inline double frob(const Mat& x, const Mat& y) { return x.cwiseProduct(y).sum(); }

// a_h(sigma, tau) with a uniform penalty.
inline double a_form(const FieldCoefficients& sigma, const FieldCoefficients& tau, const ComplianceTensor& ct,
                     double eta)
{
    const double vol = volume_sum(sigma, tau, [&](const FieldValues& s, const FieldValues& t, std::size_t i) {
        return frob(ct.apply(s.values[i]), t.values[i]);
    });
    const double jump = facet_sum(sigma, tau, false, [&](const FacetTraceSample& s, const FacetTraceSample& t,
                                                        const Facet& f) {
        return eta / f.diameter * frob(s.jump, t.jump);
    });
    return vol + jump;
}

// b_h(tau, v)
inline double b_form(const FieldCoefficients& tau, const FieldCoefficients& v)
{
    const double vol = volume_sum(tau, v, [](const FieldValues& t, const FieldValues& u, std::size_t i) {
        return t.divergence[i].dot(Vec(u.values[i]));
    });
    const double jump = facet_sum(tau, v, false, [](const FacetTraceSample& t, const FacetTraceSample& u,
                                                   const Facet&) { return frob(t.jump, u.average); });
    return vol - jump;
}

inline double l2_inner(const FieldCoefficients& a, const FieldCoefficients& b)
{
    return volume_sum(a, b, [](const FieldValues& x, const FieldValues& y, std::size_t i) {
        return frob(x.values[i], y.values[i]);
    });
}

inline double star_norm_squared(const FieldCoefficients& tau, double eta)
{
    const double l2 = l2_inner(tau, tau);
    const double div = volume_sum(tau, tau, [](const FieldValues& t, const FieldValues&, std::size_t i) {
        return t.divergence[i].squaredNorm();
    });
    const double jump = facet_sum(tau, tau, false, [&](const FacetTraceSample& t, const FacetTraceSample&,
                                                      const Facet& f) {
        return eta / f.diameter * t.jump.squaredNorm();
    });
    return l2 + div + jump;
}

inline FieldCoefficients random_field(std::shared_ptr<const DgSpace> space, std::mt19937& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    FieldCoefficients f = zero_field(space);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        f.values[i] = n(rng);
    }
    return f;
}

inline std::shared_ptr<const Mesh> uniform(int dim, int n)
{
    return std::make_shared<const Mesh>(build_uniform_mesh(dim, n));
}

}  // namespace oracle
