#include "elastidg/mesh.hpp"
#include "elastidg/reference.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace elastidg;

namespace {

// Outward unit normal of the element face formed by `face`, computed
// from coordinates only.
Vec outward_normal(const Mesh& mesh, int element, const std::array<int, 3>& face)
{
    const int d = mesh.dim();
    const auto& el = mesh.elements()[static_cast<std::size_t>(element)];
    int opposite = -1;
    for (int i = 0; i <= d; ++i) {
        if (std::find(face.begin(), face.begin() + d, el[static_cast<std::size_t>(i)]) == face.begin() + d) {
            opposite = el[static_cast<std::size_t>(i)];
        }
    }
    const auto& V = mesh.vertices();
    Vec n(d);
    if (d == 2) {
        const Vec t = V[static_cast<std::size_t>(face[1])] - V[static_cast<std::size_t>(face[0])];
        n << t[1], -t[0];
    } else {
        const Eigen::Vector3d a = V[static_cast<std::size_t>(face[1])] - V[static_cast<std::size_t>(face[0])];
        const Eigen::Vector3d b = V[static_cast<std::size_t>(face[2])] - V[static_cast<std::size_t>(face[0])];
        n = a.cross(b);
    }
    n.normalize();
    if (n.dot(V[static_cast<std::size_t>(opposite)] - V[static_cast<std::size_t>(face[0])]) > 0) {
        n = -n;
    }
    return n;
}

double signed_volume(const Mesh& mesh, int e)
{
    const int d = mesh.dim();
    const auto& el = mesh.elements()[static_cast<std::size_t>(e)];
    Mat J(d, d);
    for (int i = 0; i < d; ++i) {
        J.col(i) = mesh.vertices()[static_cast<std::size_t>(el[static_cast<std::size_t>(i + 1)])]
                   - mesh.vertices()[static_cast<std::size_t>(el[0])];
    }
    return J.determinant() / (d == 2 ? 2.0 : 6.0);
}

}  // namespace

TEST(Mesh, SingleSquare)
{
    const Mesh m = build_uniform_mesh(2, 1);
    EXPECT_EQ(m.num_elements(), 2);
    EXPECT_EQ(m.num_vertices(), 4);
    EXPECT_EQ(m.num_facets(), 5);
    EXPECT_EQ(m.num_interior_facets(), 1);
    EXPECT_EQ(m.num_boundary_facets(), 4);
}

TEST(Mesh, SingleCube)
{
    const Mesh m = build_uniform_mesh(3, 1);
    EXPECT_EQ(m.num_elements(), 6);
    EXPECT_EQ(m.num_vertices(), 8);
}

TEST(Mesh, ElementCountsAndVolume)
{
    for (int dim : {2, 3}) {
        for (int n : {1, 2, 3, 4}) {
            const Mesh m = build_uniform_mesh(dim, n);
            EXPECT_EQ(m.num_elements(), dim == 2 ? 2 * n * n : 6 * n * n * n);
            double total = 0.0;
            double total_det = 0.0;
            for (int e = 0; e < m.num_elements(); ++e) {
                const double v = signed_volume(m, e);
                EXPECT_GT(v, 0.0);
                total += v;
                total_det += element_affine_map(m, e).abs_det / (dim == 2 ? 2.0 : 6.0);
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
            EXPECT_NEAR(total_det, 1.0, 1e-12);
        }
    }
}

TEST(Mesh, Area2dN4)
{
    const Mesh m = build_uniform_mesh(2, 4);
    EXPECT_EQ(m.num_elements(), 32);
    double area = 0.0;
    for (int e = 0; e < m.num_elements(); ++e) {
        area += m.element_volume(e);
    }
    EXPECT_NEAR(area, 1.0, 1e-14);
    EXPECT_EQ(m.num_boundary_facets(), 16);
}

TEST(Mesh, InteriorFacetCount3dMatchesEnumeration)
{
    const Mesh m = build_uniform_mesh(3, 2);
    std::map<std::array<int, 3>, int> faces;
    for (const auto& el : m.elements()) {
        for (int skip = 0; skip < 4; ++skip) {
            std::array<int, 3> f{};
            int j = 0;
            for (int i = 0; i < 4; ++i) {
                if (i != skip) {
                    f[static_cast<std::size_t>(j++)] = el[static_cast<std::size_t>(i)];
                }
            }
            std::sort(f.begin(), f.end());
            ++faces[f];
        }
    }
    int interior = 0;
    int boundary = 0;
    for (const auto& [f, count] : faces) {
        ASSERT_LE(count, 2);
        (count == 2 ? interior : boundary)++;
    }
    EXPECT_EQ(interior, (4 * 48 - boundary) / 2);
    EXPECT_EQ(m.num_interior_facets(), interior);
    EXPECT_EQ(m.num_boundary_facets(), boundary);
    EXPECT_EQ(m.num_facets(), static_cast<int>(faces.size()));
}

TEST(Mesh, ReferenceShapedElement)
{
    const Mesh m(2, {Vec(Eigen::Vector2d(0, 0)), Vec(Eigen::Vector2d(1, 0)), Vec(Eigen::Vector2d(0, 1))},
                 {{0, 1, 2, -1}});
    const ElementGeometry& g = element_affine_map(m, 0);
    EXPECT_TRUE(g.jacobian.isApprox(Mat::Identity(2, 2), 1e-15));
    EXPECT_NEAR(g.abs_det, 1.0, 1e-15);
    EXPECT_NEAR(g.diameter, std::sqrt(2.0), 1e-15);
}

TEST(Mesh, NegativeOrientationIsRepaired)
{
    const Mesh m(2, {Vec(Eigen::Vector2d(0, 0)), Vec(Eigen::Vector2d(1, 0)), Vec(Eigen::Vector2d(0, 1))},
                 {{0, 2, 1, -1}});
    EXPECT_GT(signed_volume(m, 0), 0.0);
}

TEST(Mesh, AffineMapUniform)
{
    for (int dim : {2, 3}) {
        const int n = 4;
        const Mesh m = build_uniform_mesh(dim, n);
        for (int e = 0; e < m.num_elements(); ++e) {
            const ElementGeometry& g = element_affine_map(m, e);
            const double fact = dim == 2 ? 2.0 : 6.0;
            EXPECT_NEAR(g.abs_det, fact * signed_volume(m, e), 1e-15);
            if (dim == 2) {
                EXPECT_NEAR(g.abs_det, 2.0 / 32.0, 1e-15);
            }
            EXPECT_LE(g.diameter, std::sqrt(double(dim)) / n + 1e-15);
            EXPECT_TRUE((g.inverse_transpose * g.jacobian.transpose()).isIdentity(1e-13));
            const auto& el = m.elements()[static_cast<std::size_t>(e)];
            const std::vector<Vec> ref = reference_vertices(dim);
            for (int i = 0; i <= dim; ++i) {
                EXPECT_TRUE(g.map(ref[static_cast<std::size_t>(i)])
                                .isApprox(m.vertices()[static_cast<std::size_t>(el[static_cast<std::size_t>(i)])], 1e-14));
            }
        }
    }
}

TEST(Mesh, NormalsAndSides)
{
    for (int dim : {2, 3}) {
        const Mesh m = build_uniform_mesh(dim, 3);
        std::set<long> diameters;
        for (const Facet& f : facet_connectivity(m)) {
            EXPECT_NEAR(f.normal.norm(), 1.0, 1e-14);
            EXPECT_TRUE(f.normal.isApprox(outward_normal(m, f.plus.element, f.vertices), 1e-14));
            diameters.insert(std::lround(f.diameter * 1e9));
            if (f.is_interior()) {
                EXPECT_TRUE((-f.normal).isApprox(outward_normal(m, f.minus.element, f.vertices), 1e-14));
                EXPECT_NE(f.plus.element, f.minus.element);
            } else {
                EXPECT_EQ(f.minus.element, -1);
                // Boundary facets point out of the unit domain.
                const Vec c = m.vertices()[static_cast<std::size_t>(f.vertices[0])];
                const Vec inward = Vec::Constant(dim, 0.5) - c;
                EXPECT_LT(f.normal.dot(inward), 0.0);
            }
            const auto facets_plus = m.element_facets(f.plus.element);
            EXPECT_EQ(&m.facet(facets_plus[static_cast<std::size_t>(f.plus.local_facet)]), &f);
        }
        EXPECT_LE(static_cast<int>(diameters.size()), dim == 2 ? 2 : 3);
    }
}

TEST(Mesh, StencilIsSortedSelfAndNeighbours)
{
    const Mesh m = build_uniform_mesh(2, 3);
    for (int e = 0; e < m.num_elements(); ++e) {
        const auto s = m.stencil(e);
        EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
        EXPECT_NE(std::find(s.begin(), s.end(), e), s.end());
        EXPECT_LE(s.size(), 4u);
    }
}

TEST(Mesh, ShapeRegularityUniform)
{
    const Mesh m = build_uniform_mesh(3, 3);
    double lo = 1e300;
    double hi = 0.0;
    for (int e = 0; e < m.num_elements(); ++e) {
        const double ratio = std::pow(m.geometry(e).diameter, 3) / m.element_volume(e);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    EXPECT_NEAR(lo, hi, 1e-9 * hi);
}

TEST(Mesh, Errors)
{
    EXPECT_THROW((void)build_uniform_mesh(2, 0), std::invalid_argument);
    EXPECT_THROW((void)build_uniform_mesh(4, 2), std::invalid_argument);
    EXPECT_THROW(Mesh(2, {Vec(Eigen::Vector2d(0, 0)), Vec(Eigen::Vector2d(1, 0)), Vec(Eigen::Vector2d(2, 0))},
                      {{0, 1, 2, -1}}),
                 MeshError);
    // Three triangles on one edge.
    EXPECT_THROW(Mesh(2,
                      {Vec(Eigen::Vector2d(0, 0)), Vec(Eigen::Vector2d(1, 0)), Vec(Eigen::Vector2d(0, 1)),
                       Vec(Eigen::Vector2d(0, -1)), Vec(Eigen::Vector2d(1, 1))},
                      {{0, 1, 2, -1}, {0, 3, 1, -1}, {0, 1, 4, -1}}),
                 MeshError);
}

TEST(Mesh, DumpListsEverything)
{
    const Mesh m = build_uniform_mesh(2, 1);
    std::ostringstream os;
    m.dump(os);
    const std::string s = os.str();
    EXPECT_NE(s.find("vertices 4"), std::string::npos);
    EXPECT_NE(s.find("elements 2"), std::string::npos);
    EXPECT_NE(s.find("facets 5"), std::string::npos);
}
