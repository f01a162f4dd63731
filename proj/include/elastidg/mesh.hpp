#pragma once

#include "elastidg/types.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace elastidg {

enum class FacetKind { interior, boundary };

/// One side of a facet as seen from an adjacent element.
///
/// `ordering` lists the element-local vertex indices of the facet in
/// canonical order (ascending global vertex id). Mapping reference facet
/// barycentrics through this ordering yields the same physical points
/// from both sides.
struct FacetSide {
    int element = -1;
    int local_facet = -1;
    std::array<int, 3> ordering{-1, -1, -1};
};

struct Facet {
    std::array<int, 3> vertices{-1, -1, -1};  // sorted global ids, first `dim` used
    FacetSide plus;
    FacetSide minus;  // element == -1 on the boundary
    Vec normal;       // unit, outward from plus
    double diameter = 0.0;
    double measure = 0.0;
    FacetKind kind = FacetKind::boundary;

    [[nodiscard]] bool is_interior() const { return kind == FacetKind::interior; }
};

/// Affine map x = J x_ref + origin from the reference simplex.
struct ElementGeometry {
    Mat jacobian;
    Mat inverse_transpose;
    double abs_det = 0.0;
    double diameter = 0.0;  // longest edge
    Vec origin;

    [[nodiscard]] Vec map(const Vec& reference_point) const
    {
        return jacobian * reference_point + origin;
    }
};

/// Immutable conforming simplicial mesh with facet connectivity.
class Mesh {
public:
    /// Builds a mesh from raw simplices. Negatively oriented elements are
    /// reordered; degenerate ones and non-manifold facets throw MeshError.
    Mesh(int dim, std::vector<Vec> vertices, std::vector<std::array<int, 4>> elements);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int num_elements() const { return static_cast<int>(elements_.size()); }
    [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] int num_facets() const { return static_cast<int>(facets_.size()); }
    [[nodiscard]] int num_interior_facets() const;
    [[nodiscard]] int num_boundary_facets() const { return num_facets() - num_interior_facets(); }

    [[nodiscard]] const std::vector<Vec>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<std::array<int, 4>>& elements() const { return elements_; }
    [[nodiscard]] const std::vector<Facet>& facets() const { return facets_; }
    [[nodiscard]] const Facet& facet(int id) const { return facets_.at(static_cast<std::size_t>(id)); }

    [[nodiscard]] const ElementGeometry& geometry(int element) const
    {
        return geometry_.at(static_cast<std::size_t>(element));
    }
    [[nodiscard]] std::span<const int> element_facets(int element) const;

    /// Sorted list of the element itself and its facet neighbours.
    [[nodiscard]] std::span<const int> stencil(int element) const
    {
        return stencils_.at(static_cast<std::size_t>(element));
    }

    [[nodiscard]] double element_volume(int element) const;
    [[nodiscard]] double max_element_diameter() const;

    /// Plain-text listing of vertices, elements and facets.
    void dump(std::ostream& out) const;

private:
    void build_geometry();
    void build_facets();

    int dim_;
    std::vector<Vec> vertices_;
    std::vector<std::array<int, 4>> elements_;
    std::vector<ElementGeometry> geometry_;
    std::vector<Facet> facets_;
    std::vector<int> element_facets_;  // (dim+1) per element, indexed by local facet
    std::vector<std::vector<int>> stencils_;
};

/// Uniform mesh of the unit square (2n^2 triangles, diagonal from (i,j) to
/// (i+1,j+1)) or unit cube (6n^3 Kuhn tetrahedra along the main diagonal).
[[nodiscard]] Mesh build_uniform_mesh(int dim, int n);

/// Geometry of one element (cached on the mesh).
[[nodiscard]] const ElementGeometry& element_affine_map(const Mesh& mesh, int element);

/// Facet list of the mesh.
[[nodiscard]] const std::vector<Facet>& facet_connectivity(const Mesh& mesh);

}  // namespace elastidg
