#include "elastidg/mesh.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace elastidg {

namespace {

double longest_edge(const std::vector<Vec>& vertices, std::span<const int> ids)
{
    double h = 0.0;
    for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
            h = std::max(h, (vertices[static_cast<std::size_t>(ids[a])]
                             - vertices[static_cast<std::size_t>(ids[b])]).norm());
        }
    }
    return h;
}

Mat edge_matrix(const std::vector<Vec>& vertices, const std::array<int, 4>& element, int dim)
{
    Mat J(dim, dim);
    const Vec& x0 = vertices[static_cast<std::size_t>(element[0])];
    for (int c = 0; c < dim; ++c) {
        J.col(c) = vertices[static_cast<std::size_t>(element[static_cast<std::size_t>(c + 1)])] - x0;
    }
    return J;
}

// Gradient of the barycentric coordinate of local vertex i.
Vec barycentric_gradient(const ElementGeometry& g, int i)
{
    const Mat& JinvT = g.inverse_transpose;
    if (i > 0) {
        return JinvT.col(i - 1);
    }
    Vec s = -JinvT.col(0);
    for (int c = 1; c < JinvT.cols(); ++c) {
        s -= JinvT.col(c);
    }
    return s;
}

}  // namespace

Mesh::Mesh(int dim, std::vector<Vec> vertices, std::vector<std::array<int, 4>> elements)
    : dim_(dim), vertices_(std::move(vertices)), elements_(std::move(elements))
{
    if (dim_ != 2 && dim_ != 3) {
        throw std::invalid_argument("Mesh: dimension must be 2 or 3, got " + std::to_string(dim_));
    }
    for (const auto& v : vertices_) {
        if (v.size() != dim_) {
            throw MeshError("Mesh: vertex with wrong coordinate count");
        }
    }
    for (auto& el : elements_) {
        for (int a = 0; a <= dim_; ++a) {
            const int v = el[static_cast<std::size_t>(a)];
            if (v < 0 || v >= num_vertices()) {
                throw MeshError("Mesh: element references missing vertex " + std::to_string(v));
            }
        }
        if (dim_ == 2) {
            el[3] = -1;
        }
    }
    build_geometry();
    build_facets();
}

void Mesh::build_geometry()
{
    geometry_.clear();
    geometry_.reserve(elements_.size());
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        auto& el = elements_[e];
        Mat J = edge_matrix(vertices_, el, dim_);
        double det = J.determinant();
        const std::span<const int> ids(el.data(), static_cast<std::size_t>(dim_ + 1));
        const double h = longest_edge(vertices_, ids);
        if (std::abs(det) < 1e-14 * std::pow(h, dim_)) {
            throw MeshError("Mesh: degenerate element " + std::to_string(e));
        }
        if (det < 0.0) {
            std::swap(el[1], el[2]);
            J = edge_matrix(vertices_, el, dim_);
            det = -det;
        }
        ElementGeometry g;
        g.jacobian = J;
        g.inverse_transpose = J.inverse().transpose();
        g.abs_det = det;
        g.diameter = h;
        g.origin = vertices_[static_cast<std::size_t>(el[0])];
        geometry_.push_back(std::move(g));
    }
}

void Mesh::build_facets()
{
    const int nf_local = dim_ + 1;
    element_facets_.assign(elements_.size() * static_cast<std::size_t>(nf_local), -1);
    std::map<std::array<int, 3>, int> lookup;

    for (int e = 0; e < num_elements(); ++e) {
        const auto& el = elements_[static_cast<std::size_t>(e)];
        for (int lf = 0; lf < nf_local; ++lf) {
            FacetSide side;
            side.element = e;
            side.local_facet = lf;
            int m = 0;
            for (int a = 0; a < nf_local; ++a) {
                if (a != lf) {
                    side.ordering[static_cast<std::size_t>(m++)] = a;
                }
            }
            std::sort(side.ordering.begin(), side.ordering.begin() + dim_,
                      [&](int a, int b) { return el[static_cast<std::size_t>(a)] < el[static_cast<std::size_t>(b)]; });
            std::array<int, 3> key{-1, -1, -1};
            for (int a = 0; a < dim_; ++a) {
                key[static_cast<std::size_t>(a)] = el[static_cast<std::size_t>(side.ordering[static_cast<std::size_t>(a)])];
            }

            auto [it, inserted] = lookup.try_emplace(key, num_facets());
            if (inserted) {
                Facet f;
                f.vertices = key;
                f.plus = side;
                f.kind = FacetKind::boundary;
                const Vec grad = barycentric_gradient(geometry_[static_cast<std::size_t>(e)], lf);
                f.normal = -grad / grad.norm();
                const std::span<const int> ids(f.vertices.data(), static_cast<std::size_t>(dim_));
                f.diameter = longest_edge(vertices_, ids);
                const Vec& p0 = vertices_[static_cast<std::size_t>(key[0])];
                const Vec& p1 = vertices_[static_cast<std::size_t>(key[1])];
                if (dim_ == 2) {
                    f.measure = (p1 - p0).norm();
                } else {
                    const Vec& p2 = vertices_[static_cast<std::size_t>(key[2])];
                    const Eigen::Vector3d a = p1 - p0;
                    const Eigen::Vector3d b = p2 - p0;
                    f.measure = 0.5 * a.cross(b).norm();
                }
                facets_.push_back(std::move(f));
            } else {
                Facet& f = facets_[static_cast<std::size_t>(it->second)];
                if (f.kind == FacetKind::interior) {
                    throw MeshError("Mesh: facet shared by more than two elements (element "
                                    + std::to_string(e) + ")");
                }
                f.minus = side;
                f.kind = FacetKind::interior;
            }
            element_facets_[static_cast<std::size_t>(e * nf_local + lf)] = it->second;
        }
    }

    stencils_.assign(elements_.size(), {});
    for (int e = 0; e < num_elements(); ++e) {
        stencils_[static_cast<std::size_t>(e)].push_back(e);
    }
    for (const auto& f : facets_) {
        if (f.is_interior()) {
            stencils_[static_cast<std::size_t>(f.plus.element)].push_back(f.minus.element);
            stencils_[static_cast<std::size_t>(f.minus.element)].push_back(f.plus.element);
        }
    }
    for (auto& s : stencils_) {
        std::sort(s.begin(), s.end());
    }
}

int Mesh::num_interior_facets() const
{
    return static_cast<int>(std::count_if(facets_.begin(), facets_.end(),
                                          [](const Facet& f) { return f.is_interior(); }));
}

std::span<const int> Mesh::element_facets(int element) const
{
    const auto n = static_cast<std::size_t>(dim_ + 1);
    return {element_facets_.data() + static_cast<std::size_t>(element) * n, n};
}

double Mesh::element_volume(int element) const
{
    return geometry(element).abs_det / (dim_ == 2 ? 2.0 : 6.0);
}

double Mesh::max_element_diameter() const
{
    double h = 0.0;
    for (const auto& g : geometry_) {
        h = std::max(h, g.diameter);
    }
    return h;
}

void Mesh::dump(std::ostream& out) const
{
    out << "dim " << dim_ << "\n";
    out << "vertices " << num_vertices() << "\n";
    for (const auto& v : vertices_) {
        for (int c = 0; c < dim_; ++c) {
            out << (c ? " " : "") << v[c];
        }
        out << "\n";
    }
    out << "elements " << num_elements() << "\n";
    for (const auto& el : elements_) {
        for (int a = 0; a <= dim_; ++a) {
            out << (a ? " " : "") << el[static_cast<std::size_t>(a)];
        }
        out << "\n";
    }
    out << "facets " << num_facets() << "\n";
    for (const auto& f : facets_) {
        for (int a = 0; a < dim_; ++a) {
            out << f.vertices[static_cast<std::size_t>(a)] << " ";
        }
        out << f.plus.element << " " << f.minus.element << " "
            << (f.is_interior() ? "interior" : "boundary") << "\n";
    }
}

Mesh build_uniform_mesh(int dim, int n)
{
    if (n < 1) {
        throw std::invalid_argument("build_uniform_mesh: n must be >= 1");
    }
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("build_uniform_mesh: dim must be 2 or 3");
    }
    const double step = 1.0 / n;
    std::vector<Vec> vertices;
    std::vector<std::array<int, 4>> elements;

    if (dim == 2) {
        auto id = [n](int i, int j) { return j * (n + 1) + i; };
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                vertices.push_back(Eigen::Vector2d(i * step, j * step));
            }
        }
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
                elements.push_back({v00, v10, v11, -1});
                elements.push_back({v00, v11, v01, -1});
            }
        }
        return Mesh(2, std::move(vertices), std::move(elements));
    }

    auto id = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
    for (int k = 0; k <= n; ++k) {
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                vertices.push_back(Eigen::Vector3d(i * step, j * step, k * step));
            }
        }
    }
    // Kuhn split: one tetrahedron per axis permutation, walking from the
    // cube's low corner to its high corner.
    constexpr std::array<std::array<int, 3>, 6> perms{{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                for (const auto& p : perms) {
                    std::array<int, 3> c{i, j, k};
                    std::array<int, 4> tet{};
                    tet[0] = id(c[0], c[1], c[2]);
                    for (int s = 0; s < 3; ++s) {
                        ++c[static_cast<std::size_t>(p[static_cast<std::size_t>(s)])];
                        tet[static_cast<std::size_t>(s + 1)] = id(c[0], c[1], c[2]);
                    }
                    elements.push_back(tet);
                }
            }
        }
    }
    return Mesh(3, std::move(vertices), std::move(elements));
}

const ElementGeometry& element_affine_map(const Mesh& mesh, int element)
{
    if (element < 0 || element >= mesh.num_elements()) {
        throw std::out_of_range("element_affine_map: invalid element id");
    }
    return mesh.geometry(element);
}

const std::vector<Facet>& facet_connectivity(const Mesh& mesh) { return mesh.facets(); }

}  // namespace elastidg
