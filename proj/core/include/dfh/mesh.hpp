#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfh {

using Index = std::int32_t;
inline constexpr Index kNoElement = -1;

struct Point {
    double x{0.0};
    double y{0.0};

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An edge of the triangulation. `elements[1] == kNoElement` on the boundary.
struct Edge {
    std::array<Index, 2> vertices{};  // sorted ascending
    std::array<Index, 2> elements{kNoElement, kNoElement};
    bool boundary() const { return elements[1] == kNoElement; }
};

/// Conforming triangulation of a polygonal domain.
///
/// Triangles are stored counterclockwise. Local edge `i` of a triangle is the
/// edge opposite its local vertex `i`. The refinement edge of every triangle is
/// its longest edge, ties broken by the smaller global edge id.
///
/// A Mesh is an immutable value: refinement returns a new Mesh.
class Mesh {
public:
    Mesh() = default;

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_elements() const { return triangles_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    std::span<const Point> vertices() const { return vertices_; }
    std::span<const std::array<Index, 3>> triangles() const { return triangles_; }
    std::span<const Edge> edges() const { return edges_; }

    const Point& vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }
    const std::array<Index, 3>& triangle(Index k) const {
        return triangles_[static_cast<std::size_t>(k)];
    }
    const Edge& edge(Index e) const { return edges_[static_cast<std::size_t>(e)]; }
    /// Global edge ids of a triangle; entry `i` is opposite local vertex `i`.
    const std::array<Index, 3>& element_edges(Index k) const {
        return element_edges_[static_cast<std::size_t>(k)];
    }
    bool is_boundary_edge(Index e) const { return edge(e).boundary(); }
    bool is_boundary_vertex(Index v) const {
        return boundary_vertex_[static_cast<std::size_t>(v)] != 0;
    }
    /// Local index (0..2) of the refinement edge of triangle k.
    int refinement_edge(Index k) const { return refinement_edge_[static_cast<std::size_t>(k)]; }
    /// Triangles incident to vertex v, ascending.
    std::span<const Index> vertex_elements(Index v) const;
    /// Element of the parent mesh this triangle was created from; identity on
    /// meshes that were not produced by refinement.
    Index parent(Index k) const { return parent_[static_cast<std::size_t>(k)]; }

    double area(Index k) const;
    /// diam(K), i.e. the longest edge length.
    double diameter(Index k) const;
    double edge_length(Index e) const;
    Point centroid(Index k) const;
    /// Unit normal of local edge `i` of triangle k, pointing out of k.
    Point outward_normal(Index k, int local_edge) const;
    double total_area() const;
    double min_angle() const;

    std::size_t num_boundary_vertices() const;

    friend Mesh build_topology(std::vector<Point> vertices,
                               std::vector<std::array<Index, 3>> triangles);

private:
    std::vector<Point> vertices_;
    std::vector<std::array<Index, 3>> triangles_;
    std::vector<Edge> edges_;
    std::vector<std::array<Index, 3>> element_edges_;
    std::vector<std::uint8_t> boundary_vertex_;
    std::vector<std::uint8_t> refinement_edge_;
    std::vector<Index> vertex_elements_offsets_;
    std::vector<Index> vertex_elements_;
    std::vector<Index> parent_;

    friend Mesh longest_edge_bisect(const Mesh& mesh, std::span<const Index> marked);
};

/// Builds edges, incidences, boundary flags and refinement edges.
/// Clockwise triangles are reoriented. Throws MeshError on out-of-range ids,
/// zero-area or duplicate triangles and non-manifold edges.
Mesh build_topology(std::vector<Point> vertices, std::vector<std::array<Index, 3>> triangles);

struct PointLocation {
    enum class Kind { AtVertex, OnEdge, InteriorOf };
    Kind kind{Kind::InteriorOf};
    /// Vertex, edge or element id depending on `kind`.
    Index id{-1};
    /// Every closed element containing the point, ascending.
    std::vector<Index> containing_elements;
};

/// Classifies `z` against the closed elements of the mesh. A barycentric
/// coordinate whose distance to the opposite edge is below `tol` counts as
/// zero; when `tol` is omitted it is 1e-12 times the local element diameter.
/// Throws MeshError if z lies outside the domain.
PointLocation locate_point(const Mesh& mesh, Point z, std::optional<double> tol = std::nullopt);

/// Barycentric coordinates of z in triangle k (may be negative outside k).
std::array<double, 3> barycentric(const Mesh& mesh, Index k, Point z);

/// Bisects every marked element through its refinement edge and closes the
/// marking recursively so the result stays conforming.
Mesh longest_edge_bisect(const Mesh& mesh, std::span<const Index> marked);

struct ElementPatches {
    std::vector<Index> side_neighbors;    // N_K: elements sharing a side with K, K included
    std::vector<Index> vertex_neighbors;  // N_K*: elements sharing a vertex with K
};

ElementPatches patches(const Mesh& mesh, Index k);
/// The one or two elements incident to edge e.
std::vector<Index> edge_patch(const Mesh& mesh, Index e);

// Initial meshes of the experiments.

/// (0,1)^2 split into n x n sub-squares, each cut by both diagonals.
Mesh criss_cross_square(int n = 2);
/// (-1,1)^2 \ [0,1) x (-1,0] as three unit squares, each split by the
/// diagonal through the reentrant corner (0,0).
Mesh l_shape();

// Plain-text mesh format: "nv nt", nv lines "x y", nt lines "i j k" (0-based).
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
void write_mesh_file(const std::string& path, const Mesh& mesh);
Mesh read_mesh_file(const std::string& path);

}  // namespace dfh
