#include "dfh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <unordered_map>

namespace dfh {

namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

std::int64_t edge_key(Index a, Index b, std::size_t nv) {
    if (a > b) std::swap(a, b);
    return static_cast<std::int64_t>(a) * static_cast<std::int64_t>(nv) + b;
}

double signed_area(const Point& a, const Point& b, const Point& c) {
    return 0.5 * cross(b - a, c - a);
}

double squared_length(const Point& a, const Point& b) {
    const Point d = b - a;
    return dot(d, d);
}

}  // namespace

double norm(Point a) { return std::hypot(a.x, a.y); }

Mesh build_topology(std::vector<Point> vertices, std::vector<std::array<Index, 3>> triangles) {
    const std::size_t nv = vertices.size();
    Mesh m;

    std::set<std::array<Index, 3>> seen;
    for (std::size_t k = 0; k < triangles.size(); ++k) {
        auto& t = triangles[k];
        for (Index v : t) {
            if (v < 0 || at(v) >= nv)
                throw MeshError("triangle " + std::to_string(k) + " references vertex " +
                                std::to_string(v) + " out of range");
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw MeshError("triangle " + std::to_string(k) + " has repeated vertices");
        const Point &a = vertices[at(t[0])], &b = vertices[at(t[1])], &c = vertices[at(t[2])];
        const double area = signed_area(a, b, c);
        const double scale = std::max({squared_length(a, b), squared_length(b, c),
                                       squared_length(c, a)});
        if (!(std::abs(area) > 1e-14 * scale))
            throw MeshError("triangle " + std::to_string(k) + " is inverted or has zero area");
        if (area < 0) std::swap(t[1], t[2]);

        auto sorted = t;
        std::sort(sorted.begin(), sorted.end());
        if (!seen.insert(sorted).second)
            throw MeshError("duplicate triangle " + std::to_string(k));
    }

    const std::size_t nt = triangles.size();
    m.element_edges_.resize(nt);
    std::unordered_map<std::int64_t, Index> edge_ids;
    edge_ids.reserve(3 * nt);
    for (std::size_t k = 0; k < nt; ++k) {
        const auto& t = triangles[k];
        for (int i = 0; i < 3; ++i) {
            const Index a = t[(i + 1) % 3];
            const Index b = t[(i + 2) % 3];
            const auto key = edge_key(a, b, nv);
            auto [it, inserted] = edge_ids.try_emplace(key, static_cast<Index>(m.edges_.size()));
            if (inserted) {
                Edge e;
                e.vertices = {std::min(a, b), std::max(a, b)};
                e.elements = {static_cast<Index>(k), kNoElement};
                m.edges_.push_back(e);
            } else {
                Edge& e = m.edges_[at(it->second)];
                if (e.elements[1] != kNoElement)
                    throw MeshError("non-manifold edge (" + std::to_string(e.vertices[0]) + ", " +
                                    std::to_string(e.vertices[1]) + ")");
                e.elements[1] = static_cast<Index>(k);
            }
            m.element_edges_[k][static_cast<std::size_t>(i)] = it->second;
        }
    }

    m.boundary_vertex_.assign(nv, 0);
    for (const Edge& e : m.edges_) {
        if (e.boundary()) {
            m.boundary_vertex_[at(e.vertices[0])] = 1;
            m.boundary_vertex_[at(e.vertices[1])] = 1;
        }
    }

    m.refinement_edge_.resize(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        int best = 0;
        double best_len = -1.0;
        Index best_id = std::numeric_limits<Index>::max();
        for (int i = 0; i < 3; ++i) {
            const Index eid = m.element_edges_[k][static_cast<std::size_t>(i)];
            const Edge& e = m.edges_[at(eid)];
            const double len = squared_length(vertices[at(e.vertices[0])], vertices[at(e.vertices[1])]);
            const double tie = 1e-12 * std::max(len, best_len);
            if (len > best_len + tie || (std::abs(len - best_len) <= tie && eid < best_id)) {
                best = i;
                best_len = len;
                best_id = eid;
            }
        }
        m.refinement_edge_[k] = static_cast<std::uint8_t>(best);
    }

    m.vertex_elements_offsets_.assign(nv + 1, 0);
    for (const auto& t : triangles)
        for (Index v : t) ++m.vertex_elements_offsets_[at(v) + 1];
    for (std::size_t v = 0; v < nv; ++v)
        m.vertex_elements_offsets_[v + 1] += m.vertex_elements_offsets_[v];
    m.vertex_elements_.resize(3 * nt);
    std::vector<Index> fill(m.vertex_elements_offsets_.begin(), m.vertex_elements_offsets_.end() - 1);
    for (std::size_t k = 0; k < nt; ++k)
        for (Index v : triangles[k]) m.vertex_elements_[at(fill[at(v)]++)] = static_cast<Index>(k);

    m.parent_.resize(nt);
    for (std::size_t k = 0; k < nt; ++k) m.parent_[k] = static_cast<Index>(k);

    m.vertices_ = std::move(vertices);
    m.triangles_ = std::move(triangles);
    return m;
}

std::span<const Index> Mesh::vertex_elements(Index v) const {
    const auto begin = vertex_elements_offsets_[at(v)];
    const auto end = vertex_elements_offsets_[at(v) + 1];
    return std::span<const Index>(vertex_elements_).subspan(at(begin), at(end - begin));
}

double Mesh::area(Index k) const {
    const auto& t = triangle(k);
    return signed_area(vertex(t[0]), vertex(t[1]), vertex(t[2]));
}

double Mesh::diameter(Index k) const {
    const auto& e = element_edges(k);
    return std::max({edge_length(e[0]), edge_length(e[1]), edge_length(e[2])});
}

double Mesh::edge_length(Index e) const {
    const Edge& ed = edge(e);
    return norm(vertex(ed.vertices[1]) - vertex(ed.vertices[0]));
}

Point Mesh::centroid(Index k) const {
    const auto& t = triangle(k);
    const Point s = vertex(t[0]) + vertex(t[1]) + vertex(t[2]);
    return (1.0 / 3.0) * s;
}

Point Mesh::outward_normal(Index k, int local_edge) const {
    const auto& t = triangle(k);
    const Point a = vertex(t[static_cast<std::size_t>((local_edge + 1) % 3)]);
    const Point b = vertex(t[static_cast<std::size_t>((local_edge + 2) % 3)]);
    // counterclockwise orientation: the outward normal is the tangent rotated clockwise
    const Point d = b - a;
    const double len = norm(d);
    return {d.y / len, -d.x / len};
}

double Mesh::total_area() const {
    double s = 0.0;
    for (std::size_t k = 0; k < num_elements(); ++k) s += area(static_cast<Index>(k));
    return s;
}

double Mesh::min_angle() const {
    double best = std::numbers::pi;
    for (const auto& t : triangles_) {
        for (int i = 0; i < 3; ++i) {
            const Point a = vertex(t[static_cast<std::size_t>(i)]);
            const Point u = vertex(t[static_cast<std::size_t>((i + 1) % 3)]) - a;
            const Point w = vertex(t[static_cast<std::size_t>((i + 2) % 3)]) - a;
            best = std::min(best, std::atan2(std::abs(cross(u, w)), dot(u, w)));
        }
    }
    return best;
}

std::size_t Mesh::num_boundary_vertices() const {
    return static_cast<std::size_t>(std::count(boundary_vertex_.begin(), boundary_vertex_.end(), 1));
}

std::array<double, 3> barycentric(const Mesh& mesh, Index k, Point z) {
    const auto& t = mesh.triangle(k);
    const Point a = mesh.vertex(t[0]), b = mesh.vertex(t[1]), c = mesh.vertex(t[2]);
    const double twice_area = cross(b - a, c - a);
    const double l1 = cross(z - a, c - a) / twice_area;
    const double l2 = cross(b - a, z - a) / twice_area;
    return {1.0 - l1 - l2, l1, l2};
}

PointLocation locate_point(const Mesh& mesh, Point z, std::optional<double> tol) {
    PointLocation loc;
    bool classified = false;

    for (std::size_t kk = 0; kk < mesh.num_elements(); ++kk) {
        const auto k = static_cast<Index>(kk);
        const double eps = tol ? *tol : 1e-12 * mesh.diameter(k);
        const auto lambda = barycentric(mesh, k, z);
        const double twice_area = 2.0 * mesh.area(k);
        std::array<double, 3> dist{};
        bool inside = true;
        for (int i = 0; i < 3; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            dist[ii] = lambda[ii] * twice_area / mesh.edge_length(mesh.element_edges(k)[ii]);
            if (dist[ii] < -eps) inside = false;
        }
        if (!inside) continue;
        loc.containing_elements.push_back(k);
        if (classified) continue;
        classified = true;

        int zeros = 0;
        int zero_at = -1;
        int one_at = 0;
        for (int i = 0; i < 3; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            if (std::abs(dist[ii]) <= eps) {
                ++zeros;
                zero_at = i;
            } else {
                one_at = i;
            }
        }
        if (zeros >= 2) {
            loc.kind = PointLocation::Kind::AtVertex;
            loc.id = mesh.triangle(k)[static_cast<std::size_t>(one_at)];
        } else if (zeros == 1) {
            loc.kind = PointLocation::Kind::OnEdge;
            loc.id = mesh.element_edges(k)[static_cast<std::size_t>(zero_at)];
        } else {
            loc.kind = PointLocation::Kind::InteriorOf;
            loc.id = k;
        }
    }

    if (!classified)
        throw MeshError("point (" + std::to_string(z.x) + ", " + std::to_string(z.y) +
                        ") lies outside the mesh");

    // Snap the containing set to the exact topological answer.
    switch (loc.kind) {
        case PointLocation::Kind::AtVertex: {
            auto elems = mesh.vertex_elements(loc.id);
            loc.containing_elements.assign(elems.begin(), elems.end());
            break;
        }
        case PointLocation::Kind::OnEdge: {
            loc.containing_elements = edge_patch(mesh, loc.id);
            break;
        }
        case PointLocation::Kind::InteriorOf:
            loc.containing_elements = {loc.id};
            break;
    }
    return loc;
}

Mesh longest_edge_bisect(const Mesh& mesh, std::span<const Index> marked) {
    const std::size_t ne = mesh.num_edges();
    std::vector<std::uint8_t> edge_marked(ne, 0);
    std::vector<Index> work;

    auto mark_edge = [&](Index e) {
        if (!edge_marked[at(e)]) {
            edge_marked[at(e)] = 1;
            work.push_back(e);
        }
    };
    for (Index k : marked) {
        if (k < 0 || at(k) >= mesh.num_elements())
            throw MeshError("marked element " + std::to_string(k) + " out of range");
        mark_edge(mesh.element_edges(k)[static_cast<std::size_t>(mesh.refinement_edge(k))]);
    }

    // Closure: any element with a marked edge must also split its refinement edge.
    std::size_t steps = 0;
    const std::size_t cap = 2 * ne + 16;
    while (!work.empty()) {
        if (++steps > cap) throw MeshError("bisection closure exceeded its depth cap");
        const Index e = work.back();
        work.pop_back();
        for (Index k : mesh.edge(e).elements) {
            if (k == kNoElement) continue;
            mark_edge(mesh.element_edges(k)[static_cast<std::size_t>(mesh.refinement_edge(k))]);
        }
    }

    std::vector<Point> vertices(mesh.vertices().begin(), mesh.vertices().end());
    std::unordered_map<std::int64_t, Index> midpoint;
    const std::size_t nv = mesh.num_vertices();
    for (std::size_t e = 0; e < ne; ++e) {
        if (!edge_marked[e]) continue;
        const auto& ev = mesh.edges()[e].vertices;
        midpoint.emplace(edge_key(ev[0], ev[1], nv), static_cast<Index>(vertices.size()));
        vertices.push_back(0.5 * (mesh.vertex(ev[0]) + mesh.vertex(ev[1])));
    }

    std::vector<std::array<Index, 3>> triangles;
    std::vector<Index> parents;
    triangles.reserve(mesh.num_elements() + 3 * midpoint.size());
    parents.reserve(triangles.capacity());

    auto old_midpoint = [&](Index a, Index b) -> Index {
        if (a >= static_cast<Index>(nv) || b >= static_cast<Index>(nv)) return -1;
        auto it = midpoint.find(edge_key(a, b, nv));
        return it == midpoint.end() ? -1 : it->second;
    };

    // Splits triangle t through its local edge `local` (opposite t[local]).
    auto split = [](const std::array<Index, 3>& t, int local, Index m) {
        const Index a = t[static_cast<std::size_t>(local)];
        const Index b = t[static_cast<std::size_t>((local + 1) % 3)];
        const Index c = t[static_cast<std::size_t>((local + 2) % 3)];
        return std::array<std::array<Index, 3>, 2>{{{a, b, m}, {a, m, c}}};
    };

    for (std::size_t kk = 0; kk < mesh.num_elements(); ++kk) {
        const auto k = static_cast<Index>(kk);
        const auto& t = mesh.triangle(k);
        const int r = mesh.refinement_edge(k);
        const Index mr = old_midpoint(t[static_cast<std::size_t>((r + 1) % 3)],
                                      t[static_cast<std::size_t>((r + 2) % 3)]);
        if (mr < 0) {
            triangles.push_back(t);
            parents.push_back(k);
            continue;
        }
        for (const auto& child : split(t, r, mr)) {
            // Each child keeps exactly one full edge of the parent: the one
            // opposite the new midpoint (local index 2 for the first child,
            // 1 for the second).
            int full = -1;
            Index mc = -1;
            for (int i = 0; i < 3 && full < 0; ++i) {
                if (child[static_cast<std::size_t>(i)] != mr) continue;
                const Index m2 = old_midpoint(child[static_cast<std::size_t>((i + 1) % 3)],
                                              child[static_cast<std::size_t>((i + 2) % 3)]);
                if (m2 >= 0) {
                    full = i;
                    mc = m2;
                }
            }
            if (full < 0) {
                triangles.push_back(child);
                parents.push_back(k);
            } else {
                for (const auto& grandchild : split(child, full, mc)) {
                    triangles.push_back(grandchild);
                    parents.push_back(k);
                }
            }
        }
    }

    Mesh refined = build_topology(std::move(vertices), std::move(triangles));
    refined.parent_ = std::move(parents);
    return refined;
}

ElementPatches patches(const Mesh& mesh, Index k) {
    ElementPatches p;
    p.side_neighbors.push_back(k);
    for (Index e : mesh.element_edges(k)) {
        for (Index n : mesh.edge(e).elements)
            if (n != kNoElement && n != k) p.side_neighbors.push_back(n);
    }
    std::sort(p.side_neighbors.begin(), p.side_neighbors.end());

    for (Index v : mesh.triangle(k)) {
        auto elems = mesh.vertex_elements(v);
        p.vertex_neighbors.insert(p.vertex_neighbors.end(), elems.begin(), elems.end());
    }
    std::sort(p.vertex_neighbors.begin(), p.vertex_neighbors.end());
    p.vertex_neighbors.erase(std::unique(p.vertex_neighbors.begin(), p.vertex_neighbors.end()),
                             p.vertex_neighbors.end());
    return p;
}

std::vector<Index> edge_patch(const Mesh& mesh, Index e) {
    const Edge& ed = mesh.edge(e);
    std::vector<Index> out{ed.elements[0]};
    if (ed.elements[1] != kNoElement) out.push_back(ed.elements[1]);
    std::sort(out.begin(), out.end());
    return out;
}

Mesh criss_cross_square(int n) {
    if (n < 1) throw MeshError("criss_cross_square needs n >= 1");
    std::vector<Point> v;
    const double h = 1.0 / n;
    auto grid = [n](int i, int j) { return static_cast<Index>(j * (n + 1) + i); };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) v.push_back({i * h, j * h});
    std::vector<std::array<Index, 3>> t;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const auto c = static_cast<Index>(v.size());
            v.push_back({(i + 0.5) * h, (j + 0.5) * h});
            const Index a = grid(i, j), b = grid(i + 1, j), d = grid(i + 1, j + 1), e = grid(i, j + 1);
            t.push_back({a, b, c});
            t.push_back({b, d, c});
            t.push_back({d, e, c});
            t.push_back({e, a, c});
        }
    }
    return build_topology(std::move(v), std::move(t));
}

Mesh l_shape() {
    std::vector<Point> v{{-1, -1}, {0, -1}, {-1, 0}, {0, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};
    std::vector<std::array<Index, 3>> t{
        {0, 1, 3}, {0, 3, 2},  // [-1,0] x [-1,0]
        {2, 3, 5}, {3, 6, 5},  // [-1,0] x [0,1]
        {3, 4, 7}, {3, 7, 6},  // [0,1] x [0,1]
    };
    return build_topology(std::move(v), std::move(t));
}

}  // namespace dfh
