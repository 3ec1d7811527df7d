#include "dfh/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

namespace dfh {

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
    out << std::setprecision(17);
    for (const Point& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
    for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh read_mesh(std::istream& in) {
    long long nv = -1, nt = -1;
    if (!(in >> nv >> nt) || nv < 0 || nt < 0) throw MeshError("mesh: bad header, expected 'nv nt'");
    std::vector<Point> v(static_cast<std::size_t>(nv));
    for (auto& p : v) {
        if (!(in >> p.x >> p.y)) throw MeshError("mesh: truncated vertex list");
    }
    std::vector<std::array<Index, 3>> t(static_cast<std::size_t>(nt));
    for (auto& tri : t) {
        if (!(in >> tri[0] >> tri[1] >> tri[2])) throw MeshError("mesh: truncated triangle list");
    }
    return build_topology(std::move(v), std::move(t));
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot open '" + path + "' for writing");
    write_mesh(out, mesh);
    if (!out) throw MeshError("failed writing '" + path + "'");
}

Mesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open '" + path + "'");
    return read_mesh(in);
}

}  // namespace dfh
