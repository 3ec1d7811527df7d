#include "dfh/vtk.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace dfh {

namespace {

void check_size(const std::vector<double>& v, std::size_t n, const char* name) {
    if (!v.empty() && v.size() != n)
        throw std::invalid_argument(std::string("vtk: field '") + name + "' has the wrong length");
}

void scalars(std::ostream& out, const char* name, const std::vector<double>& v) {
    if (v.empty()) return;
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) out << x << '\n';
}

}  // namespace

void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& f) {
    const std::size_t nv = mesh.num_vertices(), nt = mesh.num_elements();
    check_size(f.temperature, nv, "temperature");
    check_size(f.pressure, nv, "pressure");
    check_size(f.velocity, 2 * nt, "velocity");
    check_size(f.indicator_total, nt, "indicator_total");
    check_size(f.indicator_heat, nt, "indicator_heat");
    check_size(f.indicator_darcy, nt, "indicator_darcy");

    out << std::setprecision(17);
    out << "# vtk DataFile Version 3.0\ndfh solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nv << " double\n";
    for (const Point& v : mesh.vertices()) out << v.x << ' ' << v.y << " 0\n";
    out << "CELLS " << nt << ' ' << 4 * nt << '\n';
    for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << nt << '\n';
    for (std::size_t k = 0; k < nt; ++k) out << "5\n";

    if (!f.temperature.empty() || !f.pressure.empty()) {
        out << "POINT_DATA " << nv << '\n';
        scalars(out, "temperature", f.temperature);
        scalars(out, "pressure", f.pressure);
    }
    const bool cell_data = !f.velocity.empty() || !f.indicator_total.empty() || !f.indicator_heat.empty() ||
                           !f.indicator_darcy.empty();
    if (cell_data) {
        out << "CELL_DATA " << nt << '\n';
        if (!f.velocity.empty()) {
            out << "VECTORS velocity double\n";
            for (std::size_t k = 0; k < nt; ++k) out << f.velocity[2 * k] << ' ' << f.velocity[2 * k + 1] << " 0\n";
        }
        scalars(out, "indicator_total", f.indicator_total);
        scalars(out, "indicator_heat", f.indicator_heat);
        scalars(out, "indicator_darcy", f.indicator_darcy);
    }
}

void write_vtk_file(const std::string& path, const Mesh& mesh, const VtkFields& fields) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_vtk(out, mesh, fields);
    if (!out) throw std::runtime_error("error writing '" + path + "'");
}

VtkData read_vtk(std::istream& in) {
    auto fail = [](const std::string& m) { return std::runtime_error("vtk: " + m); };
    std::string line;
    for (int i = 0; i < 4; ++i)
        if (!std::getline(in, line)) throw fail("truncated header");
    if (line != "DATASET UNSTRUCTURED_GRID") throw fail("not an unstructured grid");

    VtkData d;
    std::string word, type;
    std::size_t n = 0;
    std::vector<double>* target = nullptr;
    std::size_t np = 0, nc = 0;
    while (in >> word) {
        if (word == "POINTS") {
            in >> np >> type;
            d.points.resize(np);
            double z;
            for (auto& p : d.points) in >> p.x >> p.y >> z;
        } else if (word == "CELLS") {
            std::size_t total;
            in >> nc >> total;
            d.cells.resize(nc);
            for (auto& c : d.cells) {
                int three;
                in >> three >> c[0] >> c[1] >> c[2];
                if (three != 3) throw fail("non-triangular cell");
            }
        } else if (word == "CELL_TYPES") {
            in >> n;
            int t;
            for (std::size_t i = 0; i < n; ++i) in >> t;
        } else if (word == "POINT_DATA" || word == "CELL_DATA") {
            in >> n;
        } else if (word == "SCALARS") {
            std::string name;
            int comps;
            in >> name >> type >> comps >> word >> word;  // LOOKUP_TABLE default
            if (name == "temperature") target = &d.fields.temperature;
            else if (name == "pressure") target = &d.fields.pressure;
            else if (name == "indicator_total") target = &d.fields.indicator_total;
            else if (name == "indicator_heat") target = &d.fields.indicator_heat;
            else if (name == "indicator_darcy") target = &d.fields.indicator_darcy;
            else throw fail("unknown field '" + name + "'");
            const std::size_t len = (target == &d.fields.temperature || target == &d.fields.pressure) ? np : nc;
            target->resize(len);
            for (double& x : *target) in >> x;
        } else if (word == "VECTORS") {
            std::string name;
            in >> name >> type;
            d.fields.velocity.resize(2 * nc);
            double z;
            for (std::size_t k = 0; k < nc; ++k) in >> d.fields.velocity[2 * k] >> d.fields.velocity[2 * k + 1] >> z;
        } else {
            throw fail("unexpected token '" + word + "'");
        }
        if (in.fail()) throw fail("malformed section '" + word + "'");
    }
    return d;
}

VtkData read_vtk_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_vtk(in);
}

}  // namespace dfh
