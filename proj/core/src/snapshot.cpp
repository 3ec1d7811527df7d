#include "dfh/snapshot.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace dfh {

namespace {

void write_block(std::ostream& out, const char* name, const std::vector<double>& v) {
    out << name << ' ' << v.size() << '\n';
    for (double x : v) out << x << '\n';
}

std::vector<double> read_block(std::istream& in, const std::string& name, std::size_t expected) {
    std::string tag;
    std::size_t n = 0;
    if (!(in >> tag >> n) || tag != name) throw std::runtime_error("snapshot: expected block '" + name + "'");
    if (n != expected) throw std::runtime_error("snapshot: block '" + name + "' has the wrong length");
    std::vector<double> v(n);
    for (double& x : v)
        if (!(in >> x)) throw std::runtime_error("snapshot: truncated block '" + name + "'");
    return v;
}

}  // namespace

VtkFields Snapshot::vtk_fields() const {
    VtkFields f;
    f.temperature = temperature;
    f.pressure = pressure;
    f.velocity = velocity;
    f.indicator_heat = indicator_heat;
    f.indicator_darcy = indicator_darcy;
    f.indicator_total.resize(indicator_heat.size());
    for (std::size_t k = 0; k < indicator_heat.size(); ++k) f.indicator_total[k] = indicator_heat[k] + indicator_darcy[k];
    return f;
}

Snapshot make_snapshot(int iter, double p, const Mesh& mesh, const CoupledState& state,
                       const std::vector<double>& heat, const std::vector<double>& darcy) {
    Snapshot s;
    s.iter = iter;
    s.p = p;
    s.mesh = mesh;
    s.velocity = state.velocity.coefficients;
    s.pressure = state.pressure.coefficients;
    s.temperature = state.temperature.coefficients;
    s.indicator_heat = heat;
    s.indicator_darcy = darcy;
    return s;
}

void write_snapshot(std::ostream& out, const Snapshot& s) {
    out << "dfh-snapshot 1\n" << std::setprecision(17);
    out << "iter " << s.iter << "\np " << s.p << '\n';
    write_mesh(out, s.mesh);
    write_block(out, "velocity", s.velocity);
    write_block(out, "pressure", s.pressure);
    write_block(out, "temperature", s.temperature);
    write_block(out, "indicator_heat", s.indicator_heat);
    write_block(out, "indicator_darcy", s.indicator_darcy);
}

Snapshot read_snapshot(std::istream& in) {
    std::string magic, tag;
    int version = 0;
    if (!(in >> magic >> version) || magic != "dfh-snapshot" || version != 1)
        throw std::runtime_error("snapshot: bad magic line");
    Snapshot s;
    if (!(in >> tag >> s.iter) || tag != "iter") throw std::runtime_error("snapshot: expected 'iter'");
    if (!(in >> tag >> s.p) || tag != "p") throw std::runtime_error("snapshot: expected 'p'");
    s.mesh = read_mesh(in);
    const std::size_t nv = s.mesh.num_vertices(), nt = s.mesh.num_elements();
    s.velocity = read_block(in, "velocity", 2 * nt);
    s.pressure = read_block(in, "pressure", nv);
    s.temperature = read_block(in, "temperature", nv);
    s.indicator_heat = read_block(in, "indicator_heat", nt);
    s.indicator_darcy = read_block(in, "indicator_darcy", nt);
    return s;
}

void write_snapshot_file(const std::string& path, const Snapshot& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_snapshot(out, s);
}

Snapshot read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_snapshot(in);
}

}  // namespace dfh
