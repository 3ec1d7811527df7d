#include "dfh/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace dfh {

bool operator==(const CustomProblem& a, const CustomProblem& b) {
    auto flux_eq = [](const CornerFlux& x, const CornerFlux& y) { return x.corner == y.corner && x.value == y.value; };
    return a.domain == b.domain && a.mesh_file == b.mesh_file && a.kappa == b.kappa && a.nu == b.nu &&
           a.f0 == b.f0 && a.f1 == b.f1 && a.diracs == b.diracs &&
           std::equal(a.flux.begin(), a.flux.end(), b.flux.begin(), b.flux.end(), flux_eq);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.preset == b.preset && a.p == b.p && a.n_iterations == b.n_iterations &&
           a.picard_tol == b.picard_tol && a.picard_max_iter == b.picard_max_iter &&
           a.picard_relative == b.picard_relative && a.quad_degree == b.quad_degree &&
           a.output_dir == b.output_dir && a.export_vtk == b.export_vtk && a.export_csv == b.export_csv &&
           a.snapshot_every == b.snapshot_every && a.custom == b.custom;
}

const char* preset_name(Preset p) {
    switch (p) {
        case Preset::Example1: return "example1";
        case Preset::Example2: return "example2";
        case Preset::FiveSpot: return "fivespot";
        case Preset::Custom: return "custom";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, std::string v) {
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> parse_numbers(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(key, tok));
    return out;
}

Vec2 parse_vec2(const std::string& key, const std::string& v) {
    const auto n = parse_numbers(key, v);
    if (n.size() != 2) throw ConfigError("'" + key + "': expected two numbers");
    return {n[0], n[1]};
}

/// Splits "a b; c d; ..." into groups of `width` numbers.
std::vector<std::vector<double>> parse_groups(const std::string& key, const std::string& v, std::size_t width) {
    std::vector<std::vector<double>> out;
    std::istringstream ss(v);
    std::string group;
    while (std::getline(ss, group, ';')) {
        if (trim(group).empty()) continue;
        auto n = parse_numbers(key, group);
        if (n.size() != width)
            throw ConfigError("'" + key + "': each ';'-separated entry needs " + std::to_string(width) + " numbers");
        out.push_back(std::move(n));
    }
    return out;
}

const std::set<std::string> kGeneralKeys{"preset",      "p",          "n_iterations", "picard_tol",
                                         "picard_max_iter", "picard_relative", "quad_degree", "output_dir",
                                         "export_vtk",  "export_csv", "snapshot_every"};
const std::set<std::string> kCustomKeys{"domain", "mesh", "kappa", "nu", "f0", "f1", "diracs", "flux"};
const std::vector<std::string> kRequired{"preset", "p", "n_iterations"};
const std::vector<std::string> kCustomRequired{"kappa", "nu", "f0", "f1", "diracs"};

void check_sources_inside(const Mesh& mesh, const std::vector<Point>& diracs) {
    for (const Point& z : diracs) {
        PointLocation loc;
        try {
            loc = locate_point(mesh, z);
        } catch (const MeshError&) {
            throw ConfigError("dirac source (" + std::to_string(z.x) + ", " + std::to_string(z.y) +
                              ") lies outside the domain");
        }
        const bool on_boundary = (loc.kind == PointLocation::Kind::AtVertex && mesh.is_boundary_vertex(loc.id)) ||
                                 (loc.kind == PointLocation::Kind::OnEdge && mesh.is_boundary_edge(loc.id));
        if (on_boundary)
            throw ConfigError("dirac source (" + std::to_string(z.x) + ", " + std::to_string(z.y) +
                              ") lies on the boundary");
    }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, std::vector<std::string>* notices) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!kGeneralKeys.count(key) && !kCustomKeys.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!kv.emplace(key, value).second)
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }

    std::vector<std::string> missing;
    for (const auto& k : kRequired)
        if (!kv.count(k)) missing.push_back(k);
    if (!missing.empty()) {
        std::string msg = "missing required keys:";
        for (const auto& k : missing) msg += " " + k;
        throw ConfigError(msg);
    }

    ExperimentConfig cfg;
    const std::string& preset = kv.at("preset");
    if (preset == "example1") cfg.preset = Preset::Example1;
    else if (preset == "example2") cfg.preset = Preset::Example2;
    else if (preset == "fivespot") cfg.preset = Preset::FiveSpot;
    else if (preset == "custom") cfg.preset = Preset::Custom;
    else throw ConfigError("'preset': expected example1, example2, fivespot or custom, got '" + preset + "'");

    cfg.p = parse_double("p", kv.at("p"));
    if (!(cfg.p >= 1.0 && cfg.p < 2.0)) throw ConfigError("'p' must satisfy 1 <= p < 2");
    if (cfg.p == 1.0 && notices) notices->push_back("p = 1 lies outside the analysed range 1 < p < 2; continuing");
    cfg.n_iterations = parse_int("n_iterations", kv.at("n_iterations"));
    if (cfg.n_iterations < 0) throw ConfigError("'n_iterations' must be >= 0");

    if (auto it = kv.find("picard_tol"); it != kv.end()) {
        cfg.picard_tol = parse_double(it->first, it->second);
        if (!(cfg.picard_tol > 0.0)) throw ConfigError("'picard_tol' must be positive");
    }
    if (auto it = kv.find("picard_max_iter"); it != kv.end()) {
        cfg.picard_max_iter = parse_int(it->first, it->second);
        if (cfg.picard_max_iter < 1) throw ConfigError("'picard_max_iter' must be >= 1");
    }
    if (auto it = kv.find("picard_relative"); it != kv.end()) cfg.picard_relative = parse_bool(it->first, it->second);
    if (auto it = kv.find("quad_degree"); it != kv.end()) {
        cfg.quad_degree = parse_int(it->first, it->second);
        if (cfg.quad_degree < 1 || cfg.quad_degree > kMaxQuadratureDegree)
            throw ConfigError("'quad_degree' must lie in 1.." + std::to_string(kMaxQuadratureDegree));
    }
    if (auto it = kv.find("output_dir"); it != kv.end()) {
        if (it->second.empty()) throw ConfigError("'output_dir' must not be empty");
        cfg.output_dir = it->second;
    }
    if (auto it = kv.find("export_vtk"); it != kv.end()) cfg.export_vtk = parse_bool(it->first, it->second);
    if (auto it = kv.find("export_csv"); it != kv.end()) cfg.export_csv = parse_bool(it->first, it->second);
    if (auto it = kv.find("snapshot_every"); it != kv.end()) {
        cfg.snapshot_every = parse_int(it->first, it->second);
        if (cfg.snapshot_every < 0) throw ConfigError("'snapshot_every' must be >= 0");
    }

    if (cfg.preset != Preset::Custom) {
        for (const auto& [k, v] : kv)
            if (kCustomKeys.count(k)) throw ConfigError("'" + k + "' is only valid with preset = custom");
        return cfg;
    }

    missing.clear();
    for (const auto& k : kCustomRequired)
        if (!kv.count(k)) missing.push_back(k);
    if (!kv.count("domain") && !kv.count("mesh")) missing.push_back("domain|mesh");
    if (!missing.empty()) {
        std::string msg = "custom preset: missing keys:";
        for (const auto& k : missing) msg += " " + k;
        throw ConfigError(msg);
    }
    CustomProblem c;
    if (auto it = kv.find("domain"); it != kv.end()) {
        c.domain = it->second;
        if (c.domain != "unit_square" && c.domain != "l_shape")
            throw ConfigError("'domain': expected unit_square or l_shape");
    }
    if (auto it = kv.find("mesh"); it != kv.end()) c.mesh_file = it->second;
    c.kappa = parse_double("kappa", kv.at("kappa"));
    if (!(c.kappa > 0.0)) throw ConfigError("'kappa' must be positive");
    c.nu = parse_double("nu", kv.at("nu"));
    if (!(c.nu > 0.0)) throw ConfigError("'nu' must be positive");
    c.f0 = parse_vec2("f0", kv.at("f0"));
    c.f1 = parse_vec2("f1", kv.at("f1"));
    for (const auto& g : parse_groups("diracs", kv.at("diracs"), 2)) c.diracs.push_back({g[0], g[1]});
    if (auto it = kv.find("flux"); it != kv.end())
        for (const auto& g : parse_groups("flux", it->second, 3)) c.flux.push_back({{g[0], g[1]}, g[2]});
    cfg.custom = c;

    Mesh mesh;
    try {
        mesh = make_initial_mesh(cfg);
    } catch (const MeshError& e) {
        throw ConfigError(std::string("custom preset: ") + e.what());
    }
    check_sources_inside(mesh, c.diracs);
    return cfg;
}

ExperimentConfig load_config(const std::string& path, std::vector<std::string>* notices) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(in, notices);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "preset = " << preset_name(cfg.preset) << '\n'
        << "p = " << cfg.p << '\n'
        << "n_iterations = " << cfg.n_iterations << '\n'
        << "picard_tol = " << cfg.picard_tol << '\n'
        << "picard_max_iter = " << cfg.picard_max_iter << '\n'
        << "picard_relative = " << (cfg.picard_relative ? "true" : "false") << '\n'
        << "quad_degree = " << cfg.quad_degree << '\n'
        << "output_dir = " << cfg.output_dir << '\n'
        << "export_vtk = " << (cfg.export_vtk ? "true" : "false") << '\n'
        << "export_csv = " << (cfg.export_csv ? "true" : "false") << '\n'
        << "snapshot_every = " << cfg.snapshot_every << '\n';
    if (cfg.preset == Preset::Custom && cfg.custom) {
        const CustomProblem& c = *cfg.custom;
        if (!c.domain.empty()) out << "domain = " << c.domain << '\n';
        if (!c.mesh_file.empty()) out << "mesh = " << c.mesh_file << '\n';
        out << "kappa = " << c.kappa << '\n'
            << "nu = " << c.nu << '\n'
            << "f0 = " << c.f0.x << ' ' << c.f0.y << '\n'
            << "f1 = " << c.f1.x << ' ' << c.f1.y << '\n'
            << "diracs =";
        for (std::size_t i = 0; i < c.diracs.size(); ++i)
            out << (i ? "; " : " ") << c.diracs[i].x << ' ' << c.diracs[i].y;
        out << '\n';
        if (!c.flux.empty()) {
            out << "flux =";
            for (std::size_t i = 0; i < c.flux.size(); ++i)
                out << (i ? "; " : " ") << c.flux[i].corner.x << ' ' << c.flux[i].corner.y << ' ' << c.flux[i].value;
            out << '\n';
        }
    }
    return out.str();
}

}  // namespace dfh
