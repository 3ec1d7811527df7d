#include <cmath>

#include "dfh/config.hpp"

namespace dfh {

namespace {

std::function<Vec2(double)> linear_force(double cx, double cy) {
    return [cx, cy](double s) { return Vec2{cx * s, cy * s}; };
}

std::function<Vec2(Point)> constant_force(Vec2 f) {
    return [f](Point) { return f; };
}

}  // namespace

ProblemData example1_problem(double p) {
    ProblemData d;
    d.viscosity = [](Point x) { return std::sin(x.x * x.y) + 1.1; };
    d.viscosity_min = 1.1;
    d.viscosity_max = 1.1 + std::sin(1.0);
    d.diffusivity = 1.0;
    d.force0 = constant_force({1.0, 1.0});
    d.force1 = linear_force(1.0, 1.0);
    d.dirac_sources = {{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}};
    d.p = p;
    return d;
}

ProblemData example2_problem(double p) {
    ProblemData d;
    d.viscosity = [](Point) { return 1.0; };
    d.diffusivity = 1.0;
    d.force0 = constant_force({0.0, 0.0});
    d.force1 = linear_force(10.0, 10.0);
    d.dirac_sources = {{-0.25, 0.5}};
    d.p = p;
    return d;
}

ProblemData fivespot_problem(double p) {
    ProblemData d;
    d.viscosity = [](Point) { return 1.0; };
    d.diffusivity = 1.0;
    d.force0 = constant_force({0.0, 0.0});
    d.force1 = linear_force(1.0, 1.0);
    d.dirac_sources = {{0.5, 0.5}};
    d.flux_bc = {{{0.0, 0.0}, 1.0}, {{1.0, 1.0}, -1.0}};
    d.p = p;
    return d;
}

ProblemData make_problem(const ExperimentConfig& cfg) {
    ProblemData d;
    switch (cfg.preset) {
        case Preset::Example1: d = example1_problem(cfg.p); break;
        case Preset::Example2: d = example2_problem(cfg.p); break;
        case Preset::FiveSpot: d = fivespot_problem(cfg.p); break;
        case Preset::Custom: {
            if (!cfg.custom) throw ConfigError("custom preset without problem data");
            const CustomProblem& c = *cfg.custom;
            const double nu = c.nu;
            d.viscosity = [nu](Point) { return nu; };
            d.viscosity_min = d.viscosity_max = nu;
            d.diffusivity = c.kappa;
            d.force0 = constant_force(c.f0);
            d.force1 = linear_force(c.f1.x, c.f1.y);
            d.dirac_sources = c.diracs;
            d.flux_bc = c.flux;
            d.p = cfg.p;
            break;
        }
    }
    d.quad_degree = cfg.quad_degree;
    return d;
}

Mesh make_initial_mesh(const ExperimentConfig& cfg) {
    switch (cfg.preset) {
        case Preset::Example1:
        case Preset::FiveSpot: return criss_cross_square();
        case Preset::Example2: return l_shape();
        case Preset::Custom:
            if (!cfg.custom) throw ConfigError("custom preset without problem data");
            if (!cfg.custom->mesh_file.empty()) return read_mesh_file(cfg.custom->mesh_file);
            return cfg.custom->domain == "l_shape" ? l_shape() : criss_cross_square();
    }
    throw ConfigError("unknown preset");
}

}  // namespace dfh
