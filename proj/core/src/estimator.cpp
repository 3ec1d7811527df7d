#include "dfh/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dfh/quadrature.hpp"

namespace dfh {

namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

void require_converged(const CoupledState& state) {
    if (!state.converged) throw std::invalid_argument("estimator: state is not a converged Picard solution");
}

int local_edge_of(const Mesh& mesh, Index k, Index e) {
    const auto& ee = mesh.element_edges(k);
    for (int i = 0; i < 3; ++i)
        if (ee[static_cast<std::size_t>(i)] == e) return i;
    throw std::logic_error("edge not on element");
}

}  // namespace

bool source_term_applies(const PointLocation& loc, Index k) {
    if (loc.kind == PointLocation::Kind::AtVertex) return false;
    return std::binary_search(loc.containing_elements.begin(), loc.containing_elements.end(), k);
}

double heat_jump(const Mesh& mesh, const CoupledState& state, double kappa, Index e, double t) {
    const Edge& ed = mesh.edge(e);
    const Index kp = ed.elements[0], km = ed.elements[1];
    const Point n = mesh.outward_normal(kp, local_edge_of(mesh, kp, e));
    const Vec2 gp = grad_p1(mesh, state.temperature.coefficients, kp);
    const Vec2 gm = grad_p1(mesh, state.temperature.coefficients, km);
    const Vec2 up = state.velocity.velocity(kp), um = state.velocity.velocity(km);
    return kappa * dot(gp - gm, n) - t * dot(up - um, n);
}

HeatTerms heat_indicator_terms(const Mesh& mesh, const CoupledState& state, const ProblemData& data) {
    const std::size_t nt = mesh.num_elements();
    const double p = data.p;
    HeatTerms terms;
    terms.source.assign(nt, 0.0);
    terms.residual.assign(nt, 0.0);
    terms.jump.assign(nt, 0.0);

    std::vector<int> sources(nt, 0);
    for (const Point& z : data.dirac_sources) {
        const PointLocation loc = locate_point(mesh, z);
        for (Index k : loc.containing_elements)
            if (source_term_applies(loc, k)) ++sources[at(k)];
    }

    // sum over interior sides of int_gamma |J|^p; J is affine along a side
    std::vector<double> edge_sum(nt, 0.0);
    const auto& temp = state.temperature.coefficients;
    for (std::size_t ee = 0; ee < mesh.num_edges(); ++ee) {
        const auto e = static_cast<Index>(ee);
        const Edge& ed = mesh.edge(e);
        if (ed.boundary()) continue;
        const double j0 = heat_jump(mesh, state, data.diffusivity, e, temp[at(ed.vertices[0])]);
        const double j1 = heat_jump(mesh, state, data.diffusivity, e, temp[at(ed.vertices[1])]);
        const double integral = mesh.edge_length(e) * integrate_abs_linear_power(j0, j1, p);
        edge_sum[at(ed.elements[0])] += integral;
        edge_sum[at(ed.elements[1])] += integral;
    }

    for (std::size_t kk = 0; kk < nt; ++kk) {
        const auto k = static_cast<Index>(kk);
        const double h = mesh.diameter(k);
        // d = 2: h_K^{d + p(1 - d)} = h_K^{2 - p}
        terms.source[kk] = sources[kk] * std::pow(h, 2.0 - p);
        const double r = std::abs(dot(grad_p1(mesh, temp, k), state.velocity.velocity(k)));
        terms.residual[kk] = std::pow(h, p) * std::pow(r, p) * mesh.area(k);
        terms.jump[kk] = h * edge_sum[kk];
    }
    return terms;
}

Vec2 darcy_residual(const Mesh& mesh, const CoupledState& state, const ProblemData& data, Index k, Point x,
                    const std::array<double, 3>& bary) {
    const Vec2 u = state.velocity.velocity(k);
    const double t = eval_p1(mesh, state.temperature.coefficients, k, bary);
    return data.force0(x) + data.force1(t) - forchheimer_operator(data.viscosity(x), u) -
           grad_p1(mesh, state.pressure.coefficients, k);
}

DarcyTerms darcy_indicator_terms(const Mesh& mesh, const CoupledState& state, const ProblemData& data) {
    const std::size_t nt = mesh.num_elements();
    DarcyTerms terms;
    terms.residual_sq.assign(nt, 0.0);
    terms.jump_cubed.assign(nt, 0.0);
    const TriangleRule& rule = triangle_rule(data.quad_degree);

    for (std::size_t kk = 0; kk < nt; ++kk) {
        const auto k = static_cast<Index>(kk);
        terms.residual_sq[kk] = integrate(mesh, k, rule, [&](Point x, const std::array<double, 3>& l) {
            const Vec2 r = darcy_residual(mesh, state, data, k, x, l);
            return dot(r, r);
        });
    }
    for (std::size_t ee = 0; ee < mesh.num_edges(); ++ee) {
        const auto e = static_cast<Index>(ee);
        const Edge& ed = mesh.edge(e);
        if (ed.boundary()) continue;
        const Index kp = ed.elements[0], km = ed.elements[1];
        const Point n = mesh.outward_normal(kp, local_edge_of(mesh, kp, e));
        const double jump = std::abs(dot(state.velocity.velocity(kp) - state.velocity.velocity(km), n));
        const double cubed = jump * jump * jump * mesh.edge_length(e);
        terms.jump_cubed[at(kp)] += cubed;
        terms.jump_cubed[at(km)] += cubed;
    }
    return terms;
}

std::vector<double> heat_indicators(const Mesh& mesh, const CoupledState& state, const ProblemData& data) {
    require_converged(state);
    const HeatTerms t = heat_indicator_terms(mesh, state, data);
    std::vector<double> out(mesh.num_elements());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = std::pow(t.source[k] + t.residual[k] + t.jump[k], 1.0 / data.p);
    return out;
}

std::vector<double> darcy_indicators(const Mesh& mesh, const CoupledState& state, const ProblemData& data) {
    require_converged(state);
    const DarcyTerms t = darcy_indicator_terms(mesh, state, data);
    std::vector<double> out(mesh.num_elements());
    for (std::size_t kk = 0; kk < out.size(); ++kk) {
        const double h = mesh.diameter(static_cast<Index>(kk));
        const double jump_l3 = std::cbrt(t.jump_cubed[kk]);
        out[kk] = std::sqrt(t.residual_sq[kk] + std::cbrt(h * h) * jump_l3 * jump_l3);
    }
    return out;
}

IndicatorField total_indicators(std::span<const double> heat_local, std::span<const double> darcy_local, double p) {
    if (heat_local.size() != darcy_local.size())
        throw std::invalid_argument("total_indicators: heat and darcy fields differ in length");
    if (!(p >= 1.0)) throw std::invalid_argument("total_indicators: p must be >= 1");
    IndicatorField f;
    f.p = p;
    f.heat_local.assign(heat_local.begin(), heat_local.end());
    f.darcy_local.assign(darcy_local.begin(), darcy_local.end());
    f.total_local.resize(heat_local.size());
    double heat_sum = 0.0, darcy_sum = 0.0;
    for (std::size_t k = 0; k < heat_local.size(); ++k) {
        f.total_local[k] = heat_local[k] + darcy_local[k];
        heat_sum += std::pow(heat_local[k], p);
        darcy_sum += darcy_local[k] * darcy_local[k];
    }
    f.heat_global = std::pow(heat_sum, 1.0 / p);
    f.darcy_global = std::sqrt(darcy_sum);
    f.total_global = f.heat_global + f.darcy_global;
    return f;
}

IndicatorField estimate(const Mesh& mesh, const CoupledState& state, const ProblemData& data) {
    return total_indicators(heat_indicators(mesh, state, data), darcy_indicators(mesh, state, data), data.p);
}

}  // namespace dfh
