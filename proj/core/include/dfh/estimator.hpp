#pragma once

#include <span>
#include <vector>

#include "dfh/coupled_solver.hpp"
#include "dfh/fem.hpp"
#include "dfh/mesh.hpp"

namespace dfh {

/// Per-element error indicators and their global aggregates.
struct IndicatorField {
    std::vector<double> heat_local;   // E_{p,K}
    std::vector<double> darcy_local;  // Darcy-Forchheimer indicator of K
    std::vector<double> total_local;  // heat + darcy
    double heat_global{0.0};          // (sum heat^p)^(1/p)
    double darcy_global{0.0};         // (sum darcy^2)^(1/2)
    double total_global{0.0};
    double p{1.0};
};

/// The three contributions to E_{p,K}^p, kept separate for inspection.
struct HeatTerms {
    std::vector<double> source;    // number of non-vertex sources in K times h_K^{2-p}
    std::vector<double> residual;  // h_K^p ||R_K||_{L^p(K)}^p
    std::vector<double> jump;      // h_K ||J||_{L^p(dK \ boundary)}^p
};

struct DarcyTerms {
    std::vector<double> residual_sq;  // ||R_K||_{L^2(K)}^2
    std::vector<double> jump_cubed;   // ||[u.n]||_{L^3(dK \ boundary)}^3
};

/// True when a source at `loc` adds the h_K^{2-p} term to element k: k is a
/// closed element containing the point and the point is not one of its vertices.
bool source_term_applies(const PointLocation& loc, Index k);

/// Pointwise heat jump [(kappa grad T - T u) . n] across interior edge e at
/// the point with temperature `t`; n is the outward normal of edge.elements[0].
double heat_jump(const Mesh& mesh, const CoupledState& state, double kappa, Index e, double t);

HeatTerms heat_indicator_terms(const Mesh& mesh, const CoupledState& state, const ProblemData& data);
DarcyTerms darcy_indicator_terms(const Mesh& mesh, const CoupledState& state, const ProblemData& data);

/// E_{p,K}; throws std::invalid_argument for an unconverged state.
std::vector<double> heat_indicators(const Mesh& mesh, const CoupledState& state, const ProblemData& data);
std::vector<double> darcy_indicators(const Mesh& mesh, const CoupledState& state, const ProblemData& data);

/// Combines the two local fields: total_K = heat_K + darcy_K and the global
/// l^p / l^2 aggregates. Throws std::invalid_argument on a length mismatch.
IndicatorField total_indicators(std::span<const double> heat_local, std::span<const double> darcy_local, double p);

IndicatorField estimate(const Mesh& mesh, const CoupledState& state, const ProblemData& data);

/// Element residual f0 + f1(T_h) - nu u_h - |u_h| u_h - grad p_h at x in K.
Vec2 darcy_residual(const Mesh& mesh, const CoupledState& state, const ProblemData& data, Index k, Point x,
                    const std::array<double, 3>& bary);

}  // namespace dfh
