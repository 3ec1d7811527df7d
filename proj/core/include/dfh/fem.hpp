#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dfh/mesh.hpp"
#include "dfh/quadrature.hpp"
#include "dfh/sparse.hpp"

namespace dfh {

using Vec2 = Point;

enum class SpaceTag { TemperatureP1, PressureP1, VelocityP0Vec };

/// Coefficients of a discrete field: nodal values for the P1 spaces,
/// interleaved (u_x, u_y) per element for the P0 velocity.
struct FeFunction {
    SpaceTag space{SpaceTag::TemperatureP1};
    std::vector<double> coefficients;

    static FeFunction zero(const Mesh& mesh, SpaceTag space);

    Vec2 velocity(Index k) const {
        const auto i = 2 * static_cast<std::size_t>(k);
        return {coefficients[i], coefficients[i + 1]};
    }
};

/// Normal flux u.n = value prescribed on every boundary edge whose closure
/// contains `corner`.
struct CornerFlux {
    Point corner;
    double value{0.0};
};

/// Coefficients and sources of the coupled Darcy-Forchheimer / heat system.
struct ProblemData {
    std::function<double(Point)> viscosity;
    double viscosity_min{1.0};
    double viscosity_max{1.0};
    double diffusivity{1.0};
    std::function<Vec2(Point)> force0;
    /// Temperature-dependent force; must vanish at s = 0.
    std::function<Vec2(double)> force1;
    std::vector<Point> dirac_sources;
    /// Lebesgue exponent of the temperature estimator.
    double p{1.5};
    std::vector<CornerFlux> flux_bc;
    int quad_degree{kDefaultQuadratureDegree};
};

/// Throws std::invalid_argument if the data violate their basic assumptions
/// (kappa <= 0, missing callables, f1(0) != 0, inverted viscosity bounds).
void validate(const ProblemData& data);

double eval_p1(const Mesh& mesh, std::span<const double> coeffs, Index k,
               const std::array<double, 3>& bary);
Vec2 grad_p1(const Mesh& mesh, std::span<const double> coeffs, Index k);
/// Gradients of the three hat functions of triangle k.
std::array<Vec2, 3> hat_gradients(const Mesh& mesh, Index k);

/// Point evaluation of the hat functions: entry v is sum over sources z of
/// phi_v(z). Boundary entries are kept; callers drop them for Dirichlet dofs.
std::vector<double> dirac_load(const Mesh& mesh, std::span<const Point> sources);

/// Boundary normal flux per boundary edge (zero on edges not touching any
/// corner), with the mean removed so the total flux vanishes. Empty if
/// `flux_bc` is empty.
std::vector<double> boundary_flux(const Mesh& mesh, std::span<const CornerFlux> flux_bc);

/// Linearized Darcy-Forchheimer step.
///
/// velocity_mass[k] is the scalar of the 2x2 block int_K (nu + |u_prev|) I.
/// divergence is B with B(q, 2k + d) = |K| d_d phi_q on K (rows: pressure
/// vertices, columns: velocity dofs). rhs_u = int_K (f0 + f1(T_prev)),
/// rhs_p = int_{boundary} q g_N.
struct DarcySystem {
    std::vector<double> velocity_mass;
    SparseMatrix divergence;
    std::vector<double> rhs_u;
    std::vector<double> rhs_p;
    /// int_Omega phi_q, the mean-value constraint row.
    std::vector<double> mean_weights;
};

/// Parts of the Darcy step that depend on the mesh and data only:
/// int_K nu per element and int_K f0 interleaved per element.
struct DarcyMeshTerms {
    std::vector<double> nu_integral;
    std::vector<double> f0_integral;
};
DarcyMeshTerms darcy_mesh_terms(const Mesh& mesh, const ProblemData& data);

DarcySystem assemble_darcy_step(const Mesh& mesh, const ProblemData& data, const FeFunction& u_prev,
                                const FeFunction& t_prev, const DarcyMeshTerms* cached = nullptr);

/// Full saddle-point matrix [A B^T 0; B 0 c; 0 c^T 0] of size 2 nt + nv + 1.
SparseMatrix darcy_saddle_matrix(const DarcySystem& sys);

struct DarcySolution {
    FeFunction velocity;
    FeFunction pressure;
    double multiplier{0.0};
};

/// Solves the step by eliminating the element-diagonal velocity block and
/// solving the pressure Schur complement with the mean-value multiplier.
/// `ordering` caches the column ordering of the pressure system across calls
/// on the same mesh (see factor_solve).
DarcySolution solve_darcy_step(const Mesh& mesh, const DarcySystem& sys,
                               std::vector<std::int32_t>* ordering = nullptr);

/// Maps interior vertices to consecutive dof ids; -1 on the boundary.
struct InteriorDofs {
    std::vector<Index> vertex_to_dof;
    std::vector<Index> dof_to_vertex;
    std::size_t size() const { return dof_to_vertex.size(); }
};
InteriorDofs interior_dofs(const Mesh& mesh);

/// kappa * stiffness - convection, with entries
/// int_K kappa grad phi_j . grad phi_i - int_K phi_j u . grad phi_i,
/// restricted to interior dofs (homogeneous Dirichlet elimination).
SparseMatrix assemble_heat(const Mesh& mesh, const ProblemData& data, const FeFunction& u,
                           const InteriorDofs& dofs);

/// Same operator before boundary elimination, over all vertices.
SparseMatrix assemble_heat_full(const Mesh& mesh, const ProblemData& data, const FeFunction& u);

/// Solves the heat step for the given velocity and returns T_h (zero trace).
FeFunction solve_heat_step(const Mesh& mesh, const ProblemData& data, const FeFunction& u,
                           std::vector<std::int32_t>* ordering = nullptr);

/// Pointwise Darcy-Forchheimer operator nu v + |v| v.
Vec2 forchheimer_operator(double nu, Vec2 v);

}  // namespace dfh
