#include "dfh/coupled_solver.hpp"

#include <cmath>
#include <sstream>

namespace dfh {

CoupledState CoupledState::zero(const Mesh& mesh) {
    CoupledState s;
    s.velocity = FeFunction::zero(mesh, SpaceTag::VelocityP0Vec);
    s.pressure = FeFunction::zero(mesh, SpaceTag::PressureP1);
    s.temperature = FeFunction::zero(mesh, SpaceTag::TemperatureP1);
    return s;
}

namespace {

double squared_diff(const FeFunction& a, const FeFunction& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
        const double d = a.coefficients[i] - b.coefficients[i];
        s += d * d;
    }
    return s;
}

double squared_norm(const FeFunction& a) {
    double s = 0.0;
    for (double v : a.coefficients) s += v * v;
    return s;
}

}  // namespace

CoupledState picard_solve(const Mesh& mesh, const ProblemData& data, const PicardOptions& options,
                          const CoupledState* initial) {
    validate(data);
    if (!(options.tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
    if (options.max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be positive");

    CoupledState state = initial ? *initial : CoupledState::zero(mesh);
    if (state.velocity.coefficients.size() != 2 * mesh.num_elements() ||
        state.pressure.coefficients.size() != mesh.num_vertices() ||
        state.temperature.coefficients.size() != mesh.num_vertices())
        throw std::invalid_argument("picard_solve: initial state does not match the mesh");
    state.increments.clear();
    state.converged = false;

    const DarcyMeshTerms mesh_terms = darcy_mesh_terms(mesh, data);
    std::vector<std::int32_t> darcy_ordering, heat_ordering;
    for (int it = 1; it <= options.max_iter; ++it) {
        const DarcySystem sys = assemble_darcy_step(mesh, data, state.velocity, state.temperature, &mesh_terms);
        DarcySolution darcy = solve_darcy_step(mesh, sys, &darcy_ordering);
        FeFunction temp = solve_heat_step(mesh, data, darcy.velocity, &heat_ordering);

        double inc2 = squared_diff(darcy.velocity, state.velocity) + squared_diff(darcy.pressure, state.pressure) +
                      squared_diff(temp, state.temperature);
        double increment = std::sqrt(inc2);
        if (options.relative) {
            const double scale =
                std::sqrt(squared_norm(darcy.velocity) + squared_norm(darcy.pressure) + squared_norm(temp));
            if (scale > 0.0) increment /= scale;
        }

        state.velocity = std::move(darcy.velocity);
        state.pressure = std::move(darcy.pressure);
        state.temperature = std::move(temp);
        state.increments.push_back(increment);
        state.picard_iters = it;
        state.final_increment = increment;
        if (increment <= options.tol) {
            state.converged = true;
            return state;
        }
    }

    std::ostringstream msg;
    msg << "Picard iteration did not reach tol " << options.tol << " in " << options.max_iter
        << " iterations (last increment " << state.final_increment << ")";
    throw PicardNonConvergence(msg.str(), state.increments);
}

}  // namespace dfh
