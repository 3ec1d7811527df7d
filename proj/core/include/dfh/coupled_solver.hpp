#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "dfh/fem.hpp"
#include "dfh/mesh.hpp"

namespace dfh {

struct CoupledState {
    FeFunction velocity;
    FeFunction pressure;
    FeFunction temperature;
    int picard_iters{0};
    double final_increment{0.0};
    bool converged{false};
    /// Euclidean norm of the coefficient increment after each iteration.
    std::vector<double> increments;

    static CoupledState zero(const Mesh& mesh);
};

struct PicardOptions {
    double tol{1e-8};
    int max_iter{200};
    /// Divide the increment by the norm of the new iterate.
    bool relative{false};
};

class PicardNonConvergence : public std::runtime_error {
public:
    PicardNonConvergence(const std::string& what, std::vector<double> increments)
        : std::runtime_error(what), increments_(std::move(increments)) {}
    const std::vector<double>& increments() const { return increments_; }

private:
    std::vector<double> increments_;
};

/// Fixed-point iteration: a linearized Darcy-Forchheimer step with |u^i| and
/// f(T^i) frozen, then the heat equation with the new velocity. Stops when
/// the Euclidean norm of the concatenated (u, p, T) coefficient increment
/// drops to `tol`. Starts from zero unless `initial` is given.
CoupledState picard_solve(const Mesh& mesh, const ProblemData& data, const PicardOptions& options = {},
                          const CoupledState* initial = nullptr);

}  // namespace dfh
