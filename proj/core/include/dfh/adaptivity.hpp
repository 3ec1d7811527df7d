#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfh/coupled_solver.hpp"
#include "dfh/estimator.hpp"
#include "dfh/fem.hpp"
#include "dfh/mesh.hpp"

namespace dfh {

struct RunRow {
    int iter{0};
    std::size_t nv{0};
    std::size_t nt{0};
    std::size_t ndof{0};
    double est_heat{0.0};
    double est_darcy{0.0};
    double est_total{0.0};
    int picard_iters{0};
    std::size_t marked{0};

    friend bool operator==(const RunRow&, const RunRow&) = default;
};

struct RunRecord {
    std::vector<RunRow> rows;
    /// Picard increment history of every round (not part of the CSV).
    std::vector<std::vector<double>> picard_increments;
    /// Free-form description of the configuration that produced the run.
    std::string config;
    std::vector<std::string> notices;
};

/// Total unknown count: 2 nt velocity + nv pressure + interior temperature
/// vertices + 1 mean-value multiplier.
std::size_t count_dofs(const Mesh& mesh);

/// Elements with indicator > max/2, plus the arg-max. Empty when every
/// indicator is zero. Throws std::invalid_argument on an empty field.
std::vector<Index> mark_max(std::span<const double> indicators);

struct AdaptiveOptions {
    int n_iterations{0};
    PicardOptions picard{};
};

struct AdaptiveResult {
    RunRecord record;
    Mesh mesh;
    CoupledState state;
    IndicatorField indicators;
};

/// Called after the estimate of every round.
using RoundObserver =
    std::function<void(int iter, const Mesh&, const CoupledState&, const IndicatorField&)>;

class AdaptiveLoopError : public std::runtime_error {
public:
    AdaptiveLoopError(int iteration, const std::string& what)
        : std::runtime_error("adaptive round " + std::to_string(iteration) + ": " + what),
          iteration_(iteration) {}
    int iteration() const { return iteration_; }

private:
    int iteration_;
};

/// SOLVE -> ESTIMATE -> MARK -> REFINE for `n_iterations` refinements; the
/// record has n_iterations + 1 rows unless marking comes back empty.
AdaptiveResult adaptive_loop(const Mesh& initial, const ProblemData& data, const AdaptiveOptions& options,
                             const RoundObserver& observer = {});

/// Least-squares slope of log(est_total) against log(ndof) over the last
/// `tail` rows. Needs at least tail + 1 rows and tail >= 2.
double fit_rate(const RunRecord& record, int tail);
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

inline constexpr const char* kRunRecordHeader = "iter,nv,nt,ndof,est_heat,est_darcy,est_total,picard_iters,marked";

void write_csv(std::ostream& out, const RunRecord& record);
RunRecord read_csv(std::istream& in);
void write_csv_file(const std::string& path, const RunRecord& record);
RunRecord read_csv_file(const std::string& path);

}  // namespace dfh
