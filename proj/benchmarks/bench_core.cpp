#include <benchmark/benchmark.h>

#include "dfh/adaptivity.hpp"
#include "dfh/config.hpp"
#include "dfh/estimator.hpp"

using namespace dfh;

namespace {

// Uniformly refined criss-cross mesh; each level roughly doubles the elements.
Mesh uniform_mesh(int levels) {
    Mesh m = criss_cross_square();
    for (int l = 0; l < levels; ++l) {
        std::vector<Index> all(m.num_elements());
        for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<Index>(k);
        m = longest_edge_bisect(m, all);
    }
    return m;
}

void BM_DarcyAssembly(benchmark::State& state) {
    const Mesh m = uniform_mesh(static_cast<int>(state.range(0)));
    const ProblemData d = example1_problem(1.5);
    const auto u = FeFunction::zero(m, SpaceTag::VelocityP0Vec), t = FeFunction::zero(m, SpaceTag::TemperatureP1);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_darcy_step(m, d, u, t));
    state.counters["elements"] = static_cast<double>(m.num_elements());
}
BENCHMARK(BM_DarcyAssembly)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_HeatSolve(benchmark::State& state) {
    const Mesh m = uniform_mesh(static_cast<int>(state.range(0)));
    const ProblemData d = example1_problem(1.5);
    const auto u = FeFunction::zero(m, SpaceTag::VelocityP0Vec);
    for (auto _ : state) benchmark::DoNotOptimize(solve_heat_step(m, d, u));
    state.counters["vertices"] = static_cast<double>(m.num_vertices());
}
BENCHMARK(BM_HeatSolve)->Arg(4)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SparseLU(benchmark::State& state) {
    const Mesh m = uniform_mesh(static_cast<int>(state.range(0)));
    const ProblemData d = example1_problem(1.5);
    const SparseMatrix a = assemble_heat(m, d, FeFunction::zero(m, SpaceTag::VelocityP0Vec), interior_dofs(m));
    const auto ord = state.range(1) == 0 ? ColumnOrdering::MinimumDegree : ColumnOrdering::ReverseCuthillMcKee;
    for (auto _ : state) benchmark::DoNotOptimize(SparseLU(a, 0.1, ord));
    state.counters["unknowns"] = static_cast<double>(a.rows());
}
BENCHMARK(BM_SparseLU)->Args({8, 0})->Args({8, 1})->Unit(benchmark::kMillisecond);

void BM_PicardSolve(benchmark::State& state) {
    const Mesh m = uniform_mesh(static_cast<int>(state.range(0)));
    const ProblemData d = example1_problem(1.5);
    for (auto _ : state) benchmark::DoNotOptimize(picard_solve(m, d));
}
BENCHMARK(BM_PicardSolve)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state) {
    const Mesh m = uniform_mesh(static_cast<int>(state.range(0)));
    const ProblemData d = example1_problem(1.5);
    const CoupledState s = picard_solve(m, d);
    for (auto _ : state) benchmark::DoNotOptimize(estimate(m, s, d));
    state.counters["elements"] = static_cast<double>(m.num_elements());
}
BENCHMARK(BM_Estimate)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Bisection(benchmark::State& state) {
    const Mesh m = uniform_mesh(static_cast<int>(state.range(0)));
    std::vector<double> ind(m.num_elements());
    for (std::size_t k = 0; k < ind.size(); ++k) {
        const Point c = m.centroid(static_cast<Index>(k));
        ind[k] = 1.0 / (0.01 + (c.x - 0.3) * (c.x - 0.3) + (c.y - 0.6) * (c.y - 0.6));
    }
    const auto marked = mark_max(ind);
    for (auto _ : state) benchmark::DoNotOptimize(longest_edge_bisect(m, marked));
    state.counters["marked"] = static_cast<double>(marked.size());
}
BENCHMARK(BM_Bisection)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
