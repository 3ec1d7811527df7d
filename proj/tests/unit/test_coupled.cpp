#include <gtest/gtest.h>

#include <cmath>

#include "dfh/config.hpp"
#include "dfh/coupled_solver.hpp"
#include "dfh/estimator.hpp"

using namespace dfh;

namespace {

ProblemData fixed_point_problem() {
    ProblemData d;
    d.viscosity = [](Point) { return 1.0; };
    d.force0 = [](Point) { return Vec2{1.0, 1.0}; };
    d.force1 = [](double) { return Vec2{0.0, 0.0}; };
    d.dirac_sources = {{0.5, 0.5}};
    d.p = 1.5;
    return d;
}

Mesh refined(Mesh m, int rounds) {
    for (int r = 0; r < rounds; ++r) {
        std::vector<Index> marked;
        for (std::size_t k = 0; k < m.num_elements(); k += 3) marked.push_back(static_cast<Index>(k));
        m = longest_edge_bisect(m, marked);
    }
    return m;
}

}  // namespace

TEST(Picard, AnalyticFixedPoint) {
    const ProblemData d = fixed_point_problem();
    for (const Mesh& m : {criss_cross_square(), refined(criss_cross_square(), 4)}) {
        const CoupledState s = picard_solve(m, d);
        ASSERT_TRUE(s.converged);
        for (double v : s.velocity.coefficients) EXPECT_LE(std::abs(v), 1e-10);
        for (std::size_t v = 0; v < m.num_vertices(); ++v) {
            const Point x = m.vertex(static_cast<Index>(v));
            EXPECT_NEAR(s.pressure.coefficients[v], x.x + x.y - 1.0, 1e-10);
        }
        const auto darcy = darcy_indicators(m, s, d);
        double e2 = 0.0;
        for (double v : darcy) e2 += v * v;
        EXPECT_LE(std::sqrt(e2), 1e-9);
    }
}

TEST(Picard, InvariantsOnExample1) {
    const Mesh m = refined(criss_cross_square(), 3);
    const ProblemData d = example1_problem(1.4);
    const CoupledState s = picard_solve(m, d);
    ASSERT_TRUE(s.converged);
    EXPECT_LE(s.final_increment, 1e-8);
    EXPECT_EQ(static_cast<std::size_t>(s.picard_iters), s.increments.size());
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
        if (m.is_boundary_vertex(static_cast<Index>(v))) EXPECT_EQ(s.temperature.coefficients[v], 0.0);
    double mean = 0.0, scale = 0.0;
    for (std::size_t kk = 0; kk < m.num_elements(); ++kk) {
        const auto k = static_cast<Index>(kk);
        const double pk = eval_p1(m, s.pressure.coefficients, k, {1.0 / 3, 1.0 / 3, 1.0 / 3});
        mean += m.area(k) * pk;
        scale += m.area(k) * std::abs(pk);
    }
    EXPECT_LE(std::abs(mean), 1e-10 * scale);
}

TEST(Picard, RestartConvergesInOneIteration) {
    const Mesh m = refined(criss_cross_square(), 2);
    const ProblemData d = example1_problem(1.4);
    const CoupledState s = picard_solve(m, d);
    const CoupledState r = picard_solve(m, d, {}, &s);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.picard_iters, 1);
}

TEST(Picard, NonConvergenceCarriesHistory) {
    const Mesh m = criss_cross_square();
    PicardOptions o;
    o.max_iter = 2;
    try {
        (void)picard_solve(m, example1_problem(1.4), o);
        FAIL() << "expected PicardNonConvergence";
    } catch (const PicardNonConvergence& e) {
        EXPECT_EQ(e.increments().size(), 2u);
    }
}

TEST(Picard, RelativeToleranceOption) {
    const Mesh m = l_shape();
    PicardOptions o;
    o.relative = true;
    o.tol = 1e-6;
    const CoupledState s = picard_solve(m, example2_problem(1.0), o);
    const CoupledState a = picard_solve(m, example2_problem(1.0));
    EXPECT_TRUE(s.converged);
    EXPECT_LE(s.picard_iters, a.picard_iters);
}

TEST(Picard, FiveSpotConverges) {
    const Mesh m = refined(criss_cross_square(), 2);
    const CoupledState s = picard_solve(m, fivespot_problem(1.0));
    EXPECT_TRUE(s.converged);
    double umax = 0.0;
    for (double v : s.velocity.coefficients) umax = std::max(umax, std::abs(v));
    EXPECT_GT(umax, 0.0);
}
