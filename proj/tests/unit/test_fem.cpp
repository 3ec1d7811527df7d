#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dfh/config.hpp"
#include "dfh/fem.hpp"

using namespace dfh;

namespace {

ProblemData constant_problem() {
    ProblemData d;
    d.viscosity = [](Point) { return 1.0; };
    d.force0 = [](Point) { return Vec2{1.0, 1.0}; };
    d.force1 = [](double) { return Vec2{0.0, 0.0}; };
    d.dirac_sources = {{0.5, 0.5}};
    return d;
}

Mesh refined_square(int rounds) {
    Mesh m = criss_cross_square();
    for (int r = 0; r < rounds; ++r) {
        std::vector<Index> marked;
        for (std::size_t k = 0; k < m.num_elements(); k += 2) marked.push_back(static_cast<Index>(k));
        m = longest_edge_bisect(m, marked);
    }
    return m;
}

}  // namespace

TEST(Validate, RejectsBadData) {
    ProblemData d = constant_problem();
    EXPECT_NO_THROW(validate(d));
    d.diffusivity = 0.0;
    EXPECT_THROW(validate(d), std::invalid_argument);
    d = constant_problem();
    d.force1 = [](double s) { return Vec2{s + 1.0, 0.0}; };
    EXPECT_THROW(validate(d), std::invalid_argument);
    d = constant_problem();
    d.viscosity = nullptr;
    EXPECT_THROW(validate(d), std::invalid_argument);
    d = constant_problem();
    d.viscosity_min = 2.0;
    EXPECT_THROW(validate(d), std::invalid_argument);
}

TEST(P1, LinearFieldsAreExact) {
    const Mesh m = refined_square(2);
    std::vector<double> c(m.num_vertices());
    for (std::size_t v = 0; v < c.size(); ++v) {
        const Point p = m.vertex(static_cast<Index>(v));
        c[v] = 2.0 * p.x - 3.0 * p.y + 0.5;
    }
    for (std::size_t kk = 0; kk < m.num_elements(); ++kk) {
        const auto k = static_cast<Index>(kk);
        const Vec2 g = grad_p1(m, c, k);
        EXPECT_NEAR(g.x, 2.0, 1e-12);
        EXPECT_NEAR(g.y, -3.0, 1e-12);
        const Point x = m.centroid(k);
        EXPECT_NEAR(eval_p1(m, c, k, {1.0 / 3, 1.0 / 3, 1.0 / 3}), 2.0 * x.x - 3.0 * x.y + 0.5, 1e-13);
        const auto hg = hat_gradients(m, k);
        EXPECT_NEAR(hg[0].x + hg[1].x + hg[2].x, 0.0, 1e-12);
        EXPECT_NEAR(hg[0].y + hg[1].y + hg[2].y, 0.0, 1e-12);
    }
}

TEST(DiracLoad, InteriorVertexIsUnitVector) {
    const Mesh m = criss_cross_square();
    const Point z{0.5, 0.5};
    const auto load = dirac_load(m, std::vector<Point>{z});
    for (std::size_t v = 0; v < load.size(); ++v)
        EXPECT_DOUBLE_EQ(load[v], m.vertex(static_cast<Index>(v)) == z ? 1.0 : 0.0);
}

TEST(DiracLoad, BarycenterSplitsEvenly) {
    const Mesh m = criss_cross_square();
    const auto load = dirac_load(m, std::vector<Point>{m.centroid(3)});
    for (Index v : m.triangle(3)) EXPECT_NEAR(load[static_cast<std::size_t>(v)], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(std::accumulate(load.begin(), load.end(), 0.0), 1.0, 1e-15);
}

TEST(BoundaryFlux, FiveSpotHasZeroTotalFlux) {
    const Mesh m = refined_square(3);
    const ProblemData d = fivespot_problem(1.0);
    const auto g = boundary_flux(m, d.flux_bc);
    double total = 0.0, inflow = 0.0;
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
        if (!m.is_boundary_edge(static_cast<Index>(e))) continue;
        total += g[e] * m.edge_length(static_cast<Index>(e));
        inflow += std::abs(g[e]) * m.edge_length(static_cast<Index>(e));
    }
    EXPECT_NEAR(total, 0.0, 1e-14);
    EXPECT_GT(inflow, 0.0);
    EXPECT_TRUE(boundary_flux(m, {}).empty());
}

TEST(DarcyStep, SaddleRouteMatchesCondensation) {
    const Mesh m = refined_square(3);
    const ProblemData d = example1_problem(1.5);
    // nonzero previous iterate so the Forchheimer term and f1(T) are active
    FeFunction u = FeFunction::zero(m, SpaceTag::VelocityP0Vec), t = FeFunction::zero(m, SpaceTag::TemperatureP1);
    for (std::size_t i = 0; i < u.coefficients.size(); ++i) u.coefficients[i] = std::sin(0.37 * static_cast<double>(i));
    for (std::size_t v = 0; v < t.coefficients.size(); ++v)
        if (!m.is_boundary_vertex(static_cast<Index>(v))) t.coefficients[v] = 0.1 * std::cos(static_cast<double>(v));
    const DarcySystem sys = assemble_darcy_step(m, d, u, t);
    const DarcySolution cond = solve_darcy_step(m, sys);

    std::vector<double> rhs(sys.rhs_u);
    rhs.insert(rhs.end(), sys.rhs_p.begin(), sys.rhs_p.end());
    rhs.push_back(0.0);
    const auto x = factor_solve(darcy_saddle_matrix(sys), rhs);
    const std::size_t nu = sys.rhs_u.size();
    for (std::size_t i = 0; i < nu; ++i) EXPECT_NEAR(x[i], cond.velocity.coefficients[i], 1e-10);
    for (std::size_t q = 0; q < sys.rhs_p.size(); ++q) EXPECT_NEAR(x[nu + q], cond.pressure.coefficients[q], 1e-10);

    double mean = 0.0;
    for (std::size_t q = 0; q < sys.mean_weights.size(); ++q) mean += sys.mean_weights[q] * cond.pressure.coefficients[q];
    EXPECT_NEAR(mean, 0.0, 1e-12);
}

TEST(DarcyStep, CachedMeshTermsAgree) {
    const Mesh m = refined_square(2);
    const ProblemData d = example1_problem(1.5);
    const auto u = FeFunction::zero(m, SpaceTag::VelocityP0Vec), t = FeFunction::zero(m, SpaceTag::TemperatureP1);
    const DarcyMeshTerms cache = darcy_mesh_terms(m, d);
    const DarcySystem a = assemble_darcy_step(m, d, u, t), b = assemble_darcy_step(m, d, u, t, &cache);
    EXPECT_EQ(a.velocity_mass, b.velocity_mass);
    EXPECT_EQ(a.rhs_u, b.rhs_u);
}

TEST(DarcyStep, ViscosityOutOfBoundsIsRejected) {
    const Mesh m = criss_cross_square();
    ProblemData d = constant_problem();
    d.viscosity = [](Point x) { return x.x < 0.5 ? 1.0 : 5.0; };
    EXPECT_ANY_THROW(darcy_mesh_terms(m, d));
}

TEST(Heat, StiffnessRowSumsVanishWithoutConvection) {
    const Mesh m = refined_square(2);
    const ProblemData d = constant_problem();
    const SparseMatrix a = assemble_heat_full(m, d, FeFunction::zero(m, SpaceTag::VelocityP0Vec));
    const auto r = a.multiply(std::vector<double>(m.num_vertices(), 1.0));
    for (double v : r) EXPECT_NEAR(v, 0.0, 1e-13);
    // symmetric without convection
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) EXPECT_NEAR(a.coeff(i, j), a.coeff(j, i), 1e-14);
}

TEST(Heat, InteriorDofsAndZeroTrace) {
    const Mesh m = refined_square(2);
    const InteriorDofs dofs = interior_dofs(m);
    EXPECT_EQ(dofs.size(), m.num_vertices() - m.num_boundary_vertices());
    const ProblemData d = example1_problem(1.5);
    const FeFunction t = solve_heat_step(m, d, FeFunction::zero(m, SpaceTag::VelocityP0Vec));
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
        if (m.is_boundary_vertex(static_cast<Index>(v))) EXPECT_EQ(t.coefficients[v], 0.0);
    // sources at vertices make T positive somewhere
    EXPECT_GT(*std::max_element(t.coefficients.begin(), t.coefficients.end()), 0.0);
}

TEST(Forchheimer, Operator) {
    const Vec2 a = forchheimer_operator(2.0, {3.0, 4.0});
    EXPECT_DOUBLE_EQ(a.x, 2.0 * 3.0 + 5.0 * 3.0);
    EXPECT_DOUBLE_EQ(a.y, 2.0 * 4.0 + 5.0 * 4.0);
}
