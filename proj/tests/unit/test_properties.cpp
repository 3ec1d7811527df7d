#include <gtest/gtest.h>

#include "properties.hpp"

using namespace dfh::props;

TEST(Properties, QuadratureExactness) {
    const auto r = quadrature_exactness();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, BisectionRandomRounds) {
    const auto r = bisection_random_rounds(1000, 20261016);
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, ForchheimerMonotonicity) {
    const auto r = forchheimer_monotonicity(10000, 11);
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, IndicatorQuadratureVsSubdivision) {
    const auto r = indicator_quadrature_vs_subdivision(1e-6);
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, MarkMaxCases) {
    const auto r = mark_max_cases();
    EXPECT_TRUE(r.ok) << r.detail;
}
