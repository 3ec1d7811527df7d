#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dfh/adaptivity.hpp"
#include "dfh/config.hpp"

using namespace dfh;

TEST(CountDofs, CrissCross) {
    // 2*16 velocity + 13 pressure + 5 interior temperature + 1 multiplier
    EXPECT_EQ(count_dofs(criss_cross_square()), 51u);
}

TEST(MarkMax, Cases) {
    EXPECT_EQ(mark_max(std::vector<double>{4, 1, 3}), (std::vector<Index>{0, 2}));
    EXPECT_EQ(mark_max(std::vector<double>{1, 1, 1}), (std::vector<Index>{0, 1, 2}));
    EXPECT_EQ(mark_max(std::vector<double>{2, 1}), (std::vector<Index>{0}));
    EXPECT_TRUE(mark_max(std::vector<double>{0, 0}).empty());
    EXPECT_THROW(mark_max(std::vector<double>{}), std::invalid_argument);
}

TEST(AdaptiveLoop, ZeroIterationsGivesOneRow) {
    const AdaptiveResult r = adaptive_loop(criss_cross_square(), example1_problem(1.5), {0, {}});
    ASSERT_EQ(r.record.rows.size(), 1u);
    EXPECT_EQ(r.record.rows[0].marked, 0u);
    EXPECT_EQ(r.record.rows[0].ndof, 51u);
}

TEST(AdaptiveLoop, NdofStrictlyIncreases) {
    int calls = 0;
    const AdaptiveResult r = adaptive_loop(l_shape(), example2_problem(1.6), {5, {}},
                                           [&](int, const Mesh&, const CoupledState&, const IndicatorField&) { ++calls; });
    ASSERT_EQ(r.record.rows.size(), 6u);
    EXPECT_EQ(calls, 6);
    for (std::size_t i = 1; i < r.record.rows.size(); ++i) {
        EXPECT_GT(r.record.rows[i].ndof, r.record.rows[i - 1].ndof);
        EXPECT_GT(r.record.rows[i - 1].marked, 0u);
        EXPECT_EQ(r.record.rows[i].iter, static_cast<int>(i));
    }
    EXPECT_EQ(r.record.picard_increments.size(), 6u);
    EXPECT_EQ(r.mesh.num_elements(), r.record.rows.back().nt);
}

TEST(AdaptiveLoop, NegativeIterationsRejected) {
    EXPECT_THROW(adaptive_loop(criss_cross_square(), example1_problem(1.5), {-1, {}}), std::invalid_argument);
}

TEST(AdaptiveLoop, PicardFailureNamesRound) {
    AdaptiveOptions o;
    o.n_iterations = 3;
    o.picard.max_iter = 1;
    try {
        (void)adaptive_loop(criss_cross_square(), example1_problem(1.5), o);
        FAIL();
    } catch (const AdaptiveLoopError& e) {
        EXPECT_EQ(e.iteration(), 0);
    }
}

TEST(Rates, ExactPowerLaw) {
    RunRecord rec;
    for (int i = 0; i < 12; ++i) {
        RunRow r;
        r.iter = i;
        r.ndof = static_cast<std::size_t>(100 * std::pow(2, i));
        r.est_total = 3.0 * std::pow(static_cast<double>(r.ndof), -0.5);
        rec.rows.push_back(r);
    }
    EXPECT_NEAR(fit_rate(rec, 10), -0.5, 1e-12);
    EXPECT_NEAR(fit_rate(rec, 2), -0.5, 1e-12);
    EXPECT_THROW(fit_rate(rec, 1), std::invalid_argument);
    rec.rows.resize(10);
    EXPECT_THROW(fit_rate(rec, 10), std::invalid_argument);
    EXPECT_THROW(fit_loglog_slope(std::vector<double>{1, 1}, std::vector<double>{1, 2}), std::invalid_argument);
    EXPECT_THROW(fit_loglog_slope(std::vector<double>{1, 0}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Csv, RoundTrip) {
    const AdaptiveResult r = adaptive_loop(criss_cross_square(), example1_problem(1.5), {3, {}});
    std::stringstream s;
    write_csv(s, r.record);
    const RunRecord back = read_csv(s);
    EXPECT_EQ(back.rows, r.record.rows);
}

TEST(Csv, RejectsBadInput) {
    std::stringstream empty;
    EXPECT_THROW(read_csv(empty), std::runtime_error);
    std::stringstream header("iter,nv\n");
    EXPECT_THROW(read_csv(header), std::runtime_error);
    std::stringstream row(std::string(kRunRecordHeader) + "\n1,2,3\n");
    EXPECT_THROW(read_csv(row), std::runtime_error);
}
