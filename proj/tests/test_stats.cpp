#include <gtest/gtest.h>

#include <cmath>

#include "edo/rng.hpp"
#include "edo/stats.hpp"
#include "oracles.hpp"

using namespace edo;
using namespace edo::stats;

TEST(WmwTest, SeparatedSamplesExactP) {
    // U = 9 is the largest of C(6,3) = 20 equally likely rank splits
    EXPECT_NEAR(wmw_test({10, 11, 12}, {1, 2, 3}), 0.05, 1e-12);
    EXPECT_DOUBLE_EQ(mann_whitney_u({10, 11, 12}, {1, 2, 3}), 9.0);
}

TEST(WmwTest, IdenticalSamplesGiveNoEvidence) {
    EXPECT_GE(wmw_test({1, 2, 3, 4}, {1, 2, 3, 4}), 0.5);
    EXPECT_EQ(wmw_test({5, 5, 5}, {5, 5}), 1.0);
    std::vector<double> big(30, 2.0);
    EXPECT_EQ(wmw_test(big, big), 1.0);
}

TEST(WmwTest, EmptySampleRejected) {
    EXPECT_THROW(wmw_test({}, {1.0}), ParameterError);
    EXPECT_THROW(wmw_test({1.0}, {}), ParameterError);
}

TEST(WmwTest, ExactModeMatchesEnumeration) {
    Rng rng(51);
    for (int t = 0; t < 300; ++t) {
        const auto na = 1 + rng.below(6), nb = 1 + rng.below(6);
        std::vector<double> a, b;
        // small integer support forces ties
        for (std::size_t i = 0; i < na; ++i) a.push_back(static_cast<double>(rng.below(5)));
        for (std::size_t i = 0; i < nb; ++i) b.push_back(static_cast<double>(rng.below(5)));
        ASSERT_NEAR(wmw_test(a, b), oracle::rank_sum_p_enumerated(a, b), 1e-12) << "trial " << t;
    }
}

TEST(WmwTest, SwapSymmetryInExactRegime) {
    Rng rng(52);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a, b;
        for (std::size_t i = 0; i < 1 + rng.below(5); ++i) a.push_back(static_cast<double>(rng.below(4)));
        for (std::size_t i = 0; i < 1 + rng.below(5); ++i) b.push_back(static_cast<double>(rng.below(4)));
        // P(U_b >= u_b) = P(U_a <= u_a) = 1 - P(U_a >= u_a) + P(U_a = u_a)
        const double pab = wmw_test(a, b), pba = wmw_test(b, a);
        const double tie = pab + pba - 1.0;
        EXPECT_GE(tie, -1e-12);
        EXPECT_NEAR(pba, 1.0 - pab + tie, 1e-12);
    }
}

TEST(WmwTest, InvariantUnderMonotoneTransform) {
    Rng rng(53);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a, b, ta, tb;
        const auto na = 1 + rng.below(15), nb = 1 + rng.below(15);
        for (std::size_t i = 0; i < na; ++i) a.push_back(static_cast<double>(rng.below(10)) / 3.0);
        for (std::size_t i = 0; i < nb; ++i) b.push_back(static_cast<double>(rng.below(10)) / 3.0);
        for (double x : a) ta.push_back(std::exp(x) * 7 - 2);
        for (double x : b) tb.push_back(std::exp(x) * 7 - 2);
        EXPECT_NEAR(wmw_test(a, b), wmw_test(ta, tb), 1e-12);
    }
}

TEST(WmwTest, NormalApproximationTracksExact) {
    // 11 + 11 = 22 values use the normal branch; compare with the exact
    // distribution of the same split obtained from enumeration-free DP at 10 + 10
    std::vector<double> a, b;
    for (int i = 0; i < 11; ++i) {
        a.push_back(i + 4.5);
        b.push_back(i);
    }
    const double p = wmw_test(a, b);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 0.01);
    a.pop_back();
    b.pop_back();
    EXPECT_NEAR(wmw_test(a, b), 0.0, 0.02);
    EXPECT_NEAR(wmw_test({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}), 0.5, 0.05);
}

TEST(WmwTest, TwoSided) {
    EXPECT_NEAR(wmw_test({10, 11, 12}, {1, 2, 3}, Alternative::two_sided), 0.1, 1e-12);
    EXPECT_NEAR(wmw_test({1, 2, 3}, {10, 11, 12}, Alternative::two_sided), 0.1, 1e-12);
}

TEST(HolmAdjust, StepDownStopsAtFirstFailure) {
    EXPECT_EQ(holm_adjust({0.01, 0.03, 0.04}, 0.05), (std::vector<bool>{true, false, false}));
    EXPECT_EQ(holm_adjust({0.04, 0.01, 0.03}, 0.05), (std::vector<bool>{false, true, false}));
}

TEST(HolmAdjust, TrivialCases) {
    EXPECT_EQ(holm_adjust({1.0, 1.0, 1.0}, 0.05), (std::vector<bool>{false, false, false}));
    EXPECT_EQ(holm_adjust({0.04}, 0.05), (std::vector<bool>{true}));
    EXPECT_THROW(holm_adjust({1.2}, 0.05), ParameterError);
}

TEST(HolmAdjust, SupersetOfBonferroni) {
    Rng rng(54);
    for (int t = 0; t < 1000; ++t) {
        const auto m = 1 + rng.below(12);
        std::vector<double> p;
        for (std::size_t i = 0; i < m; ++i) p.push_back(std::pow(rng.uniform01(), 3.0));
        const auto holm = holm_adjust(p, 0.05);
        for (std::size_t i = 0; i < m; ++i) {
            if (p[i] <= 0.05 / static_cast<double>(m)) {
                ASSERT_TRUE(holm[i]);
            }
        }
    }
}

TEST(PairwiseTests, OneSidedReportsDirection) {
    const std::vector<NamedSample> s{{"bf", {1, 2, 3, 4, 5}}, {"pbf", {11, 12, 13, 14, 15}}};
    const auto r = pairwise_tests(s, 0.05);
    ASSERT_EQ(r.pairs.size(), 2U);
    EXPECT_EQ(r.pairs[0].algo_a, "bf");
    EXPECT_FALSE(r.pairs[0].reject);
    EXPECT_EQ(r.pairs[0].direction, Direction::none);
    EXPECT_TRUE(r.pairs[1].reject);
    EXPECT_EQ(r.pairs[1].direction, Direction::a_greater);
    EXPECT_NEAR(r.pairs[1].p_value, 1.0 / 252.0, 1e-12);
}

TEST(PairwiseTests, TwoSidedOrientsByRanks) {
    const std::vector<NamedSample> s{{"bf", {1, 2, 3, 4, 5}}, {"pbf", {11, 12, 13, 14, 15}}};
    const auto r = pairwise_tests(s, 0.05, Alternative::two_sided);
    ASSERT_EQ(r.pairs.size(), 1U);
    EXPECT_TRUE(r.pairs[0].reject);
    EXPECT_EQ(r.pairs[0].direction, Direction::b_greater);
}
