#include <gtest/gtest.h>

#include <cmath>

#include "besov/generate.hpp"
#include "besov/oracle.hpp"
#include "besov/oracle_suite.hpp"

using namespace besov;

namespace {

MetricMeasureSpace two_point(double d) { return MetricMeasureSpace({0.0, d, d, 0.0}, {1.0, 1.0}); }

}  // namespace

TEST(BruteCapacity, TwoPointLinearClosedForm) {
    EXPECT_NEAR(oracle::brute_capacity(two_point(1.9), PointSet{0}, 0.5, 1.0, 1.0), 1.0 + 1.0 / std::sqrt(1.9), 1e-12);
    EXPECT_NEAR(oracle::brute_capacity(two_point(1.0), PointSet{0}, 0.5, 1.0, 1.0), 2.0, 1e-12);
}

TEST(BruteCapacity, TwoPointQuadraticWithinGridCell) {
    const double brute = oracle::brute_capacity(two_point(1.9), PointSet{0}, 0.5, 2.0, 2.0);
    EXPECT_GE(brute, 1.880694765 - 1e-9);
    EXPECT_LE(brute, 1.880694765 * (1 + 1e-3));
}

TEST(BruteCapacity, WholeSpace) {
    const auto s = random_cloud(4, 2, 2, 1.0, true);
    EXPECT_NEAR(oracle::brute_capacity(s, s.all_points(), 0.5, 2.0, 1.0), s.total_measure(), 1e-12);
}

TEST(BruteCapacity, Caps) {
    const auto s = line_grid(5);
    EXPECT_THROW(oracle::brute_capacity(s, PointSet{0}, 0.5, 1.0, 1.0), oracle::CapExceeded);
    EXPECT_THROW(oracle::brute_capacity(line_grid(3), PointSet{0}, 0.5, 1.5, 1.0), Error);
}

TEST(BruteContent, IsolatedPoint) {
    const MetricMeasureSpace s({0.0, 3.0, 3.0, 0.0}, {0.7, 1.0});
    const auto phi = Gauge::power(0.5);
    EXPECT_DOUBLE_EQ(oracle::brute_content(s, PointSet{0}, phi, 1.0, 1.0), 0.7);
}

TEST(BruteContent, PairChoosesCheaperOfOneOrTwoBalls) {
    // Two unit-weight points at distance 1, phi(r) = r, theta = 1, R = 2:
    // one ball of radius 2 costs 2/2 = 1, two balls of radius 1 cost 1 + 1.
    const auto s = line_grid(2);
    EXPECT_DOUBLE_EQ(oracle::brute_content(s, PointSet{0, 1}, Gauge::power(1.0), 1.0, 2.0), 1.0);
}

TEST(OracleSuite, AgreesOnRandomInstances) {
    const auto rep = check_oracle_agreement(20, 4);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.find("capacity_matches_brute_force")->trials, 20U);
}
