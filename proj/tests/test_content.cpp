#include <gtest/gtest.h>

#include <cmath>

#include "besov/content.hpp"
#include "besov/content_suite.hpp"
#include "besov/generate.hpp"

using namespace besov;

namespace {

// Three points pairwise 10 apart with the given weights.
MetricMeasureSpace far_points(std::vector<double> w) {
    const std::size_t n = w.size();
    std::vector<double> dist(n * n, 10.0);
    for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = 0.0;
    return MetricMeasureSpace(std::move(dist), std::move(w));
}

Covering balls(std::vector<Ball> b) {
    Covering c;
    c.balls = std::move(b);
    return c;
}

}  // namespace

TEST(Gauge, PowerAndTable) {
    EXPECT_DOUBLE_EQ(Gauge::power(2.0)(3.0), 9.0);
    const auto t = Gauge::table({1.0, 4.0}, {1.0, 2.0});
    EXPECT_NEAR(t(2.0), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(t(16.0), 4.0, 1e-14);
    EXPECT_THROW(Gauge::power(0.0), Error);
    EXPECT_THROW(Gauge::table({1.0, 1.0}, {1.0, 2.0}), Error);
}

TEST(Gauge, AdmissibilityCheck) {
    EXPECT_TRUE(check_gauge(Gauge::power(0.2), 0.5, 1.0).admissible);
    EXPECT_FALSE(check_gauge(Gauge::power(0.5), 0.5, 1.0).admissible);
    EXPECT_FALSE(check_gauge(Gauge::power(0.7), 0.5, 1.0).admissible);
}

TEST(CoveringCost, SingleUnitBall) {
    const auto s = far_points({1.0});
    for (const double theta : {0.3, 1.0, 2.5}) {
        EXPECT_DOUBLE_EQ(covering_cost(s, balls({{0, 1.0}}), Gauge::power(0.7), theta), 1.0);
    }
}

TEST(CoveringCost, SameClassRatiosAddFirst) {
    const auto s = far_points({1.0, 2.0});
    EXPECT_DOUBLE_EQ(covering_cost(s, balls({{0, 1.0}, {1, 1.0}}), Gauge::power(1.0), 2.0), 3.0);
}

TEST(CoveringCost, CrossClassPythagorean) {
    const auto s = far_points({3.0, 2.0});
    EXPECT_DOUBLE_EQ(covering_cost(s, balls({{0, 1.0}, {1, 0.5}}), Gauge::power(1.0), 2.0), 5.0);
}

TEST(CoveringCost, ThetaOneMatchesHausdorff) {
    const auto s = random_cloud(9, 2, 2, 1.0, true);
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        const auto cov = detail::random_covering(s, rng);
        const double d = rng.uniform(0.1, 2.0);
        EXPECT_EQ(covering_cost(s, cov, Gauge::power(d), 1.0), hausdorff_cost(s, cov, d));
    }
}

TEST(CoveringCost, HomogeneousInMeasure) {
    const std::vector<double> v{0.25, 3.0, 1e-3};
    for (const double theta : {0.4, 1.0, 1.7}) {
        const double base = detail::theta_sum(v, theta);
        std::vector<double> scaled = v;
        for (auto& x : scaled) x *= 8.0;
        EXPECT_EQ(detail::theta_sum(scaled, theta), 8.0 * base);
    }
}

TEST(Covers, Membership) {
    const auto s = line_grid(4);
    EXPECT_TRUE(covers(s, balls({{1, 1.5}}), PointSet{0, 1, 2}));
    EXPECT_FALSE(covers(s, balls({{1, 1.0}}), PointSet{0, 1}));
}

TEST(NetrusovContent, IsolatedPointSingleBall) {
    const auto s = far_points({0.7, 1.0, 1.3});
    const auto r = netrusov_content(s, PointSet{0}, Gauge::power(0.5), 1.0, 1.0, ContentMethod::exact);
    EXPECT_DOUBLE_EQ(r.value, 0.7);
    ASSERT_EQ(r.covering.balls.size(), 1U);
    EXPECT_EQ(r.covering.balls[0].center, 0U);
    EXPECT_EQ(r.covering.balls[0].radius, 1.0);
}

TEST(NetrusovContent, InfiniteRadiusIsZero) {
    const MetricMeasureSpace s({0.0}, {2.0});
    EXPECT_EQ(netrusov_content(s, PointSet{0}, Gauge::power(0.5), 1.0, kInfinity).value, 0.0);
}

TEST(NetrusovContent, FinitePointRadiusEnumeration) {
    // One point of weight 2, cap R: the best ball is the largest one allowed.
    const MetricMeasureSpace s({0.0}, {2.0});
    const auto r = netrusov_content(s, PointSet{0}, Gauge::power(0.5), 1.0, 4.0, ContentMethod::exact);
    EXPECT_DOUBLE_EQ(r.value, 1.0);
}

TEST(NetrusovContent, EmptySetRejected) {
    EXPECT_THROW(netrusov_content(line_grid(3), PointSet{}, Gauge::power(0.5), 1.0, 1.0), Error);
}

TEST(NetrusovContent, GreedyNeverBelowExact) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = random_cloud(8, seed, 2, 1.0, true);
        Rng rng(seed);
        const auto set = detail::random_subset(rng, 8, 0.5);
        const double theta = rng.uniform(0.3, 2.0);
        const auto gauge = Gauge::power(rng.uniform(0.2, 1.5));
        const double exact = netrusov_content(s, set, gauge, theta, 0.8, ContentMethod::exact).value;
        const double greedy = netrusov_content(s, set, gauge, theta, 0.8, ContentMethod::greedy).value;
        EXPECT_GE(greedy, exact) << seed;
    }
}

TEST(HausdorffContent, SingleBallCost) {
    const auto s = line_grid(4);
    EXPECT_DOUBLE_EQ(hausdorff_cost(s, balls({{1, 1.5}}), 0.5), 3.0 / std::sqrt(1.5));
}

TEST(HausdorffContent, BelowNetrusovWithSmallTheta) {
    const auto s = cantor(2);
    Rng rng(1);
    for (int t = 0; t < 100; ++t) {
        const auto cov = detail::random_covering(s, rng);
        const double d = rng.uniform(0.2, 1.0);
        EXPECT_LE(hausdorff_cost(s, cov, d), covering_cost(s, cov, Gauge::power(d), rng.uniform(0.2, 1.0)) * (1 + 1e-12));
    }
}

TEST(HausdorffContent, OptimalValueIsCostOfCovering) {
    const auto s = line_grid(6);
    const auto r = hausdorff_content(s, PointSet{0, 2, 3}, 0.5, 2.0, ContentMethod::exact);
    EXPECT_TRUE(covers(s, r.covering, PointSet{0, 2, 3}));
    EXPECT_EQ(r.value, hausdorff_cost(s, r.covering, 0.5));
}

TEST(ContentSuite, PassesOnLineGridAndCantor) {
    EXPECT_TRUE(check_content_properties(line_grid(8), 100, 1).passed());
    EXPECT_TRUE(check_content_properties(cantor(2), 100, 2).passed());
}
