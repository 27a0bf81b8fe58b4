#include <gtest/gtest.h>

#include <cmath>

#include "besov/generate.hpp"
#include "besov/space.hpp"

using namespace besov;

namespace {

MetricMeasureSpace two_point(double d, double w0 = 1.0, double w1 = 1.0) {
    return MetricMeasureSpace({0.0, d, d, 0.0}, {w0, w1});
}

}  // namespace

TEST(Validate, AcceptsTwoPointSpace) {
    EXPECT_TRUE(validate(std::vector<double>{0, 1, 1, 0}, std::vector<double>{1, 1}).empty());
}

TEST(Validate, ReportsAsymmetry) {
    const auto v = validate(std::vector<double>{0, 1, 2, 0}, std::vector<double>{1, 1});
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v.front().axiom, "symmetry");
    EXPECT_EQ(v.front().indices, (std::vector<std::size_t>{0, 1}));
}

TEST(Validate, ReportsTriangleFailure) {
    const std::vector<double> dist{0, 1, 5, 1, 0, 1, 5, 1, 0};
    const auto v = validate(dist, std::vector<double>{1, 1, 1});
    ASSERT_EQ(v.size(), 1U);
    EXPECT_EQ(v.front().axiom, "triangle");
    EXPECT_DOUBLE_EQ(v.front().amount, 3.0);
}

TEST(Validate, ReportsNonpositiveWeightAndDistance) {
    const auto v = validate(std::vector<double>{0, 0, 0, 0}, std::vector<double>{1, 0});
    bool positivity = false;
    bool weight = false;
    for (const auto& x : v) {
        positivity = positivity || x.axiom == "positivity";
        weight = weight || x.axiom == "weight";
    }
    EXPECT_TRUE(positivity);
    EXPECT_TRUE(weight);
}

TEST(Validate, ConstructorRejectsInvalidData) {
    EXPECT_THROW(MetricMeasureSpace({0, 1, 2, 0}, {1, 1}), Error);
    EXPECT_THROW(MetricMeasureSpace({0, 1, 1, 0}, {1, -1}), Error);
}

TEST(PairScale, DyadicCells) {
    EXPECT_EQ(dyadic_scale(1.0), -1);
    EXPECT_EQ(dyadic_scale(0.1), 3);
    EXPECT_EQ(dyadic_scale(0.5), 0);
    EXPECT_EQ(dyadic_scale(0.0625), 3);
    EXPECT_EQ(dyadic_scale(0.124999), 3);
    EXPECT_EQ(dyadic_scale(2.0), -2);
    EXPECT_EQ(two_point(0.1).pair_scale(0, 1), 3);
}

TEST(PairScale, CellInequalitiesOverManyDistances) {
    for (double d = 1e-3; d < 1e3; d *= 1.0173) {
        const int k = dyadic_scale(d);
        EXPECT_LE(std::exp2(-k - 1), d) << d;
        EXPECT_LT(d, std::exp2(-k)) << d;
    }
}

TEST(PairScale, RadiusClassIsScalePlusOne) {
    EXPECT_EQ(radius_class(1.0), 0);
    EXPECT_EQ(radius_class(0.3), 2);
}

TEST(Space, BallsAreOpen) {
    const auto s = line_grid(4);
    EXPECT_EQ(s.members(1, 1.0), (PointSet{1}));
    EXPECT_EQ(s.members(1, 1.5), (PointSet{0, 1, 2}));
    EXPECT_DOUBLE_EQ(s.ball_measure(0, 2.0), 2.0);
}

TEST(Space, PairsBucketedByScale) {
    const auto s = line_grid(4);
    EXPECT_EQ(s.pairs_at(-1).size(), 3U);
    EXPECT_EQ(s.pairs_at(-2).size(), 3U);
    EXPECT_TRUE(s.pairs_at(0).empty());
    EXPECT_EQ(s.active_scales(), (std::vector<int>{-2, -1}));
}

TEST(Doubling, SinglePointIsOne) { EXPECT_DOUBLE_EQ(doubling_constant(MetricMeasureSpace({0.0}, {1.0})), 1.0); }

TEST(Doubling, TwoPointsIsTwo) { EXPECT_DOUBLE_EQ(doubling_constant(two_point(1.0)), 2.0); }

TEST(Doubling, LineGridsAtMostFour) {
    for (std::size_t n = 3; n <= 20; ++n) EXPECT_LE(doubling_constant(line_grid(n)), 4.0) << n;
}

TEST(Doubling, MatchesEnumerationOverRadii) {
    const auto s = random_cloud(9, 3, 2, 1.0, true);
    double worst = 1.0;
    for (std::size_t x = 0; x < s.size(); ++x) {
        for (std::size_t y = 0; y < s.size(); ++y) {
            for (const double r : {s.d(x, y), s.d(x, y) / 2.0}) {
                for (const double eps : {1e-9, -1e-9}) {
                    const double rr = r + eps;
                    if (rr <= 0.0) continue;
                    const double inner = s.ball_measure(x, rr);
                    if (inner > 0.0) worst = std::max(worst, s.ball_measure(x, 2.0 * rr) / inner);
                }
            }
        }
    }
    EXPECT_NEAR(doubling_constant(s), worst, 1e-12);
}

TEST(Generate, LineGrid) {
    GeneratorParams p;
    p.n = 4;
    const auto s = generate("line-grid", p, 0);
    ASSERT_EQ(s.size(), 4U);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(s.weight(i), 1.0);
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_DOUBLE_EQ(s.d(i, j), std::abs(double(i) - double(j)));
        }
    }
}

TEST(Generate, CantorLevelOne) {
    const auto s = cantor(1);
    ASSERT_EQ(s.size(), 4U);
    EXPECT_NEAR(s.total_measure(), 1.0, 1e-15);
    EXPECT_NEAR(s.d(0, 1), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.d(0, 3), 1.0, 1e-15);
    EXPECT_NEAR(s.weight(2), 0.25, 1e-15);
}

TEST(Generate, CantorLevelSizes) {
    EXPECT_EQ(cantor(3).size(), 16U);
    EXPECT_EQ(cantor(4).size(), 32U);
    EXPECT_NEAR(cantor(4).total_measure(), 1.0, 1e-14);
}

TEST(Generate, RandomCloudDeterministic) {
    GeneratorParams p;
    p.n = 16;
    const auto a = generate("random-cloud", p, 7);
    const auto b = generate("random-cloud", p, 7);
    const auto c = generate("random-cloud", p, 8);
    EXPECT_TRUE(std::ranges::equal(a.distances(), b.distances()));
    EXPECT_TRUE(std::ranges::equal(a.weights(), b.weights()));
    EXPECT_FALSE(std::ranges::equal(a.distances(), c.distances()));
}

TEST(Generate, GraphMetricShortestPaths) {
    const auto s = graph_metric(3, {{0, 1, 1.0}, {1, 2, 2.0}});
    EXPECT_DOUBLE_EQ(s.d(0, 2), 3.0);
    EXPECT_THROW(graph_metric(3, {{0, 1, 1.0}}), Error);
}

TEST(Generate, SquareGrid) {
    const auto s = square_grid(3);
    EXPECT_EQ(s.size(), 9U);
    EXPECT_NEAR(s.diameter(), std::sqrt(8.0), 1e-15);
}

TEST(Generate, UnknownKindThrows) { EXPECT_THROW(generate("torus", {}, 0), Error); }

TEST(Space, ScaledMeasure) {
    const auto s = line_grid(3).scaled_measure(0.25);
    EXPECT_DOUBLE_EQ(s.total_measure(), 0.75);
}
