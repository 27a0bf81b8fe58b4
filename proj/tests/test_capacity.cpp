#include <gtest/gtest.h>

#include <cmath>

#include "besov/capacity.hpp"
#include "besov/capacity_suite.hpp"
#include "besov/generate.hpp"

using namespace besov;

namespace {

MetricMeasureSpace two_point(double d) { return MetricMeasureSpace({0.0, d, d, 0.0}, {1.0, 1.0}); }

BesovParams params(double s, double p, double q) {
    BesovParams out;
    out.s = s;
    out.p = p;
    out.q = q;
    out.s_prime = s / 2.0;
    return out;
}

}  // namespace

TEST(Capacity, TwoPointLinearClosedForm) {
    const auto r = capacity(two_point(1.9), PointSet{0}, params(0.5, 1, 1));
    EXPECT_NEAR(r.value, 1.0 + 1.0 / std::sqrt(1.9), 1e-9);
    EXPECT_NEAR(r.minimizer_u[0], 1.0, 1e-12);
    EXPECT_NEAR(r.minimizer_u[1], 0.0, 1e-9);
}

TEST(Capacity, TwoPointFlatObjective) {
    EXPECT_NEAR(capacity(two_point(1.0), PointSet{0}, params(0.5, 1, 1)).value, 2.0, 1e-9);
}

TEST(Capacity, TwoPointQuadraticFrozen) {
    // (|u|_2 + |g|_2)^2 minimized over u(b) = t in [0, 1]; independent 1-D search below.
    const double d = 1.9;
    auto objective = [&](double t) {
        const double q = (1.0 - t) / std::sqrt(d);
        return std::pow(std::sqrt(1.0 + t * t) + std::sqrt(q * q / 2.0), 2.0);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        (objective(a) < objective(b) ? hi : lo) = objective(a) < objective(b) ? b : a;
    }
    const double expected = objective((lo + hi) / 2.0);
    EXPECT_NEAR(expected, 1.880694765, 1e-8);
    EXPECT_NEAR(capacity(two_point(d), PointSet{0}, params(0.5, 2, 2)).value, expected, 1e-6 * expected);
}

TEST(Capacity, WholeSpaceIsTotalMeasure) {
    for (const auto& space : {line_grid(6), cantor(2), random_cloud(7, 3, 2, 1.0, true)}) {
        for (const auto& pr : {params(0.5, 1, 1), params(0.3, 2, 2), params(0.7, 1, 2), params(0.5, 2, kInfinity)}) {
            const auto r = capacity(space, space.all_points(), pr);
            EXPECT_NEAR(r.value, space.total_measure(), 1e-6 * space.total_measure());
        }
    }
}

TEST(Capacity, MinimizerIsAdmissibleAndValueRecomputes) {
    const auto s = line_grid(6);
    const PointSet set{1, 4};
    for (const auto& pr : {params(0.5, 1, 1), params(0.5, 2, 2), params(0.5, 1, 2)}) {
        const auto r = capacity(s, set, pr);
        EXPECT_TRUE(is_admissible(r.minimizer_u, set));
        EXPECT_EQ(r.value, evaluate_admissible(s, r.minimizer_u, pr).value);
        EXPECT_GE(r.value, s.measure(set));
    }
}

TEST(Capacity, EmptySet) {
    const auto s = line_grid(3);
    EXPECT_THROW(capacity(s, PointSet{}, params(0.5, 1, 1)), Error);
    SolverConfig cfg;
    cfg.allow_empty = true;
    EXPECT_EQ(capacity(s, PointSet{}, params(0.5, 1, 1), cfg).value, 0.0);
}

TEST(Capacity, RejectsBadParams) {
    const auto s = line_grid(3);
    EXPECT_THROW(capacity(s, PointSet{0}, params(-0.5, 1, 1)), Error);
    EXPECT_THROW(capacity(s, PointSet{0}, params(0.5, 0, 1)), Error);
    EXPECT_THROW(capacity(s, PointSet{7}, params(0.5, 1, 1)), Error);
}

TEST(Capacity, MonotoneInSet) {
    const auto s = cantor(2);
    const auto pr = params(0.5, 1, 1);
    const double small = capacity(s, PointSet{0}, pr).value;
    const double mid = capacity(s, PointSet{0, 1}, pr).value;
    const double big = capacity(s, PointSet{0, 1, 5}, pr).value;
    EXPECT_LE(small, mid * (1 + 1e-9));
    EXPECT_LE(mid, big * (1 + 1e-9));
}

TEST(Cutoff, InsideAndHalfway) {
    const auto s = line_grid(4);
    Covering cov;
    cov.balls.push_back({0, 0.5});
    const auto u = cutoff_admissible(s, cov, 1);
    EXPECT_EQ(u[0], 1.0);
    EXPECT_EQ(u[1], 0.0);
    const auto gapped = graph_metric(3, {{0, 1, 0.875}, {1, 2, 0.5}});
    Covering unit;
    unit.balls.push_back({0, 1.0});
    const auto half = cutoff_admissible(gapped, unit, 0);
    EXPECT_EQ(half[0], 1.0);
    EXPECT_EQ(half[1], 1.0);
    EXPECT_EQ(half[2], 0.5);
    EXPECT_EQ(cutoff_admissible(gapped, unit, 3), ScalarField(3, 0.0));
}

TEST(Cutoff, LipschitzAndAdmissible) {
    const auto s = line_grid(4);
    Covering cov;
    cov.balls.push_back({1, 0.75});
    const int cls = radius_class(0.75);
    const auto u = cutoff_admissible(s, cov, cls);
    EXPECT_TRUE(is_admissible(u, PointSet{1}));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_LE(std::abs(u[i] - u[j]), std::ldexp(1.0, cls) * s.d(i, j) + 1e-15);
        }
    }
    const auto r = capacity(s, PointSet{1}, params(0.5, 1, 1));
    EXPECT_LE(r.value, evaluate_admissible(s, u, params(0.5, 1, 1)).value * (1 + 1e-12));
}

TEST(CapacitySuite, PassesOnLineGrid) {
    const auto s = line_grid(8);
    for (const auto& pr : {params(0.5, 1, 1), params(0.5, 2, 2), params(0.5, 1, 2)}) {
        EXPECT_TRUE(check_capacity_properties(s, pr, 4, 1).passed());
    }
}
