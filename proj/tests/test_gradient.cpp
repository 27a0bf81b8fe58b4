#include <gtest/gtest.h>

#include <cmath>

#include "besov/generate.hpp"
#include "besov/gradient.hpp"
#include "besov/gradient_suite.hpp"
#include "besov/median_suite.hpp"

using namespace besov;

namespace {

MetricMeasureSpace two_point(double d, double w0 = 1.0, double w1 = 1.0) {
    return MetricMeasureSpace({0.0, d, d, 0.0}, {w0, w1});
}

GradientSequence single_scale(std::size_t n, int k, ScalarField f) {
    GradientSequence g(n);
    g.set(k, std::move(f));
    return g;
}

}  // namespace

TEST(CheckGradient, ConstantWithZeroGradient) {
    const auto s = line_grid(5);
    EXPECT_TRUE(check_gradient(s, std::vector<double>(5, 3.0), GradientSequence(5), 0.5).empty());
}

TEST(CheckGradient, SinglePairFeasible) {
    const auto s = two_point(1.0);
    const std::vector<double> u{1, 0};
    for (const double sv : {0.1, 0.5, 0.9}) {
        EXPECT_TRUE(check_gradient(s, u, single_scale(2, -1, {0.5, 0.5}), sv).empty());
    }
}

TEST(CheckGradient, SinglePairViolationSlack) {
    const auto s = two_point(1.0);
    const auto v = check_gradient(s, std::vector<double>{1, 0}, single_scale(2, -1, {0.4, 0.0}), 0.5);
    ASSERT_EQ(v.size(), 1U);
    EXPECT_EQ(v[0].k, -1);
    EXPECT_NEAR(v[0].slack, 0.6, 1e-15);
}

TEST(CanonicalGradient, ConstantIsZero) {
    const auto s = cantor(2);
    EXPECT_TRUE(canonical_gradient(s, std::vector<double>(s.size(), 1.0), 0.5).empty());
}

TEST(CanonicalGradient, SinglePair) {
    const auto g = canonical_gradient(two_point(1.0), std::vector<double>{1, 0}, 0.5);
    ASSERT_NE(g.find(-1), nullptr);
    EXPECT_DOUBLE_EQ(g.value(-1, 0), 0.5);
    EXPECT_DOUBLE_EQ(g.value(-1, 1), 0.5);
    EXPECT_EQ(g.scales().size(), 1U);
}

TEST(CanonicalGradient, FeasibleOnAlternatingLine) {
    const auto s = line_grid(4);
    const std::vector<double> u{0, 1, 0, 1};
    EXPECT_TRUE(check_gradient(s, u, canonical_gradient(s, u, 0.5), 0.5).empty());
}

TEST(MinimalGradient, NoPairsAtScale) {
    const auto mg = minimal_gradient(line_grid(4), std::vector<double>{0, 1, 2, 3}, 0.5, 2.0, 3);
    EXPECT_EQ(mg.objective, 0.0);
    for (const auto v : mg.field) EXPECT_EQ(v, 0.0);
}

TEST(MinimalGradient, OnePairLinearPutsMassOnLighterPoint) {
    const auto s = two_point(1.0, 0.5, 2.0);
    const auto mg = minimal_gradient(s, std::vector<double>{1, 0}, 0.5, 1.0, -1);
    EXPECT_NEAR(mg.field[0], 1.0, 1e-12);
    EXPECT_NEAR(mg.field[1], 0.0, 1e-12);
    EXPECT_NEAR(mg.objective, 0.5, 1e-12);
}

TEST(MinimalGradient, OnePairQuadraticSplitsEvenly) {
    const auto s = two_point(0.25);
    const double q = 3.0 / std::sqrt(0.25);
    const auto mg = minimal_gradient(s, std::vector<double>{3, 0}, 0.5, 2.0, 1);
    EXPECT_NEAR(mg.field[0], q / 2.0, 1e-9);
    EXPECT_NEAR(mg.field[1], q / 2.0, 1e-9);
    EXPECT_NEAR(mg.objective, q * q / 2.0, 1e-9);
}

TEST(MinimalGradient, OnePairQuadraticWeightedClosedForm) {
    // minimize a t^2 + b (Q - t)^2
    const auto s = two_point(1.0, 1.0, 3.0);
    const auto mg = minimal_gradient(s, std::vector<double>{2, 0}, 0.5, 2.0, -1);
    EXPECT_NEAR(mg.field[0], 2.0 * 3.0 / 4.0, 1e-9);
    EXPECT_NEAR(mg.objective, 1.0 * 3.0 / 4.0 * 4.0, 1e-9);
}

TEST(MinimalGradient, FeasibleAndBelowCanonical) {
    const auto s = random_cloud(10, 17, 2, 1.0, true);
    Rng rng(2);
    for (const double p : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const auto u = detail::uniform_field(rng, s.size());
        const auto g = minimal_gradient_sequence(s, u, 0.4, p);
        EXPECT_TRUE(check_gradient(s, u, g, 0.4).empty()) << p;
        const auto c = canonical_gradient(s, u, 0.4);
        for (const auto& [k, field] : c.scales()) {
            const auto* m = g.find(k);
            const double mine = m ? std::pow(lp_norm(s, *m, p), p) : 0.0;
            EXPECT_LE(mine, std::pow(lp_norm(s, field, p), p) * (1 + 1e-9)) << p << " " << k;
        }
    }
}

TEST(MixedNorm, Zero) { EXPECT_EQ(mixed_norm(line_grid(3), GradientSequence(3), 2.0, 2.0), 0.0); }

TEST(MixedNorm, SingleTerm) {
    EXPECT_NEAR(mixed_norm(two_point(1.0), single_scale(2, 0, {1, 1}), 2.0, 7.0), std::sqrt(2.0), 1e-15);
}

TEST(MixedNorm, PythagoreanPair) {
    const MetricMeasureSpace s({0.0}, {1.0});
    GradientSequence g(1);
    g.set(0, {3.0});
    g.set(1, {4.0});
    EXPECT_NEAR(mixed_norm(s, g, 1.0, 2.0), 5.0, 1e-15);
    EXPECT_NEAR(mixed_norm(s, g, 1.0, kInfinity), 4.0, 1e-15);
}

TEST(BesovNorm, ConstantFunction) {
    const auto s = cantor(2);
    BesovParams p;
    p.p = 2.0;
    const auto n = besov_norm(s, std::vector<double>(s.size(), 1.0), p, GradientMode::minimal);
    EXPECT_NEAR(n.lp_part, 1.0, 1e-15);
    EXPECT_EQ(n.grad_part, 0.0);
}

TEST(BesovNorm, TwoPointClosedForm) {
    const auto s = two_point(1.0);
    BesovParams p;
    for (const auto mode : {GradientMode::minimal, GradientMode::canonical}) {
        const auto n = besov_norm(s, std::vector<double>{1, 0}, p, mode);
        EXPECT_NEAR(n.lp_part, 1.0, 1e-12);
        EXPECT_NEAR(n.grad_part, 1.0, 1e-12);
        EXPECT_NEAR(n.total, 2.0, 1e-12);
    }
}

TEST(MaxGradient, ConstantPartnerGivesOriginal) {
    const auto s = line_grid(6);
    const std::vector<double> u{0, 2, -1, 3, 0.5, 1};
    const auto gu = canonical_gradient(s, u, 0.5);
    const auto g = max_gradient(gu, GradientSequence(6));
    EXPECT_EQ(g.scales(), gu.scales());
    std::vector<double> m(6);
    for (std::size_t x = 0; x < 6; ++x) m[x] = std::max(u[x], 1.0);
    EXPECT_TRUE(check_gradient(s, m, g, 0.5).empty());
}

TEST(MaxGradient, MaxAndMinFeasible) {
    const auto s = random_cloud(8, 5);
    Rng rng(9);
    for (int t = 0; t < 50; ++t) {
        const auto u = detail::uniform_field(rng, 8);
        const auto v = detail::uniform_field(rng, 8);
        const auto g = max_gradient(canonical_gradient(s, u, 0.7), canonical_gradient(s, v, 0.7));
        std::vector<double> hi(8), lo(8);
        for (std::size_t x = 0; x < 8; ++x) {
            hi[x] = std::max(u[x], v[x]);
            lo[x] = std::min(u[x], v[x]);
        }
        EXPECT_TRUE(check_gradient(s, hi, g, 0.7).empty());
        EXPECT_TRUE(check_gradient(s, lo, g, 0.7).empty());
    }
}

TEST(SupGradient, SingleElementIsIdentity) {
    const auto s = line_grid(4);
    const auto g = canonical_gradient(s, std::vector<double>{0, 1, 0, 1}, 0.5);
    EXPECT_EQ(sup_gradient(std::vector<GradientSequence>{g}).scales(), g.scales());
}

TEST(DerivedGradient, ZeroStaysZero) {
    EXPECT_TRUE(derived_poincare_gradient(line_grid(4), GradientSequence(4), BesovParams{}).empty());
}

TEST(DerivedGradient, SingleScaleClosedForm) {
    const auto s = line_grid(8, 1.0 / 7.0);
    BesovParams params;
    params.p = 2.0;
    params.s_prime = 0.3;
    const int j0 = 1;
    const ScalarField h{1, 2, 0, 0.5, 3, 0, 1, 1};
    const auto g = derived_poincare_gradient(s, single_scale(8, j0, h), params);
    for (const auto& [k, field] : g.scales()) {
        ASSERT_LE(k, j0 + 2);
        const double coef = std::exp2((k - j0) * params.s_prime * params.p_tilde() / params.p);
        for (std::size_t x = 0; x < 8; ++x) EXPECT_NEAR(field[x], coef * h[x], 1e-12 * (1 + h[x]));
    }
    EXPECT_NE(g.find(j0 + 2), nullptr);
    EXPECT_EQ(g.find(j0 + 3), nullptr);
}

TEST(DerivedGradient, DominatesInput) {
    const auto s = random_cloud(8, 21);
    Rng rng(4);
    BesovParams params;
    params.p = 1.5;
    const auto h = canonical_gradient(s, detail::uniform_field(rng, 8), 0.5);
    const auto g = derived_poincare_gradient(s, h, params);
    for (const auto& [k, field] : h.scales()) {
        for (std::size_t x = 0; x < 8; ++x) EXPECT_GE(g.value(k, x), field[x] * (1 - 1e-12));
    }
}

TEST(Leibniz, ZeroCutoff) {
    const auto s = line_grid(4);
    const std::vector<double> u{1, 2, 3, 4};
    const auto out = leibniz_gradients(s, u, canonical_gradient(s, u, 0.5), std::vector<double>(4, 0.0), 0.0, 0.5);
    EXPECT_TRUE(out.rho.empty());
    EXPECT_TRUE(out.h.empty());
}

TEST(Leibniz, UnitCutoffFeasible) {
    const auto s = cantor(2);
    Rng rng(8);
    const auto u = detail::uniform_field(rng, s.size());
    const auto gu = canonical_gradient(s, u, 0.5);
    const auto out = leibniz_gradients(s, u, gu, std::vector<double>(s.size(), 1.0), 0.0, 0.5);
    EXPECT_TRUE(check_gradient(s, u, out.rho, 0.5).empty());
    EXPECT_TRUE(check_gradient(s, u, out.h, 0.5).empty());
    for (const auto& [k, field] : out.h.scales()) {
        for (std::size_t x = 0; x < s.size(); ++x) {
            EXPECT_NEAR(field[x], gu.value(k, x) + std::exp2(0.5 * k + 2) * std::abs(u[x]), 1e-12 * (1 + field[x]));
        }
    }
}

TEST(Leibniz, RejectsNonLipschitzCutoff) {
    const auto s = line_grid(3);
    EXPECT_THROW(leibniz_gradients(s, std::vector<double>(3, 1.0), GradientSequence(3), std::vector<double>{1, 0, 0}, 0.5, 0.5),
                 Error);
}

TEST(LipschitzBound, ZeroFunction) {
    const auto s = line_grid(2);
    const auto b = lipschitz_norm_bound(s, std::vector<double>{0, 0}, 1.0, PointSet{0}, BesovParams{});
    EXPECT_EQ(b.lhs, 0.0);
    EXPECT_DOUBLE_EQ(b.rhs, 2.0);
    EXPECT_EQ(b.ratio(), 0.0);
}

TEST(LipschitzBound, TwoPointClosedForm) {
    const auto b = lipschitz_norm_bound(two_point(1.0), std::vector<double>{1, 0}, 1.0, PointSet{0}, BesovParams{});
    EXPECT_NEAR(b.lhs, 2.0, 1e-12);
    EXPECT_DOUBLE_EQ(b.rhs, 4.0);
    EXPECT_NEAR(b.ratio(), 0.5, 1e-12);
}

TEST(Summing, SingleSpike) {
    const auto sides = summing_lemma_sides(2.0, 1.0, std::vector<double>{1.0});
    EXPECT_NEAR(sides.lhs, 3.0, 1e-12);
    EXPECT_EQ(sides.rhs, 1.0);
    EXPECT_TRUE(sides.holds());
    EXPECT_GE(summing_constant(2.0, 1.0), 3.0);
}

TEST(Summing, ZeroSequence) {
    const auto sides = summing_lemma_sides(2.0, 1.0, std::vector<double>(4, 0.0));
    EXPECT_EQ(sides.lhs, 0.0);
    EXPECT_EQ(sides.rhs, 0.0);
}

TEST(Summing, ExplicitConstantHolds) {
    Rng rng(6);
    for (int t = 0; t < 300; ++t) {
        std::vector<double> c(static_cast<std::size_t>(rng.integer(1, 10)));
        for (auto& v : c) v = rng.uniform(0.0, 5.0);
        EXPECT_TRUE(summing_lemma_sides(2.0, 0.5, c).holds());
    }
}

TEST(GradientSuites, PassOnLineGrid) {
    const auto s = line_grid(8);
    BesovParams params;
    EXPECT_TRUE(check_gradient_constructions(s, params, 100, 1).passed());
    EXPECT_TRUE(check_sequence_inequalities(100, 1).passed());
    EXPECT_TRUE(check_norm_inequalities(s, params, 100, 1).passed());
}
