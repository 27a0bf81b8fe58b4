#pragma once

#include <string>
#include <vector>

#include "besov/gradient.hpp"
#include "besov/median.hpp"
#include "besov/median_suite.hpp"
#include "besov/report.hpp"

namespace besov {

namespace detail {

inline ScalarField uniform_field(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    ScalarField u(n);
    for (auto& v : u) v = rng.uniform(lo, hi);
    return u;
}

inline std::string describe_violation(const GradientViolation& v) {
    return "pair (" + std::to_string(v.i) + "," + std::to_string(v.j) + ") scale " + std::to_string(v.k) + " slack " +
           format_double(v.slack);
}

inline void record_feasible(Check& check, const MetricMeasureSpace& space, const ScalarField& u, const GradientSequence& g,
                            double s) {
    const auto bad = check_gradient(space, u, g, s);
    check.record(bad.empty(), [&] { return "u=" + describe_field(u) + " " + describe_violation(bad.front()); });
}

/// A bump max(0, amp (1 - d(x, y)/rho)) around a random point, with its Lipschitz constant.
inline std::pair<ScalarField, double> random_bump(const MetricMeasureSpace& space, Rng& rng) {
    const auto y = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(space.size()) - 1));
    const double rho = std::max(space.diameter(), 1e-300) * rng.uniform(0.1, 1.0);
    const double amp = rng.uniform(0.5, 2.0);
    ScalarField phi(space.size());
    for (std::size_t x = 0; x < space.size(); ++x) phi[x] = std::max(0.0, amp * (1.0 - space.d(x, y) / rho));
    return {phi, amp / rho};
}

}  // namespace detail

/// Every gradient construction yields a fractional s-gradient of its target function.
inline SuiteReport check_gradient_constructions(const MetricMeasureSpace& space, const BesovParams& params,
                                                std::size_t trials, std::uint64_t seed) {
    params.validate();
    SuiteReport rep{"gradient", {}};
    Rng rng(seed);
    const std::size_t n = space.size();
    const double s = params.s;
    auto& canon = rep.add("canonical_feasible", "the canonical gradient is a fractional s-gradient of u");
    auto& minimal = rep.add("minimal_feasible", "per-scale minimal gradients are fractional s-gradients of u");
    auto& minimal_le = rep.add("minimal_below_canonical", "minimal per-scale cost <= canonical per-scale cost (p >= 1)");
    auto& lattice = rep.add("max_min_feasible", "max(g_u, g_v) is a gradient of max(u, v) and of min(u, v)");
    auto& sup = rep.add("sup_feasible", "the pointwise sup of gradients is a gradient of sup_i u_i");
    auto& derived = rep.add("derived_feasible", "the derived gradient from h is again a gradient of u");
    auto& derived_norm = rep.add("derived_norm_bound", "||derived||_{l^q(L^p)} <= c ||h||_{l^q(L^p)} with the explicit c");
    auto& rho = rep.add("product_rho_feasible", "rho_k is a gradient of u * phi");
    auto& prod_h = rep.add("product_h_feasible", "h_k is a gradient of u * phi");
    const double c_derived = params.q == kInfinity ? kInfinity : derived_gradient_norm_constant(params);
    derived_norm.metrics["explicit_constant"] = c_derived;

    for (std::size_t t = 0; t < trials; ++t) {
        const auto u = detail::uniform_field(rng, n);
        const auto gu = canonical_gradient(space, u, s);
        detail::record_feasible(canon, space, u, gu, s);

        const double p = std::array<double, 5>{0.5, 1.0, 1.5, 2.0, 3.0}[static_cast<std::size_t>(rng.integer(0, 4))];
        const auto gm = minimal_gradient_sequence(space, u, s, p);
        detail::record_feasible(minimal, space, u, gm, s);
        if (p >= 1.0) {
            bool ok = true;
            for (const auto& [k, field] : gu.scales()) {
                double c_cost = 0.0;
                double m_cost = 0.0;
                for (std::size_t x = 0; x < n; ++x) {
                    c_cost += space.weight(x) * pow_nonneg(field[x], p);
                    m_cost += space.weight(x) * pow_nonneg(gm.value(k, x), p);
                }
                if (m_cost > c_cost * (1.0 + 1e-9)) ok = false;
            }
            minimal_le.record(ok, [&] { return "u=" + describe_field(u) + " p=" + format_double(p); });
        }

        const auto v = detail::uniform_field(rng, n);
        const auto gv = canonical_gradient(space, v, s);
        const auto gmax = max_gradient(gu, gv);
        ScalarField hi(n);
        ScalarField lo(n);
        for (std::size_t x = 0; x < n; ++x) {
            hi[x] = std::max(u[x], v[x]);
            lo[x] = std::min(u[x], v[x]);
        }
        const auto bad_hi = check_gradient(space, hi, gmax, s);
        const auto bad_lo = check_gradient(space, lo, gmax, s);
        lattice.record(bad_hi.empty() && bad_lo.empty(), [&] { return "u=" + describe_field(u) + " v=" + describe_field(v); });

        std::vector<ScalarField> family{u, v, detail::uniform_field(rng, n)};
        std::vector<GradientSequence> grads;
        ScalarField top(n, -kInfinity);
        for (const auto& f : family) {
            grads.push_back(minimal_gradient_sequence(space, f, s, 1.0));
            for (std::size_t x = 0; x < n; ++x) top[x] = std::max(top[x], f[x]);
        }
        detail::record_feasible(sup, space, top, sup_gradient(grads), s);

        const auto g_derived = derived_poincare_gradient(space, gu, params);
        detail::record_feasible(derived, space, u, g_derived, s);
        if (params.q != kInfinity) {
            const double lhs = mixed_norm(space, g_derived, params.p, params.q);
            const double rhs = mixed_norm(space, gu, params.p, params.q);
            if (rhs > 0.0) derived_norm.max_metric("max_ratio", lhs / rhs);
            derived_norm.record(lhs <= c_derived * rhs * (1.0 + 1e-12), [&] { return "u=" + describe_field(u); });
        }

        if (s < 1.0) {
            const auto [phi, lip] = detail::random_bump(space, rng);
            const auto lg = leibniz_gradients(space, u, gu, phi, lip, s);
            ScalarField prod(n);
            for (std::size_t x = 0; x < n; ++x) prod[x] = u[x] * phi[x];
            detail::record_feasible(rho, space, prod, lg.rho, s);
            detail::record_feasible(prod_h, space, prod, lg.h, s);
        }
    }
    return rep;
}

/// Sequence inequalities: sum a_i <= (sum a_i^beta)^{1/beta} for beta <= 1, and the summing inequality.
inline SuiteReport check_sequence_inequalities(std::size_t trials, std::uint64_t seed) {
    SuiteReport rep{"sequences", {}};
    Rng rng(seed);
    auto& elementary = rep.add("elementary", "sum a_i <= (sum a_i^beta)^{1/beta} for 0 < beta <= 1");
    auto& summing = rep.add("summing", "sum_k (sum_j a^{-|j-k|} c_j)^b <= C(a, b) sum_j c_j^b");
    for (std::size_t t = 0; t < trials; ++t) {
        const auto len = static_cast<std::size_t>(rng.integer(1, 12));
        std::vector<double> a(len);
        for (auto& v : a) v = rng.coin(0.2) ? 0.0 : rng.uniform(0.0, 10.0);
        const double beta = rng.uniform(0.05, 1.0);
        double lhs = 0.0;
        double rhs = 0.0;
        for (const double v : a) {
            lhs += v;
            rhs += pow_nonneg(v, beta);
        }
        rhs = pow_nonneg(rhs, 1.0 / beta);
        elementary.record(lhs <= rhs * (1.0 + 1e-12), [&] { return describe_field(a) + " beta=" + format_double(beta); });

        const double base = rng.uniform(1.1, 4.0);
        const double b = std::array<double, 5>{0.25, 0.5, 1.0, 2.0, 3.0}[static_cast<std::size_t>(rng.integer(0, 4))];
        const auto sides = summing_lemma_sides(base, b, a);
        if (sides.rhs > 0.0) summing.max_metric("max_ratio_over_constant", sides.lhs / (sides.constant * sides.rhs));
        summing.record(sides.holds(), [&] {
            return describe_field(a) + " a=" + format_double(base) + " b=" + format_double(b) + " lhs=" +
                   format_double(sides.lhs) + " C*rhs=" + format_double(sides.constant * sides.rhs);
        });
    }
    return rep;
}

/**
 * Largest ratio
 *   inf_c m_{|u-c|}(B(x, 2^{-k})) / ( 2^{-ks} (avg_{B(x, 2^{-k+1})} g_k^p)^{1/p} )
 * over all points, active scales and `samples` random u, where g is the derived
 * gradient of the canonical gradient of u. A zero denominator must come with a
 * zero numerator; such terms are counted as failures otherwise.
 */
struct PoincareEstimate {
    double constant = 0.0;
    std::size_t terms = 0;
    std::size_t zero_denominator_failures = 0;
};

inline PoincareEstimate poincare_constant(const MetricMeasureSpace& space, const BesovParams& params, std::size_t samples,
                                          std::uint64_t seed) {
    params.validate();
    Rng rng(seed);
    PoincareEstimate est;
    const std::size_t n = space.size();
    for (std::size_t t = 0; t < samples; ++t) {
        const auto u = detail::uniform_field(rng, n);
        const auto h = canonical_gradient(space, u, params.s);
        const auto g = derived_poincare_gradient(space, h, params);
        for (const auto k : space.active_scales()) {
            for (std::size_t x = 0; x < n; ++x) {
                const auto inner = space.members(x, std::ldexp(1.0, -k));
                const double lhs = min_median_deviation(space, u, inner, params.gamma);
                const auto outer = space.members(x, std::ldexp(1.0, -k + 1));
                double avg = 0.0;
                for (const auto y : outer) avg += space.weight(y) * pow_nonneg(g.value(k, y), params.p);
                avg /= space.measure(outer);
                const double rhs = std::exp2(-static_cast<double>(k) * params.s) * pow_nonneg(avg, 1.0 / params.p);
                ++est.terms;
                if (rhs > 0.0) {
                    est.constant = std::max(est.constant, lhs / rhs);
                } else if (lhs > 0.0) {
                    ++est.zero_denominator_failures;
                }
            }
        }
    }
    return est;
}

/// Besov norm identities, the median Poincare constant and the Lipschitz cutoff norm ratio.
inline SuiteReport check_norm_inequalities(const MetricMeasureSpace& space, const BesovParams& params, std::size_t trials,
                                           std::uint64_t seed) {
    params.validate();
    SuiteReport rep{"norms", {}};
    Rng rng(seed);
    const std::size_t n = space.size();
    auto& homogeneous = rep.add("homogeneity", "||c u|| = c ||u|| for c >= 0 (relative 1e-9)");
    auto& definite = rep.add("definiteness", "||u|| = 0 exactly when u = 0");
    auto& poincare = rep.add("median_poincare", "median oscillation on B(x, 2^-k) is bounded by 2^{-ks} times the derived gradient average");
    auto& cutoff = rep.add("lipschitz_cutoff", "||phi|| <= C (1 + |phi|_inf)(1 + L^s) mu(supp)^{1/p} (ratio recorded)", false);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto u = detail::uniform_field(rng, n);
        const double c = rng.uniform(0.0, 4.0);
        ScalarField cu(u);
        for (auto& v : cu) v *= c;
        const double base = besov_norm(space, u, params, GradientMode::minimal).total;
        const double scaled = besov_norm(space, cu, params, GradientMode::minimal).total;
        homogeneous.record(std::abs(scaled - c * base) <= 1e-9 * std::max(1.0, c * base),
                           [&] { return "u=" + describe_field(u) + " c=" + format_double(c); });
        definite.record(base > 0.0 || std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; }));

        if (params.s < 1.0) {
            const auto [phi, lip] = detail::random_bump(space, rng);
            PointSet support;
            for (std::size_t x = 0; x < n; ++x) {
                if (phi[x] != 0.0) support.push_back(x);
            }
            const auto bound = lipschitz_norm_bound(space, phi, lip, support, params);
            cutoff.max_metric("max_ratio", bound.ratio());
            cutoff.record(std::isfinite(bound.ratio()));
        }
    }
    definite.record(besov_norm(space, ScalarField(n, 0.0), params, GradientMode::minimal).total == 0.0);
    const auto est = poincare_constant(space, params, std::max<std::size_t>(1, trials / 5), seed + 1);
    poincare.metrics["empirical_constant"] = est.constant;
    poincare.metrics["terms"] = static_cast<double>(est.terms);
    poincare.trials = est.terms;
    poincare.failures = est.zero_denominator_failures;
    if (!std::isfinite(est.constant)) ++poincare.failures;
    return rep;
}

}  // namespace besov
