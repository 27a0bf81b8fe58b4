#pragma once

#include <string>
#include <vector>

#include "besov/median.hpp"
#include "besov/report.hpp"

namespace besov {

namespace detail {

/// Multiples of 1/8 in [-lim, lim]: sums, differences and dyadic scalings stay exact.
inline ScalarField dyadic_field(Rng& rng, std::size_t n, int lim = 16) {
    ScalarField u(n);
    for (auto& v : u) v = static_cast<double>(rng.integer(-lim, lim)) / 8.0;
    return u;
}

inline PointSet random_subset(Rng& rng, std::size_t n, double keep = 0.5) {
    PointSet set;
    for (std::size_t x = 0; x < n; ++x) {
        if (rng.coin(keep)) set.push_back(x);
    }
    if (set.empty()) set.push_back(static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(n) - 1)));
    return set;
}

inline std::string describe_set(const PointSet& set) {
    std::string out = "{";
    for (std::size_t i = 0; i < set.size(); ++i) out += (i ? "," : "") + std::to_string(set[i]);
    return out + "}";
}

/// A smooth test function: a positive combination of distance cones.
inline ScalarField cone_field(const MetricMeasureSpace& space, Rng& rng) {
    ScalarField u(space.size(), 0.0);
    const auto anchors = rng.integer(1, 3);
    for (std::int64_t a = 0; a < anchors; ++a) {
        const auto y = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(space.size()) - 1));
        const double slope = rng.uniform(-1.0, 1.0);
        for (std::size_t x = 0; x < space.size(); ++x) u[x] += slope * space.d(x, y);
    }
    return u;
}

}  // namespace detail

/**
 * Randomized order properties of the gamma-median, the factor-2 deviation bound,
 * the partition of unity and the median convolution.
 */
inline SuiteReport check_median_properties(const MetricMeasureSpace& space, std::size_t trials, std::uint64_t seed) {
    SuiteReport rep{"median", {}};
    const std::size_t n = space.size();
    Rng rng(seed);
    auto& level = rep.add("level_monotone", "gamma <= gamma' implies m^gamma_u(A) >= m^gamma'_u(A)");
    auto& order = rep.add("order_monotone", "u <= v pointwise implies m_u(A) <= m_v(A)");
    auto& subset = rep.add("subset_comparison", "A in B, mu(B) <= C mu(A) implies m^gamma_u(A) <= m^{gamma/C}_u(B)");
    auto& shift = rep.add("shift", "m_{u+c}(A) = m_u(A) + c");
    auto& scale = rep.add("positive_scaling", "m_{cu}(A) = c m_u(A) for c >= 0");
    auto& negative = rep.add("negative_scaling", "m_{cu}(A) = c m_u(A) for c < 0 (recorded, not asserted)", false);
    auto& absval = rep.add("absolute_value", "|m_u(A)| <= m_{|u|}(A)");
    auto& chebyshev = rep.add("moment_bound", "m_{|u|}(A) <= (avg_A |u|^p / gamma)^{1/p}");
    auto& small_ball = rep.add("small_ball", "r below the least distance gives m_u(B(x, r)) = u(x)");
    auto& deviation = rep.add("deviation_factor_two", "m_{|u - m_u(A)|}(A) <= 2 inf_c m_{|u - c|}(A)");
    const double dmin = space.min_distance();

    for (std::size_t t = 0; t < trials; ++t) {
        const auto u = detail::dyadic_field(rng, n);
        const auto a_set = detail::random_subset(rng, n);
        const double gamma = static_cast<double>(rng.integer(1, 4)) / 8.0;
        const double gamma2 = static_cast<double>(rng.integer(static_cast<std::int64_t>(gamma * 8.0), 4)) / 8.0;
        const double m = gamma_median(space, u, a_set, gamma);
        const auto where = [&] { return "u=" + describe_field(u) + " A=" + detail::describe_set(a_set) + " gamma=" + format_double(gamma); };

        const double m2 = gamma_median(space, u, a_set, gamma2);
        level.record(m >= m2, [&] { return where() + " gamma'=" + format_double(gamma2); });

        auto v = u;
        for (auto& x : v) x += static_cast<double>(rng.integer(0, 8)) / 8.0;
        order.record(m <= gamma_median(space, v, a_set, gamma), [&] { return where() + " v=" + describe_field(v); });

        auto b_set = a_set;
        for (std::size_t x = 0; x < n; ++x) {
            if (rng.coin(0.5)) b_set.push_back(x);
        }
        b_set = normalize_set(std::move(b_set));
        const double c_ratio = space.measure(b_set) / space.measure(a_set) * (1.0 + 1e-12);
        const double mb = gamma_median(space, u, b_set, gamma / c_ratio);
        subset.record(m <= mb, [&] { return where() + " B=" + detail::describe_set(b_set); });

        const double c = static_cast<double>(rng.integer(-16, 16)) / 8.0;
        auto shifted = u;
        for (auto& x : shifted) x += c;
        shift.record(gamma_median(space, shifted, a_set, gamma) == m + c, [&] { return where() + " c=" + format_double(c); });

        auto scaled = u;
        for (auto& x : scaled) x *= c;
        const bool scale_ok = gamma_median(space, scaled, a_set, gamma) == c * m;
        if (c >= 0.0) {
            scale.record(scale_ok, [&] { return where() + " c=" + format_double(c); });
        } else {
            negative.record(scale_ok, [&] { return where() + " c=" + format_double(c); });
        }

        auto mod = u;
        for (auto& x : mod) x = std::abs(x);
        const double m_abs = gamma_median(space, mod, a_set, gamma);
        absval.record(std::abs(m) <= m_abs, where);

        const double p = std::array<double, 4>{0.5, 1.0, 2.0, 3.0}[static_cast<std::size_t>(rng.integer(0, 3))];
        double avg = 0.0;
        for (const auto x : a_set) avg += space.weight(x) * std::pow(mod[x], p);
        avg /= space.measure(a_set);
        const double bound = std::pow(avg / gamma, 1.0 / p);
        chebyshev.record(m_abs <= bound * (1.0 + 1e-12) + 1e-300, [&] { return where() + " p=" + format_double(p); });

        const auto x0 = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(n) - 1));
        const double r = std::isfinite(dmin) ? dmin * rng.uniform(0.01, 0.99) : 1.0;
        small_ball.record(gamma_median(space, u, Ball{x0, r}, gamma) == u[x0], where);

        const auto dev = median_deviation_bound(space, u, a_set, gamma);
        deviation.record(dev.holds(), [&] { return where() + " lhs=" + format_double(dev.lhs) + " rhs=" + format_double(dev.rhs); });
    }
    return rep;
}

/// Invariants of the partition of unity at a range of scales.
inline SuiteReport check_partition_of_unity(const MetricMeasureSpace& space, std::size_t trials, std::uint64_t seed) {
    SuiteReport rep{"partition", {}};
    Rng rng(seed);
    auto& sum = rep.add("sums_to_one", "sum_i phi_i(x) = 1 within 1e-12");
    auto& support = rep.add("support", "phi_i = 0 outside B(center_i, 2r); phi_i >= 1/overlap on B(center_i, r)");
    auto& net = rep.add("net", "centers are r-separated and every point lies within r of a center");
    auto& lipschitz = rep.add("lipschitz", "each phi_i is (2 overlap / r)-Lipschitz");
    const std::size_t n = space.size();
    const double diam = std::max(space.diameter(), 1e-300);
    for (std::size_t t = 0; t < trials; ++t) {
        const double r = diam * std::exp2(rng.uniform(-6.0, 1.0));
        const auto pu = partition_of_unity(space, r);
        const auto where = [&] { return "r=" + format_double(r); };
        bool ok_sum = true;
        bool ok_support = true;
        bool ok_lip = true;
        const double lip = pu.lipschitz_bound();
        for (std::size_t x = 0; x < n; ++x) {
            double total = 0.0;
            for (std::size_t i = 0; i < pu.centers.size(); ++i) {
                const double d = space.d(pu.centers[i], x);
                const double v = pu.phi[i][x];
                total += v;
                if (v < 0.0 || v > 1.0) ok_support = false;
                if (d >= 2.0 * r && v != 0.0) ok_support = false;
                if (d < r && v < 1.0 / static_cast<double>(pu.overlap) * (1.0 - 1e-12)) ok_support = false;
                for (std::size_t y = x + 1; y < n; ++y) {
                    if (std::abs(v - pu.phi[i][y]) > lip * space.d(x, y) * (1.0 + 1e-12)) ok_lip = false;
                }
            }
            if (std::abs(total - 1.0) > 1e-12) ok_sum = false;
        }
        bool ok_net = true;
        for (std::size_t i = 0; i < pu.centers.size(); ++i) {
            for (std::size_t j = i + 1; j < pu.centers.size(); ++j) {
                if (space.d(pu.centers[i], pu.centers[j]) < r) ok_net = false;
            }
        }
        for (std::size_t x = 0; x < n; ++x) {
            if (space.distance_to(x, pu.centers) >= r) ok_net = false;
        }
        sum.record(ok_sum, where);
        support.record(ok_support, where);
        net.record(ok_net, where);
        lipschitz.record(ok_lip, where);
    }
    return rep;
}

/**
 * Median convolution at dyadic radii 2^{-i}: exact recovery once 2r is below the
 * least distance, and sup-norm error nonincreasing in i for smooth u. The monotone
 * check runs over i from just above the diameter scale to just below the least
 * distance; with assert_monotone = false it is recorded only.
 */
inline SuiteReport check_median_convolution(const MetricMeasureSpace& space, std::size_t trials, std::uint64_t seed,
                                            double gamma = 0.5, bool assert_monotone = true) {
    SuiteReport rep{"convolution", {}};
    Rng rng(seed);
    auto& exact = rep.add("exact_small_radius", "2r < least distance gives u_r = u exactly");
    auto& range = rep.add("indicator_range", "the convolution of an indicator takes values in [0, 1]");
    auto& monotone = rep.add("error_monotone", "sup |u_{2^-i} - u| is nonincreasing in i", assert_monotone);
    const std::size_t n = space.size();
    if (n < 2) return rep;
    const double dmin = space.min_distance();
    const int i_lo = static_cast<int>(std::floor(-std::log2(space.diameter()))) - 1;
    const int i_hi = static_cast<int>(std::ceil(-std::log2(dmin / 2.0))) + 1;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto u = detail::cone_field(space, rng);
        const auto where = [&] { return "u=" + describe_field(u); };
        const double r_small = dmin / 2.0 * rng.uniform(0.05, 0.95);
        exact.record(median_convolution(space, u, r_small, gamma) == u, where);

        ScalarField chi(n, 0.0);
        for (const auto x : detail::random_subset(rng, n)) chi[x] = 1.0;
        const auto conv = median_convolution(space, chi, space.diameter() * rng.uniform(0.05, 1.0), gamma);
        bool in_range = true;
        for (const double v : conv) in_range = in_range && v >= -1e-15 && v <= 1.0 + 1e-15;
        range.record(in_range, where);

        double previous = kInfinity;
        bool ok = true;
        std::string trace;
        for (int i = i_lo; i <= i_hi; ++i) {
            const auto ur = median_convolution(space, u, std::ldexp(1.0, -i), gamma);
            double err = 0.0;
            for (std::size_t x = 0; x < n; ++x) err = std::max(err, std::abs(ur[x] - u[x]));
            trace += " i=" + std::to_string(i) + ":" + format_double(err);
            if (err > previous * (1.0 + 1e-12) + 1e-15) ok = false;
            previous = err;
        }
        monotone.record(ok, [&] { return where() + trace; });
    }
    return rep;
}

}  // namespace besov
