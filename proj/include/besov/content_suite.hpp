#pragma once

#include <string>
#include <vector>

#include "besov/content.hpp"
#include "besov/median_suite.hpp"
#include "besov/report.hpp"

namespace besov {

namespace detail {

/// One to four random balls with radii in (0, diam].
inline Covering random_covering(const MetricMeasureSpace& space, Rng& rng) {
    Covering cov;
    const double diam = std::max(space.diameter(), 1.0);
    const auto count = rng.integer(1, 4);
    for (std::int64_t j = 0; j < count; ++j) {
        const auto c = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(space.size()) - 1));
        cov.balls.push_back({c, diam * std::exp2(rng.uniform(-6.0, 0.0))});
    }
    return cov;
}

inline std::string describe_covering(const Covering& cov) {
    std::string out = "[";
    for (std::size_t j = 0; j < cov.balls.size(); ++j) {
        out += (j ? "," : "") + std::string("(") + std::to_string(cov.balls[j].center) + "," + format_double(cov.balls[j].radius) + ")";
    }
    return out + "]";
}

}  // namespace detail

/**
 * Cost identities and order properties of the covering contents. Orderings between
 * optimal values are asserted only when the search certified them exact.
 */
inline SuiteReport check_content_properties(const MetricMeasureSpace& space, std::size_t trials, std::uint64_t seed,
                                            const ContentConfig& config = {}) {
    SuiteReport rep{"content", {}};
    Rng rng(seed);
    const std::size_t n = space.size();
    auto& identity = rep.add("theta_one_identity", "covering_cost with theta = 1 and a power gauge equals hausdorff_cost bit for bit");
    auto& below = rep.add("hausdorff_below_netrusov", "hausdorff_cost <= covering_cost for theta <= 1 on the same covering");
    auto& valid = rep.add("value_is_cost", "the reported value is the cost of a covering of E with radii <= R");
    auto& monotone = rep.add("monotone_in_set", "E1 in E2 implies N(E1) <= N(E2) with the exact method");
    auto& greedy = rep.add("greedy_at_least_exact", "greedy value >= exact value");
    auto& scaling = rep.add("measure_scaling", "scaling mu by 2^j scales the content by 2^j exactly");
    std::size_t skipped = 0;

    for (std::size_t t = 0; t < trials; ++t) {
        const double d = rng.uniform(0.1, 2.0);
        const double theta = rng.uniform(0.25, 2.0);
        const double radius = std::exp2(rng.uniform(-3.0, 1.0));
        const auto gauge = Gauge::power(d);
        const auto where = [&] {
            return "d=" + format_double(d) + " theta=" + format_double(theta) + " R=" + format_double(radius);
        };

        const auto cov = detail::random_covering(space, rng);
        identity.record(covering_cost(space, cov, gauge, 1.0) == hausdorff_cost(space, cov, d),
                        [&] { return "covering=" + detail::describe_covering(cov) + " " + where(); });
        const double small_theta = std::min(theta, 1.0);
        const double h = hausdorff_cost(space, cov, d);
        const double nc = covering_cost(space, cov, gauge, small_theta);
        below.record(h <= nc * (1.0 + 1e-12), [&] {
            return "covering=" + detail::describe_covering(cov) + " H=" + format_double(h) + " N=" + format_double(nc);
        });

        auto e2 = detail::random_subset(rng, n, std::min(0.4, 8.0 / static_cast<double>(n)));
        PointSet e1;
        for (const auto x : e2) {
            if (rng.coin(0.6)) e1.push_back(x);
        }
        if (e1.empty()) e1.push_back(e2.back());
        const auto r1 = netrusov_content(space, e1, gauge, theta, radius, ContentMethod::automatic, config);
        const auto r2 = netrusov_content(space, e2, gauge, theta, radius, ContentMethod::automatic, config);
        const bool certified = r2.method == ContentMethod::exact;
        if (r1.method == ContentMethod::exact && certified) {
            monotone.record(r1.value <= r2.value, [&] {
                return where() + " E1=" + detail::describe_set(e1) + " N=" + format_double(r1.value) + " E2=" +
                       detail::describe_set(e2) + " N=" + format_double(r2.value);
            });
        } else {
            monotone.max_metric("skipped_inexact", static_cast<double>(++skipped));
        }

        bool ok = covers(space, r2.covering, e2) && r2.value == covering_cost(space, r2.covering, gauge, theta);
        for (const auto& b : r2.covering.balls) ok = ok && b.radius <= radius;
        valid.record(ok, [&] { return where() + " E=" + detail::describe_set(e2); });

        if (!certified) continue;
        const auto g2 = netrusov_content(space, e2, gauge, theta, radius, ContentMethod::greedy, config);
        greedy.record(g2.value >= r2.value, [&] {
            return where() + " E=" + detail::describe_set(e2) + " greedy=" + format_double(g2.value) + " exact=" + format_double(r2.value);
        });
        greedy.max_metric("greedy_over_exact", g2.value / r2.value);

        const int j = static_cast<int>(rng.integer(-3, 3));
        const auto scaled = space.scaled_measure(std::ldexp(1.0, j));
        const auto rs = netrusov_content(scaled, e2, gauge, theta, radius, ContentMethod::exact, config);
        scaling.record(rs.value == std::ldexp(r2.value, j), [&] {
            return where() + " E=" + detail::describe_set(e2) + " j=" + std::to_string(j) + " got " + format_double(rs.value) +
                   " expected " + format_double(std::ldexp(r2.value, j));
        });
    }
    return rep;
}

}  // namespace besov
