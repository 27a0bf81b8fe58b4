#pragma once

#include <array>
#include <string>

#include "besov/capacity.hpp"
#include "besov/content.hpp"
#include "besov/generate.hpp"
#include "besov/median_suite.hpp"
#include "besov/oracle.hpp"
#include "besov/report.hpp"

namespace besov {

struct OracleSuiteConfig {
    double capacity_rtol = 1e-2;
    double content_rtol = 1e-12;
    SolverConfig solver;
};

/**
 * Solver against brute force on random spaces with 2 to 4 points, weights in
 * [0.5, 1.5], p, q in {1, 2} and s in {0.3, 0.5, 0.9}. Contents are compared with
 * theta in {min(1, q/p), q/p, 1} and R in {1, 2.5}; instances beyond the exhaustive
 * candidate cap are skipped and counted.
 */
inline SuiteReport check_oracle_agreement(std::size_t trials, std::uint64_t seed, const OracleSuiteConfig& config = {}) {
    SuiteReport rep{"oracle", {}};
    Rng rng(seed);
    auto& cap = rep.add("capacity_matches_brute_force", "|capacity - brute_capacity| <= rtol capacity");
    auto& below = rep.add("capacity_not_above_grid", "capacity <= brute_capacity (1 + 1e-9): the grid value is admissible");
    auto& content = rep.add("content_matches_brute_force", "exact content equals brute_content within rtol");
    std::size_t skipped = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto n = static_cast<std::size_t>(rng.integer(2, 4));
        const auto space = random_cloud(n, rng.next(), 2, 2.0, true);
        const auto set = detail::random_subset(rng, n, 0.4);
        BesovParams params;
        params.s = std::array<double, 3>{0.3, 0.5, 0.9}[static_cast<std::size_t>(rng.integer(0, 2))];
        params.s_prime = params.s / 2.0;
        params.p = rng.coin(0.5) ? 1.0 : 2.0;
        params.q = rng.coin(0.5) ? 1.0 : 2.0;
        const auto where = [&] {
            return "n=" + std::to_string(n) + " E=" + detail::describe_set(set) + " s=" + format_double(params.s) +
                   " p=" + format_double(params.p) + " q=" + format_double(params.q) + " dist=" + describe_field(space.distances()) + " w=" + describe_field(space.weights());
        };

        const double solved = capacity(space, set, params, config.solver).value;
        const double brute = oracle::brute_capacity(space, set, params.s, params.p, params.q);
        const double rel = std::abs(solved - brute) / solved;
        cap.max_metric("max_relative_difference", rel);
        cap.record(rel <= config.capacity_rtol, [&] {
            return where() + " capacity=" + format_double(solved) + " brute=" + format_double(brute);
        });
        below.record(solved <= brute * (1.0 + 1e-9), [&] {
            return where() + " capacity=" + format_double(solved) + " brute=" + format_double(brute);
        });

        const auto gauge = Gauge::power(params.s * params.p);
        for (const double theta : {std::min(1.0, params.q / params.p), params.q / params.p, 1.0}) {
            for (const double radius : {1.0, 2.5}) {
                double reference = 0.0;
                try {
                    reference = oracle::brute_content(space, set, gauge, theta, radius);
                } catch (const oracle::CapExceeded&) {
                    content.max_metric("skipped_above_cap", static_cast<double>(++skipped));
                    continue;
                }
                const double exact = netrusov_content(space, set, gauge, theta, radius, ContentMethod::exact).value;
                const double diff = std::abs(exact - reference) / reference;
                content.max_metric("max_relative_difference", diff);
                content.record(diff <= config.content_rtol, [&] {
                    return where() + " theta=" + format_double(theta) + " R=" + format_double(radius) +
                           " exact=" + format_double(exact) + " brute=" + format_double(reference);
                });
            }
        }
    }
    return rep;
}

}  // namespace besov
