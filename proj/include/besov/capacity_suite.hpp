#pragma once

#include <string>
#include <vector>

#include "besov/capacity.hpp"
#include "besov/gradient_suite.hpp"
#include "besov/median_suite.hpp"
#include "besov/report.hpp"

namespace besov {

namespace detail {

inline void record_admissible(Check& check, const MetricMeasureSpace& space, const PointSet& set, const CapacityResult& r,
                              double s) {
    const bool in_class = is_admissible(r.minimizer_u, set);
    const auto bad = check_gradient(space, r.minimizer_u, r.minimizer_G, s);
    check.record(in_class && bad.empty(), [&] {
        return "E=" + describe_set(set) + (in_class ? " " + describe_violation(bad.front()) : " u outside the admissible class");
    });
}

}  // namespace detail

/**
 * Order properties of the capacity on random subsets. Every asserted comparison is
 * exact: the larger set's minimizer is handed to the smaller set as a warm start.
 */
inline SuiteReport check_capacity_properties(const MetricMeasureSpace& space, const BesovParams& params,
                                             std::size_t trials, std::uint64_t seed, const SolverConfig& config = {}) {
    params.validate();
    SuiteReport rep{"capacity", {}};
    Rng rng(seed);
    const std::size_t n = space.size();
    const bool assertable = params.p >= 1.0 && params.q >= 1.0;
    auto& lower = rep.add("measure_lower_bound", "mu(E) <= C(E) + 1e-9 mu(X)");
    auto& admissible = rep.add("minimizer_admissible", "returned u is admissible and the returned gradient is feasible for it");
    auto& whole = rep.add("whole_space", "C(X) = mu(X) within relative 1e-6");
    auto& monotone = rep.add("monotone", "E1 in E2 implies C(E1) <= C(E2) (larger minimizer reused)", assertable);
    auto& outer = rep.add("outer", "C(E) = min over supersets U of C(U), attained at U = E; on a finite space this restates monotonicity",
                          assertable);
    auto& chain = rep.add("decreasing_chain", "a decreasing chain that stabilizes has limit C(intersection)", assertable);
    auto& subadd = rep.add("subadditivity", "C(union)^r <= C sum C(E_i)^r with r = min(1, q/p); empirical C recorded", false);
    auto& scaling = rep.add("measure_scaling", "scaling mu by lambda scales lp + grad of a fixed u by lambda^{1/p}");
    const double r_exp = std::min(1.0, params.q / params.p);

    auto solve = [&](const PointSet& set, std::vector<ScalarField> starts = {}) {
        auto res = capacity(space, set, params, config, std::move(starts));
        lower.record(res.lower_bound <= res.value + 1e-9 * space.total_measure(),
                     [&] { return "E=" + detail::describe_set(set) + " C=" + format_double(res.value); });
        detail::record_admissible(admissible, space, set, res, params.s);
        return res;
    };

    const auto all = space.all_points();
    const auto full = solve(all);
    whole.record(std::abs(full.value - space.total_measure()) <= 1e-6 * space.total_measure(),
                 [&] { return "C(X)=" + format_double(full.value) + " mu(X)=" + format_double(space.total_measure()); });

    for (std::size_t t = 0; t < trials; ++t) {
        const auto e2 = detail::random_subset(rng, n, 0.5);
        PointSet e1;
        for (const auto x : e2) {
            if (rng.coin(0.5)) e1.push_back(x);
        }
        if (e1.empty()) e1.push_back(e2.front());
        const auto r2 = solve(e2);
        const auto r1 = solve(e1, {r2.minimizer_u});
        monotone.record(r1.value <= r2.value, [&] {
            return "E1=" + detail::describe_set(e1) + " C=" + format_double(r1.value) + " E2=" + detail::describe_set(e2) +
                   " C=" + format_double(r2.value);
        });

        // Outer: no superset does better than E itself.
        auto u_set = e1;
        for (std::size_t x = 0; x < n; ++x) {
            if (rng.coin(0.3)) u_set.push_back(x);
        }
        u_set = normalize_set(std::move(u_set));
        const auto ru = solve(u_set);
        const auto re = solve(e1, {ru.minimizer_u, r2.minimizer_u});
        outer.record(re.value <= ru.value, [&] { return "E=" + detail::describe_set(e1); });

        // Decreasing chain K_1 > K_2 > ... > K_m = K_{m+1} = ...
        std::vector<PointSet> ks{e2};
        while (ks.back().size() > 1 && rng.coin(0.7)) {
            auto next = ks.back();
            next.erase(next.begin() + rng.integer(0, static_cast<std::int64_t>(next.size()) - 1));
            ks.push_back(std::move(next));
        }
        const auto stable = ks.back();
        std::vector<double> values;
        for (std::size_t i = 0; i < ks.size() + 2; ++i) values.push_back(solve(ks[std::min(i, ks.size() - 1)]).value);
        const double at_intersection = solve(stable).value;
        chain.record(values.back() == at_intersection && values[values.size() - 2] == values.back(),
                     [&] { return "chain ending at " + detail::describe_set(stable); });

        // Subadditivity over a random family.
        const auto parts = rng.integer(2, 3);
        std::vector<PointSet> family;
        PointSet uni;
        for (std::int64_t i = 0; i < parts; ++i) {
            family.push_back(detail::random_subset(rng, n, 0.25));
            uni.insert(uni.end(), family.back().begin(), family.back().end());
        }
        uni = normalize_set(std::move(uni));
        double denom = 0.0;
        for (const auto& f : family) denom += std::pow(solve(f).value, r_exp);
        const double ratio = std::pow(solve(uni).value, r_exp) / denom;
        subadd.max_metric("empirical_constant", ratio);
        subadd.record(std::isfinite(ratio));

        const double lambda = std::exp2(rng.uniform(-3.0, 3.0));
        const auto scaled_space = space.scaled_measure(lambda);
        const double base = evaluate_admissible(space, r2.minimizer_u, params).objective;
        const double moved = evaluate_admissible(scaled_space, r2.minimizer_u, params).objective;
        const double expected = std::pow(lambda, 1.0 / params.p) * base;
        scaling.record(std::abs(moved - expected) <= 1e-9 * expected, [&] {
            return "lambda=" + format_double(lambda) + " got " + format_double(moved) + " expected " + format_double(expected);
        });
    }
    return rep;
}

}  // namespace besov
