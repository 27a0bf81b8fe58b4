#pragma once

#include <algorithm>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "besov/capacity_suite.hpp"
#include "besov/compare.hpp"
#include "besov/content_suite.hpp"
#include "besov/gradient_suite.hpp"
#include "besov/median_suite.hpp"
#include "besov/oracle_suite.hpp"
#include "besov/report.hpp"

namespace besov {

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"median", "gradient", "capacity", "content", "compare", "oracle"};
    return names;
}

/// A function with a claimed gradient, checked as-is.
struct GradientFixture {
    ScalarField u;
    GradientSequence g;
};

struct VerifyConfig {
    std::vector<std::string> suites = suite_names();
    BesovParams params;
    std::uint64_t seed = 1;
    std::size_t trials = 200;          ///< median, gradient and content suites
    std::size_t capacity_trials = 10;  ///< each trial solves several capacities
    std::size_t oracle_trials = 20;
    std::size_t family_random_sets = 6;
    double radius = 1.0;  ///< R of the capacity/content comparison
    bool assert_convolution_monotone = false;
    unsigned threads = 1;
    SolverConfig solver;
    ContentConfig content;
    std::optional<GradientFixture> gradient_fixture;
};

struct VerifyResult {
    std::vector<SuiteReport> suites;
    bool passed() const {
        return std::all_of(suites.begin(), suites.end(), [](const SuiteReport& r) { return r.passed(); });
    }
};

inline void check_suite_names(const std::vector<std::string>& names) {
    for (const auto& name : names) {
        if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end()) {
            throw Error("unknown suite \"" + name + "\"; expected a subset of median, gradient, capacity, content, compare, oracle");
        }
    }
}

/// Capacity against both contents on the standard family, as a suite.
inline SuiteReport check_compare(const MetricMeasureSpace& space, const BesovParams& params, std::uint64_t seed,
                                 const VerifyConfig& config) {
    SuiteReport rep{"compare", {}};
    CompareConfig cc;
    cc.radius = config.radius;
    cc.solver = config.solver;
    cc.content = config.content;
    const auto report = compare_capacity_content(space, params, standard_family(space, config.family_random_sets, seed), cc);
    auto& cutoff = rep.add("cutoff_upper_bound", "C(E) <= ||u||^p for the cutoff of every covering the content optimizer returns");
    auto& upper = rep.add("upper_ratio_bounded", "C(E) / N^{sp, min(1, q/p)}_R(E) is finite on the family; max recorded");
    auto& lower = rep.add("lower_ratio_bounded", "N^{d, q/p}_{cR}(E) / C(E) is finite where the annulus condition holds; max recorded");
    std::size_t unmet = 0;
    for (const auto& row : report.rows) {
        cutoff.record(row.cutoff_bound_holds, [&] {
            return row.set_id + " cap=" + format_double(row.cap) + " cutoff=" + format_double(row.worst_cutoff_value);
        });
        if (row.ratio54) upper.record(std::isfinite(*row.ratio54), [&] { return row.set_id; });
        if (row.ratio55) {
            lower.record(std::isfinite(*row.ratio55), [&] { return row.set_id; });
        } else {
            ++unmet;
        }
    }
    upper.max_metric("empirical_constant", report.max_ratio54);
    lower.max_metric("empirical_constant", report.max_ratio55);
    lower.max_metric("annulus_condition_unmet", static_cast<double>(unmet));
    lower.max_metric("gauge_exponent", report.gauge.leading_exponent);
    return rep;
}

inline SuiteReport check_gradient_fixture(const MetricMeasureSpace& space, const GradientFixture& fixture, double s) {
    SuiteReport rep{"fixture", {}};
    auto& check = rep.add("gradient_fixture", "the supplied sequence is a fractional s-gradient of the supplied function");
    if (fixture.u.size() != space.size() || fixture.g.size() != space.size()) throw Error("fixture size does not match the space");
    detail::record_feasible(check, space, fixture.u, fixture.g, s);
    return rep;
}

/**
 * Runs the named suites. Each suite draws from its own seed derived from the run
 * seed, so results do not depend on which other suites run or on the thread count.
 */
inline VerifyResult run_verify(const MetricMeasureSpace& space, const VerifyConfig& config) {
    check_suite_names(config.suites);
    config.params.validate();
    using Task = std::function<std::vector<SuiteReport>()>;
    std::vector<Task> tasks;
    const auto& p = config.params;
    auto seed_for = [&](std::uint64_t offset) { return config.seed * 1000003ULL + offset; };
    auto wants = [&](const std::string& name) {
        return std::find(config.suites.begin(), config.suites.end(), name) != config.suites.end();
    };
    if (config.gradient_fixture) {
        tasks.push_back([&] { return std::vector<SuiteReport>{check_gradient_fixture(space, *config.gradient_fixture, p.s)}; });
    }
    if (wants("median")) {
        tasks.push_back([&] {
            return std::vector<SuiteReport>{
                check_median_properties(space, config.trials, seed_for(1)),
                check_partition_of_unity(space, config.trials, seed_for(2)),
                check_median_convolution(space, config.trials, seed_for(3), p.gamma, config.assert_convolution_monotone)};
        });
    }
    if (wants("gradient")) {
        tasks.push_back([&] {
            return std::vector<SuiteReport>{check_gradient_constructions(space, p, config.trials, seed_for(4)),
                                            check_sequence_inequalities(config.trials, seed_for(5)),
                                            check_norm_inequalities(space, p, config.trials, seed_for(6))};
        });
    }
    if (wants("capacity")) {
        tasks.push_back([&] {
            return std::vector<SuiteReport>{check_capacity_properties(space, p, config.capacity_trials, seed_for(7), config.solver)};
        });
    }
    if (wants("content")) {
        tasks.push_back([&] { return std::vector<SuiteReport>{check_content_properties(space, config.trials, seed_for(8), config.content)}; });
    }
    if (wants("compare")) {
        tasks.push_back([&] { return std::vector<SuiteReport>{check_compare(space, p, seed_for(9), config)}; });
    }
    if (wants("oracle")) {
        tasks.push_back([&] {
            OracleSuiteConfig oc;
            oc.solver = config.solver;
            return std::vector<SuiteReport>{check_oracle_agreement(config.oracle_trials, seed_for(10), oc)};
        });
    }

    std::vector<std::vector<SuiteReport>> outputs(tasks.size());
    const std::size_t width = std::max(1U, config.threads);
    for (std::size_t start = 0; start < tasks.size(); start += width) {
        const std::size_t stop = std::min(tasks.size(), start + width);
        if (width == 1) {
            outputs[start] = tasks[start]();
            continue;
        }
        std::vector<std::future<std::vector<SuiteReport>>> running;
        for (std::size_t t = start; t < stop; ++t) running.push_back(std::async(std::launch::async, tasks[t]));
        for (std::size_t t = start; t < stop; ++t) outputs[t] = running[t - start].get();
    }
    VerifyResult result;
    for (auto& group : outputs) {
        for (auto& rep : group) result.suites.push_back(std::move(rep));
    }
    return result;
}

}  // namespace besov
