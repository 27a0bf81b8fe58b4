#pragma once

#include <optional>
#include <string>
#include <vector>

#include "besov/capacity.hpp"
#include "besov/content.hpp"

namespace besov {

struct NamedSet {
    std::string id;
    PointSet points;
};

struct CompareConfig {
    double radius = 1.0;          ///< R for the upper content; must be <= 1
    double dilation = 5.0;        ///< c in the lower content radius cR
    double gauge_exponent = 0.0;  ///< d of the lower gauge; 0 selects 0.4 s p
    ContentMethod method = ContentMethod::automatic;
    ContentConfig content;
    SolverConfig solver;
};

struct CompareRow {
    std::string set_id;
    double cap = 0.0;
    double nh_upper = 0.0;
    std::optional<double> nh_lower;
    std::optional<double> ratio54;  ///< cap / nh_upper
    std::optional<double> ratio55;  ///< nh_lower / cap
    std::string status;
    bool cutoff_bound_holds = true;  ///< cap <= norm(cutoff)^p for every covering produced
    double worst_cutoff_value = 0.0;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double max_ratio54 = 0.0;
    double max_ratio55 = 0.0;
    GaugeCheck gauge;
    bool all_cutoff_bounds_hold = true;
};

/// x0 with E inside B(x0, R) and B(x0, 8R) \ B(x0, 4R) nonempty, if one exists.
inline std::optional<std::size_t> annulus_center(const MetricMeasureSpace& space, std::span<const std::size_t> set, double radius) {
    for (std::size_t x0 = 0; x0 < space.size(); ++x0) {
        bool inside = true;
        for (const auto y : set) inside = inside && space.d(x0, y) < radius;
        if (!inside) continue;
        for (std::size_t z = 0; z < space.size(); ++z) {
            const double d = space.d(x0, z);
            if (d >= 4.0 * radius && d < 8.0 * radius) return x0;
        }
    }
    return std::nullopt;
}

/**
 * Capacity against the two contents for each set of a family:
 *   nh_upper = N^{sp, min(1, q/p)}_R(E)   (capacity is at most a multiple of it)
 *   nh_lower = N^{d, q/p}_{cR}(E), d < sp  (at most a multiple of the capacity)
 * The lower comparison needs the annulus condition and is skipped without it.
 * Cutoffs built from every covering produced are passed to the capacity solver, so
 * cap <= ||cutoff||^p holds exactly; it is re-checked here.
 */
inline CompareReport compare_capacity_content(const MetricMeasureSpace& space, const BesovParams& params,
                                              const std::vector<NamedSet>& family, const CompareConfig& config = {}) {
    params.validate();
    params.require_fractional();
    if (!(config.radius > 0.0 && config.radius <= 1.0)) throw Error("compare needs 0 < R <= 1");
    if (!std::isfinite(params.q)) throw Error("compare needs q < inf");
    const double sp = params.s * params.p;
    const double d = config.gauge_exponent > 0.0 ? config.gauge_exponent : 0.4 * sp;
    CompareReport report;
    report.gauge = check_gauge(Gauge::power(d), params.s, params.p);
    if (!report.gauge.admissible) throw Error("lower gauge exponent must satisfy d < s p");
    const auto upper_gauge = Gauge::power(sp);
    const auto lower_gauge = Gauge::power(d);
    const double theta_upper = std::min(1.0, params.q / params.p);
    const double theta_lower = params.q / params.p;

    for (const auto& named : family) {
        CompareRow row;
        row.set_id = named.id;
        const auto set = normalize_set(named.points, space.size());
        const auto upper = netrusov_content(space, set, upper_gauge, theta_upper, config.radius, config.method, config.content);
        row.nh_upper = upper.value;
        std::vector<Covering> coverings{upper.covering};
        const auto center = annulus_center(space, set, config.radius);
        std::optional<ContentResult> lower;
        if (center) {
            lower = netrusov_content(space, set, lower_gauge, theta_lower, config.dilation * config.radius, config.method,
                                     config.content);
            coverings.push_back(lower->covering);
        }
        std::vector<ScalarField> starts;
        for (const auto& cov : coverings) {
            if (!cov.balls.empty()) starts.push_back(cutoff_function(space, cov));
        }
        const auto cap = capacity(space, set, params, config.solver, starts);
        row.cap = cap.value;
        for (const auto& u : starts) {
            const double v = evaluate_admissible(space, u, params).value;
            row.worst_cutoff_value = std::max(row.worst_cutoff_value, v);
            if (!(cap.value <= v)) row.cutoff_bound_holds = false;
        }
        if (row.nh_upper > 0.0) row.ratio54 = row.cap / row.nh_upper;
        row.status = to_string(cap.status);
        if (lower) {
            row.nh_lower = lower->value;
            row.ratio55 = lower->value / row.cap;
        } else {
            row.status += ";annulus-precondition-unmet";
        }
        if (upper.method != ContentMethod::exact) row.status += ";upper-content-greedy";
        if (lower && lower->method != ContentMethod::exact) row.status += ";lower-content-greedy";
        if (row.ratio54) report.max_ratio54 = std::max(report.max_ratio54, *row.ratio54);
        if (row.ratio55) report.max_ratio55 = std::max(report.max_ratio55, *row.ratio55);
        report.all_cutoff_bounds_hold = report.all_cutoff_bounds_hold && row.cutoff_bound_holds;
        report.rows.push_back(std::move(row));
    }
    return report;
}

/// Singletons, balls around every point at dyadic radii, and `random_sets` seeded random subsets.
inline std::vector<NamedSet> standard_family(const MetricMeasureSpace& space, std::size_t random_sets, std::uint64_t seed) {
    std::vector<NamedSet> family;
    const std::size_t n = space.size();
    for (std::size_t x = 0; x < n; ++x) family.push_back({"point-" + std::to_string(x), {x}});
    const double diam = space.diameter();
    std::vector<PointSet> seen;
    for (std::size_t x = 0; x < n; ++x) {
        for (int j = 1; j <= 4; ++j) {
            const auto members = space.members(x, diam * std::ldexp(1.0, -j));
            if (members.size() < 2 || std::find(seen.begin(), seen.end(), members) != seen.end()) continue;
            seen.push_back(members);
            family.push_back({"ball-" + std::to_string(x) + "-" + std::to_string(j), members});
        }
    }
    Rng rng(seed);
    for (std::size_t i = 0; i < random_sets; ++i) {
        PointSet set;
        const double keep = rng.uniform(0.1, 0.5);
        for (std::size_t x = 0; x < n; ++x) {
            if (rng.coin(keep)) set.push_back(x);
        }
        if (set.empty()) set.push_back(static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(n) - 1)));
        family.push_back({"random-" + std::to_string(i), set});
    }
    return family;
}

}  // namespace besov
