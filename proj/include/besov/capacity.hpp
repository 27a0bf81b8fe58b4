#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "besov/content.hpp"
#include "besov/gradient.hpp"
#include "besov/lp.hpp"

namespace besov {

struct SolverConfig {
    double tol = 1e-8;            ///< relative objective tolerance
    std::size_t max_iter = 100000;
    std::size_t restarts = 3;     ///< built-in warm starts used: u = 1, u = indicator of E, covering cutoff
    std::uint64_t seed = 0;
    bool allow_empty = false;     ///< return 0 for the empty set instead of throwing

    void validate() const {
        if (!(tol > 0.0)) throw Error("solver tol must be positive");
        if (max_iter < 1) throw Error("solver max_iter must be >= 1");
    }
};

enum class CapacityStatus { converged, iteration_cap, upper_bound_only };

inline std::string to_string(CapacityStatus s) {
    switch (s) {
        case CapacityStatus::converged: return "converged";
        case CapacityStatus::iteration_cap: return "iteration-cap";
        case CapacityStatus::upper_bound_only: return "upper-bound-only";
    }
    return "?";
}

struct CapacityProblem {
    PointSet set;
    BesovParams params;
    SolverConfig solver;
    std::vector<ScalarField> warm_starts;  ///< extra admissible starting points (clipped and forced to 1 on E)
};

struct CapacityResult {
    double value = 0.0;  ///< (lp_part + grad_part)^p at the returned minimizer
    double lp_part = 0.0;
    double grad_part = 0.0;
    ScalarField minimizer_u;
    GradientSequence minimizer_G;
    double lower_bound = 0.0;  ///< mu(E)
    CapacityStatus status = CapacityStatus::converged;
    std::size_t iterations = 0;
    double final_step = 0.0;
    std::string start;  ///< which candidate produced the minimizer
};

/// u_i(x) = max{0, 1 - 2^i dist(x, union of the class-i balls)}; zero when the class is empty.
inline ScalarField cutoff_admissible(const MetricMeasureSpace& space, const Covering& covering, int cls) {
    ScalarField u(space.size(), 0.0);
    std::vector<std::size_t> members;
    for (const auto& b : covering.balls) {
        if (radius_class(b.radius) != cls) continue;
        for (const auto y : space.members(b)) members.push_back(y);
    }
    if (members.empty()) return u;
    members = normalize_set(std::move(members));
    const double scale = std::ldexp(1.0, cls);
    for (std::size_t x = 0; x < space.size(); ++x) u[x] = std::max(0.0, 1.0 - scale * space.distance_to(x, members));
    return u;
}

/// Pointwise maximum of the per-class cutoffs: 1 on every ball of the covering.
inline ScalarField cutoff_function(const MetricMeasureSpace& space, const Covering& covering) {
    ScalarField u(space.size(), 0.0);
    for (const auto& [cls, _] : covering.classes()) {
        const auto ui = cutoff_admissible(space, covering, cls);
        for (std::size_t x = 0; x < u.size(); ++x) u[x] = std::max(u[x], ui[x]);
    }
    return u;
}

/// Certified evaluation used for every reported value: (lp + grad)^p with per-scale minimal gradients.
struct AdmissibleValue {
    double value = 0.0;
    double objective = 0.0;  ///< lp + grad
    BesovNorm norm;
};

inline AdmissibleValue evaluate_admissible(const MetricMeasureSpace& space, std::span<const double> u,
                                           const BesovParams& params) {
    AdmissibleValue out;
    out.norm = besov_norm(space, u, params, GradientMode::minimal);
    out.objective = out.norm.total;
    out.value = std::pow(out.objective, params.p);
    return out;
}

inline bool is_admissible(std::span<const double> u, std::span<const std::size_t> set) {
    for (const double v : u) {
        if (!(v >= 0.0 && v <= 1.0)) return false;
    }
    for (const auto x : set) {
        if (u[x] != 1.0) return false;
    }
    return true;
}

namespace detail {

inline ScalarField make_admissible(ScalarField u, std::span<const std::size_t> set) {
    for (auto& v : u) v = std::clamp(v, 0.0, 1.0);
    for (const auto x : set) u[x] = 1.0;
    return u;
}

/// Objective lp + grad and one subgradient with respect to every coordinate of u (p, q >= 1).
struct Linearization {
    double value = 0.0;
    std::vector<double> grad;
};

inline Linearization linearize(const MetricMeasureSpace& space, std::span<const double> u, const BesovParams& params) {
    const std::size_t n = space.size();
    const double p = params.p;
    const double q = params.q;
    Linearization out;
    out.grad.assign(n, 0.0);
    const double lp = lp_norm(space, u, p);
    if (lp > 0.0) {
        for (std::size_t x = 0; x < n; ++x) {
            out.grad[x] = p == 1.0 ? space.weight(x) : space.weight(x) * std::pow(u[x] / lp, p - 1.0);
        }
    }
    struct ScaleTerm {
        double norm;
        std::vector<double> grad;
    };
    std::vector<ScaleTerm> terms;
    for (const auto k : space.active_scales()) {
        const auto prob = build_scale_problem(space, u, params.s, k);
        const auto sol = solve_scale(prob, p);
        ScaleTerm term{pow_nonneg(sol.objective, 1.0 / p), std::vector<double>(n, 0.0)};
        if (term.norm > 0.0) {
            const double outer = std::pow(sol.objective, 1.0 / p - 1.0) / p;
            const auto pairs = space.pairs_at(k);
            for (std::size_t e = 0; e < prob.edges.size(); ++e) {
                const auto& pr = pairs[prob.edges[e].pair_index];
                const double sign = u[pr.i] > u[pr.j] ? 1.0 : -1.0;
                const double coef = outer * sol.dual[e] * sign / std::pow(pr.d, params.s);
                term.grad[pr.i] += coef;
                term.grad[pr.j] -= coef;
            }
        }
        terms.push_back(std::move(term));
    }
    std::vector<double> norms;
    for (const auto& t : terms) norms.push_back(t.norm);
    const double total = lq_norm(norms, q);
    out.value = lp + total;
    if (total > 0.0) {
        std::size_t argmax = 0;
        for (std::size_t t = 0; t < norms.size(); ++t) {
            if (norms[t] > norms[argmax]) argmax = t;
        }
        for (std::size_t t = 0; t < terms.size(); ++t) {
            double weight = 0.0;
            if (q == kInfinity) {
                weight = t == argmax ? 1.0 : 0.0;
            } else {
                weight = std::pow(norms[t] / total, q - 1.0);
            }
            if (weight == 0.0) continue;
            for (std::size_t x = 0; x < n; ++x) out.grad[x] += weight * terms[t].grad[x];
        }
    }
    return out;
}

/// Exact minimizer for p = q = 1: one LP over the free values of u and all per-scale gradients.
inline ScalarField solve_joint_linear(const MetricMeasureSpace& space, std::span<const std::size_t> set, double s) {
    const std::size_t n = space.size();
    std::vector<bool> fixed(n, false);
    for (const auto x : set) fixed[x] = true;
    std::vector<long> ucol(n, -1);
    std::size_t cols = 0;
    for (std::size_t x = 0; x < n; ++x) {
        if (!fixed[x]) ucol[x] = static_cast<long>(cols++);
    }
    const std::size_t free_count = cols;
    std::map<std::pair<int, std::size_t>, std::size_t> gcol;
    struct Row {
        std::vector<std::pair<std::size_t, double>> coef;
        double rhs;
    };
    std::vector<Row> rows;
    for (const auto& [k, pairs] : space.pairs_by_scale()) {
        for (const auto& pr : pairs) {
            if (fixed[pr.i] && fixed[pr.j]) continue;
            const double c = 1.0 / std::pow(pr.d, s);
            auto col_of = [&](std::size_t x) {
                auto [it, inserted] = gcol.try_emplace({k, x}, cols);
                if (inserted) ++cols;
                return it->second;
            };
            const std::size_t gi = col_of(pr.i);
            const std::size_t gj = col_of(pr.j);
            for (const double sign : {1.0, -1.0}) {
                Row row{{{gi, 1.0}, {gj, 1.0}}, 0.0};
                // g_i + g_j + sign * c (u_i - u_j) >= 0 with fixed values moved to the right.
                if (fixed[pr.i]) {
                    row.rhs -= sign * c;
                } else {
                    row.coef.emplace_back(static_cast<std::size_t>(ucol[pr.i]), sign * c);
                }
                if (fixed[pr.j]) {
                    row.rhs += sign * c;
                } else {
                    row.coef.emplace_back(static_cast<std::size_t>(ucol[pr.j]), -sign * c);
                }
                rows.push_back(std::move(row));
            }
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (!fixed[x]) rows.push_back({{{static_cast<std::size_t>(ucol[x]), -1.0}}, -1.0});
    }
    lp::CoveringLp lp(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (const auto& [col, v] : rows[r].coef) lp.at(r, col) += v;
        lp.b[r] = rows[r].rhs;
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (!fixed[x]) lp.c[static_cast<std::size_t>(ucol[x])] = space.weight(x);
    }
    for (const auto& [key, col] : gcol) lp.c[col] = space.weight(key.second);
    const auto sol = lp::solve(lp);
    ScalarField u(n, 1.0);
    for (std::size_t x = 0; x < n; ++x) {
        if (!fixed[x]) u[x] = sol.x[static_cast<std::size_t>(ucol[x])];
    }
    (void)free_count;
    return make_admissible(std::move(u), set);
}

struct DescentOutcome {
    ScalarField u;
    std::size_t iterations = 0;
    double final_step = 0.0;
    bool converged = false;
};

/**
 * Trust-region cutting-plane method for the convex objective u -> lp + grad on the
 * admissible box. Each master problem minimizes the piecewise-linear model over the
 * trust region; cuts stay valid globally, so the method stops only when the model
 * over the whole box certifies the center within the tolerance.
 */
inline DescentOutcome bundle_descent(const MetricMeasureSpace& space, std::span<const std::size_t> set,
                                     const BesovParams& params, ScalarField start, const SolverConfig& config) {
    const std::size_t n = space.size();
    std::vector<bool> fixed(n, false);
    for (const auto x : set) fixed[x] = true;
    std::vector<std::size_t> free;
    for (std::size_t x = 0; x < n; ++x) {
        if (!fixed[x]) free.push_back(x);
    }
    const std::size_t m = free.size();
    DescentOutcome out;
    out.u = std::move(start);
    if (m == 0) {
        out.converged = true;
        return out;
    }
    struct Cut {
        std::vector<double> at;  ///< free coordinates
        double value;
        std::vector<double> slope;
    };
    auto make_cut = [&](const ScalarField& u) {
        const auto lin = linearize(space, u, params);
        Cut cut{std::vector<double>(m), lin.value, std::vector<double>(m)};
        for (std::size_t i = 0; i < m; ++i) {
            cut.at[i] = u[free[i]];
            cut.slope[i] = lin.grad[free[i]];
        }
        return cut;
    };
    std::vector<Cut> cuts{make_cut(out.u)};
    double center_value = cuts.front().value;
    double radius = 0.25;
    constexpr std::size_t kMaxCuts = 400;
    for (std::size_t it = 1; it <= config.max_iter; ++it) {
        out.iterations = it;
        std::vector<double> lo(m);
        std::vector<double> hi(m);
        for (std::size_t i = 0; i < m; ++i) {
            lo[i] = std::max(0.0, out.u[free[i]] - radius);
            hi[i] = std::min(1.0, out.u[free[i]] + radius);
        }
        // Variables: z (model value), then w_i = v_i - lo_i.
        lp::CoveringLp master(cuts.size() + m, m + 1);
        master.c[0] = 1.0;
        for (std::size_t c = 0; c < cuts.size(); ++c) {
            master.at(c, 0) = 1.0;
            double rhs = cuts[c].value;
            for (std::size_t i = 0; i < m; ++i) {
                master.at(c, i + 1) = -cuts[c].slope[i];
                rhs += cuts[c].slope[i] * (lo[i] - cuts[c].at[i]);
            }
            master.b[c] = rhs;
        }
        for (std::size_t i = 0; i < m; ++i) {
            master.at(cuts.size() + i, i + 1) = -1.0;
            master.b[cuts.size() + i] = -(hi[i] - lo[i]);
        }
        const auto sol = lp::solve(master);
        ScalarField trial = out.u;
        bool on_boundary = false;
        for (std::size_t i = 0; i < m; ++i) {
            trial[free[i]] = std::clamp(lo[i] + sol.x[i + 1], lo[i], hi[i]);
            const double step = std::abs(trial[free[i]] - out.u[free[i]]);
            if (step >= radius * (1.0 - 1e-9)) on_boundary = true;
        }
        const double predicted = center_value - sol.x[0];
        out.final_step = radius;
        if (predicted <= config.tol * std::max(center_value, 1e-300)) {
            if (radius >= 1.0) {
                out.converged = true;
                return out;
            }
            radius = std::min(1.0, 2.0 * radius);
            continue;
        }
        auto cut = make_cut(trial);
        const double actual = center_value - cut.value;
        if (actual >= 0.1 * predicted) {
            out.u = trial;
            center_value = cut.value;
            if (actual >= 0.5 * predicted && on_boundary) radius = std::min(1.0, 2.0 * radius);
        } else if (actual < 0.0) {
            radius = std::max(0.5 * radius, 1e-9);
        }
        cuts.push_back(std::move(cut));
        if (cuts.size() > kMaxCuts) cuts.erase(cuts.begin());
    }
    return out;
}

/// Coordinate descent on the admissible box (ascending index order); used when p < 1 or q < 1.
inline DescentOutcome coordinate_descent(const MetricMeasureSpace& space, std::span<const std::size_t> set,
                                         const BesovParams& params, ScalarField start, const SolverConfig& config) {
    std::vector<bool> fixed(space.size(), false);
    for (const auto x : set) fixed[x] = true;
    DescentOutcome out;
    out.u = std::move(start);
    double current = evaluate_admissible(space, out.u, params).objective;
    double step = 0.25;
    std::size_t evals = 0;
    while (step > 1e-6 && evals < config.max_iter) {
        bool improved = false;
        for (std::size_t x = 0; x < space.size(); ++x) {
            if (fixed[x]) continue;
            const double original = out.u[x];
            for (const double cand : {0.0, 1.0, original - step, original + step}) {
                const double v = std::clamp(cand, 0.0, 1.0);
                if (v == out.u[x]) continue;
                const double saved = out.u[x];
                out.u[x] = v;
                const double value = evaluate_admissible(space, out.u, params).objective;
                ++evals;
                if (value < current * (1.0 - 1e-14)) {
                    current = value;
                    improved = true;
                } else {
                    out.u[x] = saved;
                }
            }
        }
        ++out.iterations;
        if (!improved) step *= 0.5;
    }
    out.final_step = step;
    out.converged = step <= 1e-6;
    return out;
}

}  // namespace detail

/**
 * @brief Besov capacity of E: the least (||u||_{L^p} + ||(g_k)||_{l^q(L^p)})^p over
 * admissible u (0 <= u <= 1, u = 1 on E) and gradients of u.
 *
 * Every finite subset is open, so admissible functions need only equal 1 on E.
 * The returned value is always certified: it is recomputed from the returned u with
 * per-scale minimal gradients, and it never exceeds the value of any warm start.
 */
inline CapacityResult capacity(const MetricMeasureSpace& space, const CapacityProblem& problem) {
    problem.params.validate();
    problem.solver.validate();
    const auto set = normalize_set(problem.set, space.size());
    const auto& params = problem.params;
    const std::size_t n = space.size();
    CapacityResult result;
    result.lower_bound = space.measure(set);
    if (set.empty()) {
        if (!problem.solver.allow_empty) throw Error("capacity of empty set is 0 by convention");
        result.minimizer_u.assign(n, 0.0);
        result.minimizer_G = GradientSequence(n);
        result.start = "empty set";
        return result;
    }
    struct Start {
        std::string name;
        ScalarField u;
    };
    std::vector<Start> starts;
    if (problem.solver.restarts >= 1) starts.push_back({"constant one", ScalarField(n, 1.0)});
    if (problem.solver.restarts >= 2) {
        ScalarField chi(n, 0.0);
        for (const auto x : set) chi[x] = 1.0;
        starts.push_back({"indicator", chi});
    }
    if (problem.solver.restarts >= 3) {
        ContentConfig cc;
        cc.node_budget = 200000;
        const double theta = std::min(1.0, params.q / params.p);
        const auto cover = netrusov_content(space, set, Gauge::power(params.s * params.p), theta, 1.0,
                                            ContentMethod::automatic, cc);
        starts.push_back({"covering cutoff", cutoff_function(space, cover.covering)});
    }
    for (std::size_t i = 0; i < problem.warm_starts.size(); ++i) {
        if (problem.warm_starts[i].size() != n) throw Error("warm start has the wrong length");
        starts.push_back({"warm start " + std::to_string(i), problem.warm_starts[i]});
    }
    if (starts.empty()) starts.push_back({"constant one", ScalarField(n, 1.0)});

    const bool convex = params.p >= 1.0 && params.q >= 1.0;
    std::optional<AdmissibleValue> best;
    auto consider = [&](const std::string& name, ScalarField u) {
        u = detail::make_admissible(std::move(u), set);
        auto val = evaluate_admissible(space, u, params);
        if (!best || val.objective < best->objective) {
            best = std::move(val);
            result.minimizer_u = std::move(u);
            result.start = name;
        }
    };
    for (auto& st : starts) consider(st.name, st.u);

    if (params.p == 1.0 && params.q == 1.0) {
        consider("joint linear program", detail::solve_joint_linear(space, set, params.s));
        result.status = CapacityStatus::converged;
        result.iterations = 1;
    } else {
        const auto outcome = convex ? detail::bundle_descent(space, set, params, result.minimizer_u, problem.solver)
                                    : detail::coordinate_descent(space, set, params, result.minimizer_u, problem.solver);
        consider(convex ? "cutting-plane descent" : "coordinate descent", outcome.u);
        result.iterations = outcome.iterations;
        result.final_step = outcome.final_step;
        if (!convex || !best->norm.exact) {
            result.status = CapacityStatus::upper_bound_only;
        } else {
            result.status = outcome.converged ? CapacityStatus::converged : CapacityStatus::iteration_cap;
        }
    }
    result.value = best->value;
    result.lp_part = best->norm.lp_part;
    result.grad_part = best->norm.grad_part;
    result.minimizer_G = std::move(best->norm.gradient);
    return result;
}

inline CapacityResult capacity(const MetricMeasureSpace& space, std::span<const std::size_t> set,
                               const BesovParams& params, const SolverConfig& config = {},
                               std::vector<ScalarField> warm_starts = {}) {
    CapacityProblem problem{PointSet(set.begin(), set.end()), params, config, std::move(warm_starts)};
    return capacity(space, problem);
}

}  // namespace besov
