#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "besov/lp.hpp"
#include "besov/space.hpp"

namespace besov {

/// Smoothness, integrability and summability exponents plus the median level.
struct BesovParams {
    double s = 0.5;
    double p = 1.0;
    double q = 1.0;  ///< kInfinity selects the sup norm over scales
    double s_prime = 0.25;
    double gamma = 0.5;

    void validate() const {
        if (!(s > 0.0) || !std::isfinite(s)) throw Error("s must be positive");
        if (!(p > 0.0) || !std::isfinite(p)) throw Error("p must lie in (0, inf)");
        if (!(q > 0.0)) throw Error("q must lie in (0, inf]");
        if (!(s_prime > 0.0 && s_prime < s)) throw Error("s' must lie in (0, s)");
        if (!(gamma > 0.0 && gamma <= 0.5)) throw Error("gamma must lie in (0, 1/2]");
    }
    void require_fractional() const {
        if (!(s < 1.0)) throw Error("this construction requires 0 < s < 1");
    }
    double p_tilde() const { return std::min(1.0, p); }
};

/**
 * @brief A fractional s-gradient: one nonnegative field per dyadic scale.
 *
 * Scales that are not stored are identically zero.
 */
class GradientSequence {
public:
    GradientSequence() = default;
    explicit GradientSequence(std::size_t n) : n_(n) {}

    std::size_t size() const { return n_; }
    const std::map<int, ScalarField>& scales() const { return fields_; }

    /// Field at scale k, created as zeros when absent.
    ScalarField& at(int k) {
        auto [it, inserted] = fields_.try_emplace(k);
        if (inserted) it->second.assign(n_, 0.0);
        return it->second;
    }
    const ScalarField* find(int k) const {
        const auto it = fields_.find(k);
        return it == fields_.end() ? nullptr : &it->second;
    }
    double value(int k, std::size_t x) const {
        const auto* f = find(k);
        return f ? (*f)[x] : 0.0;
    }
    void set(int k, ScalarField field) {
        if (field.size() != n_) throw Error("gradient field has the wrong length");
        fields_[k] = std::move(field);
    }
    bool empty() const { return fields_.empty(); }

private:
    std::size_t n_ = 0;
    std::map<int, ScalarField> fields_;
};

inline double pow_nonneg(double x, double p) { return x <= 0.0 ? 0.0 : std::pow(x, p); }

struct GradientViolation {
    std::size_t i = 0;
    std::size_t j = 0;
    int k = 0;
    double slack = 0.0;  ///< |u(i)-u(j)| - d^s (g_k(i) + g_k(j)), positive when violated
};

inline constexpr double kGradientTolerance = 1e-12;

/// Pairs (i, j) at scale k violating |u(i)-u(j)| <= d(i,j)^s (g_k(i) + g_k(j)).
/// The exceptional null set is empty here: every point has positive weight.
inline std::vector<GradientViolation> check_gradient(const MetricMeasureSpace& space, std::span<const double> u,
                                                     const GradientSequence& g, double s) {
    std::vector<GradientViolation> out;
    for (const auto& [k, pairs] : space.pairs_by_scale()) {
        const auto* field = g.find(k);
        for (const auto& pr : pairs) {
            const double diff = std::abs(u[pr.i] - u[pr.j]);
            const double bound = field ? std::pow(pr.d, s) * ((*field)[pr.i] + (*field)[pr.j]) : 0.0;
            if (diff > bound + kGradientTolerance * std::max(1.0, diff)) out.push_back({pr.i, pr.j, k, diff - bound});
        }
    }
    for (const auto& [k, field] : g.scales()) {
        for (std::size_t x = 0; x < field.size(); ++x) {
            if (!(field[x] >= 0.0)) out.push_back({x, x, k, -field[x]});
        }
    }
    return out;
}

/// g_k(x) = 1/2 max |u(x)-u(y)| / d(x,y)^s over y at scale k from x.
inline GradientSequence canonical_gradient(const MetricMeasureSpace& space, std::span<const double> u, double s) {
    GradientSequence g(space.size());
    for (const auto& [k, pairs] : space.pairs_by_scale()) {
        bool any = false;
        ScalarField field(space.size(), 0.0);
        for (const auto& pr : pairs) {
            const double quotient = std::abs(u[pr.i] - u[pr.j]) / std::pow(pr.d, s);
            if (quotient > 0.0) any = true;
            field[pr.i] = std::max(field[pr.i], 0.5 * quotient);
            field[pr.j] = std::max(field[pr.j], 0.5 * quotient);
        }
        if (any) g.set(k, std::move(field));
    }
    return g;
}

namespace detail {

/// One scale of the minimal-gradient problem in local coordinates:
/// minimize sum_x w_x g_x^p subject to g_a + g_b >= Q_e, g >= 0.
struct ScaleProblem {
    std::vector<std::size_t> points;  ///< global indices of constrained points
    std::vector<double> weight;
    struct Edge {
        std::size_t a, b;  ///< local indices
        double quotient;
        std::size_t pair_index;  ///< position in space.pairs_at(k)
    };
    std::vector<Edge> edges;
};

inline ScaleProblem build_scale_problem(const MetricMeasureSpace& space, std::span<const double> u, double s, int k) {
    ScaleProblem prob;
    std::map<std::size_t, std::size_t> local;
    auto index_of = [&](std::size_t x) {
        auto [it, inserted] = local.try_emplace(x, prob.points.size());
        if (inserted) {
            prob.points.push_back(x);
            prob.weight.push_back(space.weight(x));
        }
        return it->second;
    };
    const auto pairs = space.pairs_at(k);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
        const auto& pr = pairs[e];
        const double quotient = std::abs(u[pr.i] - u[pr.j]) / std::pow(pr.d, s);
        if (quotient > 0.0) {
            const auto a = index_of(pr.i);
            const auto b = index_of(pr.j);
            prob.edges.push_back({a, b, quotient, e});
        }
    }
    return prob;
}

struct ScaleSolution {
    std::vector<double> g;     ///< local values
    std::vector<double> dual;  ///< one multiplier per edge: sensitivity of the objective to Q_e
    double objective = 0.0;    ///< sum w g^p
    bool exact = true;
};

inline double scale_objective(const ScaleProblem& prob, std::span<const double> g, double p) {
    double total = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) total += prob.weight[x] * pow_nonneg(g[x], p);
    return total;
}

/// Raise g until every constraint holds; one pass suffices since raising never breaks a constraint.
inline void repair(const ScaleProblem& prob, std::vector<double>& g, double p) {
    for (const auto& e : prob.edges) {
        const double deficit = e.quotient - (g[e.a] + g[e.b]);
        if (deficit <= 0.0) continue;
        const double cost_a = prob.weight[e.a] * (pow_nonneg(g[e.a] + deficit, p) - pow_nonneg(g[e.a], p));
        const double cost_b = prob.weight[e.b] * (pow_nonneg(g[e.b] + deficit, p) - pow_nonneg(g[e.b], p));
        if (cost_a <= cost_b) {
            g[e.a] += deficit;
        } else {
            g[e.b] += deficit;
        }
        // Guard against rounding leaving the sum a hair short.
        while (g[e.a] + g[e.b] < e.quotient) g[e.a] = std::nextafter(g[e.a], kInfinity);
    }
}

/// Lower each coordinate to the least value its constraints allow (decreases the objective).
inline void tighten(const ScaleProblem& prob, std::vector<double>& g) {
    for (std::size_t x = 0; x < g.size(); ++x) {
        double need = 0.0;
        for (const auto& e : prob.edges) {
            if (e.a == x) need = std::max(need, e.quotient - g[e.b]);
            if (e.b == x) need = std::max(need, e.quotient - g[e.a]);
        }
        g[x] = std::min(g[x], need);
    }
}

inline ScaleSolution solve_linear(const ScaleProblem& prob) {
    const std::size_t m = prob.points.size();
    lp::CoveringLp lp(prob.edges.size(), m);
    for (std::size_t e = 0; e < prob.edges.size(); ++e) {
        lp.at(e, prob.edges[e].a) = 1.0;
        lp.at(e, prob.edges[e].b) = 1.0;
        lp.b[e] = prob.edges[e].quotient;
    }
    for (std::size_t x = 0; x < m; ++x) lp.c[x] = prob.weight[x];
    auto sol = lp::solve(lp);
    ScaleSolution out;
    out.g = std::move(sol.x);
    repair(prob, out.g, 1.0);
    out.dual = std::move(sol.dual);
    out.objective = scale_objective(prob, out.g, 1.0);
    return out;
}

/// Stationary g for a given multiplier mass S at a point: (S / (p w))^(1/(p-1)).
inline double response(double mass, double w, double p) {
    if (mass <= 0.0) return 0.0;
    return p == 2.0 ? mass / (2.0 * w) : std::pow(mass / (p * w), 1.0 / (p - 1.0));
}

inline constexpr std::size_t kMaxSweeps = 100000;
inline constexpr std::size_t kStallSweeps = 2000;
inline constexpr double kStallTolerance = 1e-12;
inline constexpr double kStallGap = 1e-6;

/**
 * Exact coordinate ascent on the concave dual for p > 1. Each edge multiplier is
 * maximized in closed form (p = 2) or by safeguarded bisection. The returned
 * primal iterate is repaired to feasibility; the duality gap certifies it. Stops at a
 * relative gap of rtol, or once the primal has stalled for kStallSweeps with gap below kStallGap.
 */
inline ScaleSolution solve_convex(const ScaleProblem& prob, double p, double rtol = 1e-11) {
    const std::size_t m = prob.points.size();
    std::vector<double> y(prob.edges.size(), 0.0);
    std::vector<double> mass(m, 0.0);
    ScaleSolution best;
    best.objective = kInfinity;
    std::size_t last_gain = 0;
    auto primal_from_dual = [&]() {
        std::vector<double> g(m);
        for (std::size_t x = 0; x < m; ++x) g[x] = response(mass[x], prob.weight[x], p);
        return g;
    };
    for (std::size_t sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        for (std::size_t e = 0; e < prob.edges.size(); ++e) {
            const auto& edge = prob.edges[e];
            const double wa = prob.weight[edge.a];
            const double wb = prob.weight[edge.b];
            const double base_a = mass[edge.a] - y[e];
            const double base_b = mass[edge.b] - y[e];
            auto excess = [&](double t) {
                return response(base_a + t, wa, p) + response(base_b + t, wb, p) - edge.quotient;
            };
            double t = 0.0;
            if (excess(0.0) < 0.0) {
                if (p == 2.0) {
                    // Linear response: solve (base_a + t)_+/(2wa) + (base_b + t)_+/(2wb) = Q.
                    const double ta = std::max(0.0, -base_a);
                    const double tb = std::max(0.0, -base_b);
                    const double lo = std::max(ta, tb);
                    const double at_lo = excess(lo);
                    if (at_lo >= 0.0) {
                        // Only one endpoint is active below lo.
                        t = ta < tb ? 2.0 * wa * edge.quotient - base_a : 2.0 * wb * edge.quotient - base_b;
                    } else {
                        const double slope = 1.0 / (2.0 * wa) + 1.0 / (2.0 * wb);
                        t = lo - at_lo / slope;
                    }
                    t = std::max(t, 0.0);
                } else {
                    double lo = 0.0;
                    double hi = std::max(p * wa * std::pow(edge.quotient, p - 1.0) - base_a, 0.0);
                    while (excess(hi) < 0.0) hi = 2.0 * hi + 1e-300;
                    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        (excess(mid) < 0.0 ? lo : hi) = mid;
                    }
                    t = hi;
                }
            }
            mass[edge.a] = base_a + t;
            mass[edge.b] = base_b + t;
            y[e] = t;
        }
        if (sweep % 5 == 0 || sweep == kMaxSweeps) {
            auto g = primal_from_dual();
            double dual_value = 0.0;
            for (std::size_t e = 0; e < y.size(); ++e) dual_value += y[e] * prob.edges[e].quotient;
            dual_value -= (p - 1.0) * scale_objective(prob, g, p);
            repair(prob, g, p);
            const double primal = scale_objective(prob, g, p);
            if (primal < best.objective) {
                if (primal < best.objective * (1.0 - kStallTolerance)) last_gain = sweep;
                best.g = g;
                best.objective = primal;
                best.dual = y;
            }
            const double gap = primal - dual_value;
            if (gap <= rtol * primal) return best;
            // The dual can creep long after the primal has settled.
            if (sweep - last_gain >= kStallSweeps && gap <= kStallGap * primal) return best;
        }
    }
    best.exact = false;
    return best;
}

/// p < 1: the problem is concave, so return the best of several tightened feasible points.
inline ScaleSolution solve_nonconvex(const ScaleProblem& prob, double p) {
    const std::size_t m = prob.points.size();
    std::vector<std::vector<double>> starts;
    std::vector<double> canon(m, 0.0);
    for (const auto& e : prob.edges) {
        canon[e.a] = std::max(canon[e.a], 0.5 * e.quotient);
        canon[e.b] = std::max(canon[e.b], 0.5 * e.quotient);
    }
    starts.push_back(canon);
    auto linear = solve_linear(prob);
    starts.push_back(linear.g);
    ScaleSolution best;
    best.objective = kInfinity;
    for (auto& g : starts) {
        tighten(prob, g);
        repair(prob, g, p);
        const double obj = scale_objective(prob, g, p);
        if (obj < best.objective) {
            best.g = g;
            best.objective = obj;
        }
    }
    best.dual = linear.dual;
    best.exact = false;
    return best;
}

inline ScaleSolution solve_scale(const ScaleProblem& prob, double p) {
    if (prob.edges.empty()) {
        ScaleSolution out;
        out.g.assign(prob.points.size(), 0.0);
        return out;
    }
    if (p == 1.0) return solve_linear(prob);
    if (p > 1.0) return solve_convex(prob, p);
    return solve_nonconvex(prob, p);
}

}  // namespace detail

/// Minimizer of the weighted L^p cost among fields feasible at scale k.
struct MinimalGradient {
    ScalarField field;
    double objective = 0.0;  ///< sum_x w_x g(x)^p
    bool exact = true;       ///< false for p < 1, where the value is only an upper bound
};

/// Thrown when the convex per-scale solve hits its sweep budget; carries the best feasible iterate.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, MinimalGradient best) : Error(what), best_(std::move(best)) {}
    const MinimalGradient& best() const { return best_; }

private:
    MinimalGradient best_;
};

inline MinimalGradient minimal_gradient(const MetricMeasureSpace& space, std::span<const double> u, double s, double p,
                                        int k) {
    const auto prob = detail::build_scale_problem(space, u, s, k);
    const auto sol = detail::solve_scale(prob, p);
    MinimalGradient out;
    out.field.assign(space.size(), 0.0);
    for (std::size_t x = 0; x < prob.points.size(); ++x) out.field[prob.points[x]] = sol.g[x];
    out.objective = sol.objective;
    out.exact = sol.exact;
    if (!sol.exact && p > 1.0) throw NonConvergence("minimal gradient solver did not converge", out);
    return out;
}

/// Per-scale minimal gradients over every active scale.
inline GradientSequence minimal_gradient_sequence(const MetricMeasureSpace& space, std::span<const double> u, double s,
                                                  double p, bool* exact = nullptr) {
    GradientSequence g(space.size());
    bool all_exact = true;
    for (const auto k : space.active_scales()) {
        auto mg = minimal_gradient(space, u, s, p, k);
        all_exact = all_exact && mg.exact;
        if (mg.objective > 0.0) g.set(k, std::move(mg.field));
    }
    if (exact) *exact = all_exact;
    return g;
}

inline double lp_norm(const MetricMeasureSpace& space, std::span<const double> f, double p) {
    if (p == kInfinity) {
        double m = 0.0;
        for (const double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    double total = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) total += space.weight(x) * pow_nonneg(std::abs(f[x]), p);
    return pow_nonneg(total, 1.0 / p);
}

/// l^q over scales of the per-scale L^p norms.
inline double lq_norm(std::span<const double> terms, double q) {
    if (q == kInfinity) {
        double m = 0.0;
        for (const double t : terms) m = std::max(m, t);
        return m;
    }
    double total = 0.0;
    for (const double t : terms) total += pow_nonneg(t, q);
    return pow_nonneg(total, 1.0 / q);
}

inline double mixed_norm(const MetricMeasureSpace& space, const GradientSequence& g, double p, double q) {
    std::vector<double> terms;
    for (const auto& [k, field] : g.scales()) terms.push_back(lp_norm(space, field, p));
    return lq_norm(terms, q);
}

enum class GradientMode { canonical, minimal };

struct BesovNorm {
    double lp_part = 0.0;
    double grad_part = 0.0;
    double total = 0.0;
    bool exact = true;
    GradientSequence gradient;
};

inline BesovNorm besov_norm(const MetricMeasureSpace& space, std::span<const double> u, const BesovParams& params,
                            GradientMode mode) {
    BesovNorm out;
    out.lp_part = lp_norm(space, u, params.p);
    if (mode == GradientMode::canonical) {
        out.gradient = canonical_gradient(space, u, params.s);
        out.exact = false;
    } else {
        out.gradient = minimal_gradient_sequence(space, u, params.s, params.p, &out.exact);
    }
    out.grad_part = mixed_norm(space, out.gradient, params.p, params.q);
    out.total = out.lp_part + out.grad_part;
    return out;
}

/// Per-scale pointwise maximum: a gradient of both max(u, v) and min(u, v).
inline GradientSequence max_gradient(const GradientSequence& gu, const GradientSequence& gv) {
    if (gu.size() != gv.size()) throw Error("gradients live on different spaces");
    GradientSequence out = gu;
    for (const auto& [k, field] : gv.scales()) {
        auto& target = out.at(k);
        for (std::size_t x = 0; x < field.size(); ++x) target[x] = std::max(target[x], field[x]);
    }
    return out;
}

/// Per-scale pointwise supremum of a family: a gradient of the pointwise sup of the functions.
inline GradientSequence sup_gradient(std::span<const GradientSequence> family) {
    if (family.empty()) throw Error("sup of an empty gradient family");
    GradientSequence out = family.front();
    for (std::size_t i = 1; i < family.size(); ++i) out = max_gradient(out, family[i]);
    return out;
}

/**
 * g_k = ( sum_{j >= k-2} 2^{(k-j) s' p~} h_j^p )^{1/p} with p~ = min(1, p),
 * evaluated on the scale window of the space.
 */
inline GradientSequence derived_poincare_gradient(const MetricMeasureSpace& space, const GradientSequence& h,
                                                  const BesovParams& params) {
    GradientSequence out(space.size());
    if (h.empty()) return out;
    auto [lo, hi] = space.scale_window();
    lo = std::min(lo, h.scales().begin()->first);
    hi = std::max(hi, h.scales().rbegin()->first);
    const double exponent = params.s_prime * params.p_tilde();
    for (int k = lo; k <= hi; ++k) {
        ScalarField sum(space.size(), 0.0);
        bool any = false;
        for (auto it = h.scales().lower_bound(k - 2); it != h.scales().end(); ++it) {
            const double coef = std::exp2(static_cast<double>(k - it->first) * exponent);
            for (std::size_t x = 0; x < sum.size(); ++x) {
                const double term = coef * pow_nonneg(it->second[x], params.p);
                sum[x] += term;
                any = any || term > 0.0;
            }
        }
        if (!any) continue;
        for (auto& v : sum) v = pow_nonneg(v, 1.0 / params.p);
        out.set(k, std::move(sum));
    }
    return out;
}

/// Explicit constant C(a, b) with sum_k (sum_j a^{-|j-k|} c_j)^b <= C sum_j c_j^b.
inline double summing_constant(double a, double b) {
    if (!(a > 1.0) || !(b > 0.0)) throw Error("summing constant needs a > 1 and b > 0");
    const double m = std::min(1.0, b);
    const double r = std::pow(a, -m);
    return std::pow((1.0 + r) / (1.0 - r), b / m);
}

/**
 * Bound c in ||derived gradient||_{l^q(L^p)} <= c ||h||_{l^q(L^p)} for q < inf.
 * The weights 2^{(k-j) s' p~} on j >= k-2 are at most a^4 a^{-|j-k|} with a = 2^{s' p~};
 * the summing constant with b = q/p finishes the estimate.
 */
inline double derived_gradient_norm_constant(const BesovParams& params) {
    const double a = std::exp2(params.s_prime * params.p_tilde());
    const double b = params.q / params.p;
    return std::pow(std::pow(a, 4.0 * b) * summing_constant(a, b), 1.0 / params.q);
}

inline double lipschitz_constant(const MetricMeasureSpace& space, std::span<const double> phi) {
    double best = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            best = std::max(best, std::abs(phi[i] - phi[j]) / space.d(i, j));
        }
    }
    return best;
}

inline void require_lipschitz(const MetricMeasureSpace& space, std::span<const double> phi, double lip) {
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            if (std::abs(phi[i] - phi[j]) > lip * space.d(i, j) * (1.0 + 1e-12) + 1e-15) {
                throw Error("function is not " + format_double(lip) + "-Lipschitz at pair (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
            }
        }
    }
}

struct LeibnizGradients {
    GradientSequence rho;
    GradientSequence h;
};

/**
 * Two gradients of the product u * phi for a bounded L-Lipschitz phi:
 *   rho_k = (g_k |phi|_inf + 2^{k(s-1)} L |u|) on supp phi
 *   h_k   = (g_k + 2^{sk+2} |u|) |phi|_inf    on supp phi
 * Requires 0 < s < 1.
 */
inline LeibnizGradients leibniz_gradients(const MetricMeasureSpace& space, std::span<const double> u,
                                          const GradientSequence& gu, std::span<const double> phi, double lip, double s) {
    if (!(s > 0.0 && s < 1.0)) throw Error("product gradients require 0 < s < 1");
    require_lipschitz(space, phi, lip);
    const std::size_t n = space.size();
    double sup = 0.0;
    for (const double v : phi) sup = std::max(sup, std::abs(v));
    LeibnizGradients out{GradientSequence(n), GradientSequence(n)};
    if (sup == 0.0) return out;
    auto [lo, hi] = space.scale_window();
    if (!gu.empty()) {
        lo = std::min(lo, gu.scales().begin()->first);
        hi = std::max(hi, gu.scales().rbegin()->first);
    }
    for (int k = lo; k <= hi; ++k) {
        ScalarField rho(n, 0.0);
        ScalarField h(n, 0.0);
        bool any = false;
        const double lip_coef = std::exp2(static_cast<double>(k) * (s - 1.0)) * lip;
        const double sup_coef = std::exp2(s * static_cast<double>(k) + 2.0);
        for (std::size_t x = 0; x < n; ++x) {
            if (phi[x] == 0.0) continue;
            const double g = gu.value(k, x);
            rho[x] = g * sup + lip_coef * std::abs(u[x]);
            h[x] = (g + sup_coef * std::abs(u[x])) * sup;
            any = any || rho[x] > 0.0 || h[x] > 0.0;
        }
        if (!any) continue;
        out.rho.set(k, std::move(rho));
        out.h.set(k, std::move(h));
    }
    return out;
}

struct NormBound {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

/// Besov norm of a Lipschitz function against (1 + |phi|_inf)(1 + L^s) mu(F)^{1/p}.
inline NormBound lipschitz_norm_bound(const MetricMeasureSpace& space, std::span<const double> phi, double lip,
                                      std::span<const std::size_t> support, const BesovParams& params) {
    params.require_fractional();
    require_lipschitz(space, phi, lip);
    std::vector<bool> in_support(space.size(), false);
    for (const auto x : support) in_support[x] = true;
    double sup = 0.0;
    for (std::size_t x = 0; x < space.size(); ++x) {
        if (phi[x] != 0.0 && !in_support[x]) throw Error("function is not supported in the given set");
        sup = std::max(sup, std::abs(phi[x]));
    }
    NormBound out;
    out.lhs = besov_norm(space, phi, params, GradientMode::minimal).total;
    out.rhs = (1.0 + sup) * (1.0 + std::pow(lip, params.s)) * std::pow(space.measure(support), 1.0 / params.p);
    return out;
}

struct SummingSides {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    bool holds() const { return lhs <= constant * rhs * (1.0 + 1e-12); }
};

/// Both sides of the summing inequality for a finitely supported c (c[0] sits at index 0).
/// The outer sum runs over the support widened until the geometric tail is below 1e-17 relative.
inline SummingSides summing_lemma_sides(double a, double b, std::span<const double> c) {
    SummingSides out;
    out.constant = summing_constant(a, b);
    for (const double v : c) {
        if (v < 0.0) throw Error("summing inequality needs nonnegative terms");
        out.rhs += pow_nonneg(v, b);
    }
    const auto pad = static_cast<long>(std::ceil(40.0 / std::log10(a)));
    const long len = static_cast<long>(c.size());
    for (long k = -pad; k < len + pad; ++k) {
        double inner = 0.0;
        for (long j = 0; j < len; ++j) inner += std::pow(a, -static_cast<double>(std::abs(j - k))) * c[static_cast<std::size_t>(j)];
        out.lhs += pow_nonneg(inner, b);
    }
    return out;
}

}  // namespace besov
