#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "besov/space.hpp"

namespace besov {

/**
 * @brief Increasing gauge function phi on (0, inf).
 *
 * power(d): phi(t) = t^d with d > 0.
 * table: log-log interpolation of strictly increasing samples, extended by the
 * power laws of the first and last segments.
 */
class Gauge {
public:
    static Gauge power(double d) {
        if (!(d > 0.0) || !std::isfinite(d)) throw Error("power gauge needs an exponent d > 0");
        Gauge g;
        g.exponent_ = d;
        return g;
    }

    static Gauge table(std::vector<double> t, std::vector<double> v) {
        if (t.size() < 2 || t.size() != v.size()) throw Error("table gauge needs at least two (t, phi) samples");
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!(t[i] > 0.0) || !(v[i] > 0.0)) throw Error("table gauge samples must be positive");
            if (i > 0 && !(t[i] > t[i - 1] && v[i] > v[i - 1])) throw Error("table gauge samples must be strictly increasing");
        }
        Gauge g;
        g.is_table_ = true;
        g.t_ = std::move(t);
        g.v_ = std::move(v);
        return g;
    }

    bool is_power() const { return !is_table_; }
    double exponent() const { return exponent_; }
    const std::vector<double>& t_samples() const { return t_; }
    const std::vector<double>& v_samples() const { return v_; }

    double operator()(double r) const {
        if (!is_table_) return std::pow(r, exponent_);
        const std::size_t last = t_.size() - 1;
        std::size_t seg = 0;
        if (r >= t_[last]) {
            seg = last - 1;
        } else if (r > t_[0]) {
            seg = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), r) - t_.begin()) - 1;
        }
        const double slope = segment_slope(seg);
        return v_[seg] * std::pow(r / t_[seg], slope);
    }

    /// Power-law exponent of phi near 0.
    double leading_exponent() const { return is_table_ ? segment_slope(0) : exponent_; }

    std::string describe() const {
        if (!is_table_) return "pow:" + format_double(exponent_);
        return "table:" + std::to_string(t_.size()) + " samples";
    }

private:
    double segment_slope(std::size_t seg) const {
        return std::log(v_[seg + 1] / v_[seg]) / std::log(t_[seg + 1] / t_[seg]);
    }

    bool is_table_ = false;
    double exponent_ = 1.0;
    std::vector<double> t_;
    std::vector<double> v_;
};

/// Admissibility of a gauge for the lower content bound: int_0^a phi(t)^{-1/p} t^{s-1} dt < inf.
struct GaugeCheck {
    bool admissible = false;
    double leading_exponent = 0.0;
    double integral = 0.0;  ///< value of the integral over (0, a]; inf when divergent
    std::string note;
};

/// The integral is evaluated exactly segment by segment, since each segment of phi is a power law.
inline GaugeCheck check_gauge(const Gauge& gauge, double s, double p, double a = 1.0) {
    GaugeCheck out;
    out.leading_exponent = gauge.leading_exponent();
    out.admissible = out.leading_exponent < s * p;
    out.note = out.admissible ? "leading exponent below s*p" : "leading exponent >= s*p: the integral diverges at 0";
    if (!out.admissible) {
        out.integral = kInfinity;
        return out;
    }
    // On a piece where phi(t) = c t^e the integrand is c^{-1/p} t^{s - 1 - e/p}.
    auto piece = [&](double lo, double hi, double c, double e) {
        const double beta = s - e / p;
        const double coef = std::pow(c, -1.0 / p);
        const double upper = std::pow(hi, beta) / beta;
        const double lower = lo > 0.0 ? std::pow(lo, beta) / beta : 0.0;
        return coef * (upper - lower);
    };
    if (gauge.is_power()) {
        out.integral = piece(0.0, a, 1.0, gauge.exponent());
        return out;
    }
    std::vector<double> knots{0.0};
    for (const double t : gauge.t_samples()) {
        if (t < a) knots.push_back(t);
    }
    knots.push_back(a);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i];
        const double hi = knots[i + 1];
        if (!(hi > lo)) continue;
        // phi is a single power law between consecutive knots.
        const double e = lo > 0.0 ? std::log(gauge(hi) / gauge(lo)) / std::log(hi / lo) : gauge.leading_exponent();
        const double c = gauge(hi) / std::pow(hi, e);
        out.integral += piece(lo, hi, c, e);
    }
    return out;
}

/**
 * @brief A finite family of balls; dyadic classes follow from the radii.
 *
 * Ball j lies in class i when 2^{-i} <= r_j < 2^{-i+1}.
 */
struct Covering {
    std::vector<Ball> balls;

    std::map<int, std::vector<std::size_t>> classes() const {
        std::map<int, std::vector<std::size_t>> out;
        for (std::size_t j = 0; j < balls.size(); ++j) out[radius_class(balls[j].radius)].push_back(j);
        return out;
    }
};

inline bool covers(const MetricMeasureSpace& space, const Covering& covering, std::span<const std::size_t> set) {
    for (const auto x : set) {
        bool hit = false;
        for (const auto& b : covering.balls) {
            if (space.d(b.center, x) < b.radius) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

namespace detail {

struct CostTerm {
    int cls;
    std::size_t center;
    double radius;
    double ratio;
};

inline std::vector<CostTerm> cost_terms(const MetricMeasureSpace& space, const Covering& covering, const Gauge& gauge) {
    std::vector<CostTerm> terms;
    for (const auto& b : covering.balls) {
        if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw Error("covering radii must be positive and finite");
        terms.push_back({radius_class(b.radius), b.center, b.radius, space.measure(b) / gauge(b.radius)});
    }
    std::sort(terms.begin(), terms.end(), [](const CostTerm& a, const CostTerm& b) {
        return std::tie(a.cls, a.center, a.radius) < std::tie(b.cls, b.center, b.radius);
    });
    return terms;
}

/**
 * (sum_i v_i^theta)^{1/theta}, evaluated as M (sum_i (v_i / M)^theta)^{1/theta} with
 * M = max v_i so that multiplying every v_i by a power of two scales the result exactly.
 */
inline double theta_sum(std::span<const double> v, double theta) {
    double total = 0.0;
    if (theta == 1.0) {
        for (const double x : v) total += x;
        return total;
    }
    double top = 0.0;
    for (const double x : v) top = std::max(top, x);
    if (!(top > 0.0)) return 0.0;
    for (const double x : v) {
        if (x > 0.0) total += std::pow(x / top, theta);
    }
    return top * std::pow(total, 1.0 / theta);
}

}  // namespace detail

/**
 * ( sum over classes i of ( sum_{j in I_i} mu(B_j) / phi(r_j) )^theta )^{1/theta}.
 * Terms are summed in (class, center, radius) order; for theta = 1 this is a
 * plain sequential sum, bit-identical to hausdorff_cost with a power gauge.
 */
inline double covering_cost(const MetricMeasureSpace& space, const Covering& covering, const Gauge& gauge, double theta) {
    if (!(theta > 0.0)) throw Error("theta must be positive");
    const auto terms = detail::cost_terms(space, covering, gauge);
    if (theta == 1.0) {
        double total = 0.0;
        for (const auto& t : terms) total += t.ratio;
        return total;
    }
    std::vector<double> inner;
    for (std::size_t i = 0; i < terms.size();) {
        inner.push_back(0.0);
        const int cls = terms[i].cls;
        for (; i < terms.size() && terms[i].cls == cls; ++i) inner.back() += terms[i].ratio;
    }
    return detail::theta_sum(inner, theta);
}

/// sum_j mu(B_j) / r_j^d.
inline double hausdorff_cost(const MetricMeasureSpace& space, const Covering& covering, double d) {
    const auto terms = detail::cost_terms(space, covering, Gauge::power(d));
    double total = 0.0;
    for (const auto& t : terms) total += t.ratio;
    return total;
}

enum class ContentMethod { exact, greedy, automatic };

inline std::string to_string(ContentMethod m) {
    switch (m) {
        case ContentMethod::exact: return "exact";
        case ContentMethod::greedy: return "greedy";
        case ContentMethod::automatic: return "auto";
    }
    return "?";
}

inline ContentMethod parse_content_method(const std::string& s) {
    if (s == "exact") return ContentMethod::exact;
    if (s == "greedy") return ContentMethod::greedy;
    if (s == "auto") return ContentMethod::automatic;
    throw Error("unknown content method: " + s);
}

struct ContentResult {
    double value = 0.0;
    Covering covering;
    ContentMethod method = ContentMethod::exact;  ///< exact only when the search finished within budget
    std::size_t candidates = 0;
    std::size_t nodes = 0;
    std::optional<double> gap;  ///< value / (lower bound) when a lower bound is known
    std::string note;
};

struct ContentConfig {
    std::size_t node_budget = 2000000;
};

namespace detail {

struct Candidate {
    Ball ball;
    int cls;
    double ratio;
    std::uint64_t mask;  ///< bit b set when E[b] lies in the ball
};

/**
 * Finite candidate family realizing the covering infimum.
 *
 * For a center x let 0 = delta_0 < delta_1 < ... be its distinct distances. Open
 * balls B(x, r) with r in (delta_a, delta_{a+1}] share one member set, and the
 * cost mu/phi(r) decreases in r, so within each dyadic class the best radius is
 * the largest one available in that interval. The top class uses min(delta_{a+1}, R);
 * lower classes use the largest float below 2^{-i+1}. Lower classes are kept only
 * while their ratio stays below `bound`, because a covering costs at least its
 * largest single ratio.
 */
inline std::vector<Candidate> candidate_balls(const MetricMeasureSpace& space, std::span<const std::size_t> set,
                                              const Gauge& gauge, double radius_cap, bool classless, double bound) {
    std::vector<Candidate> out;
    std::vector<int> index_in_set(space.size(), -1);
    for (std::size_t b = 0; b < set.size(); ++b) index_in_set[set[b]] = static_cast<int>(b);
    for (std::size_t x = 0; x < space.size(); ++x) {
        std::vector<double> levels;
        for (std::size_t y = 0; y < space.size(); ++y) levels.push_back(space.d(x, y));
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        for (std::size_t a = 0; a < levels.size(); ++a) {
            if (levels[a] >= radius_cap) break;
            const double top = a + 1 < levels.size() ? std::min(levels[a + 1], radius_cap) : radius_cap;
            if (!std::isfinite(top)) continue;
            std::uint64_t mask = 0;
            double mass = 0.0;
            for (std::size_t y = 0; y < space.size(); ++y) {
                if (space.d(x, y) <= levels[a]) {
                    mass += space.weight(y);
                    if (index_in_set[y] >= 0) mask |= std::uint64_t{1} << index_in_set[y];
                }
            }
            if (mask == 0) continue;
            double r = top;
            while (r > levels[a]) {
                const int cls = radius_class(r);
                const double ratio = mass / gauge(r);
                if (r != top && ratio > bound) break;
                out.push_back({Ball{x, r}, cls, ratio, mask});
                if (classless) break;
                r = std::nextafter(std::ldexp(1.0, -cls), 0.0);
            }
        }
    }
    return out;
}

/// Drops candidates beaten by another one covering a superset at no larger ratio in the same class
/// (in any class when costs are additive). Ties keep the lower index.
inline std::vector<Candidate> prune_dominated(std::vector<Candidate> cands, bool additive) {
    std::vector<bool> dead(cands.size(), false);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        for (std::size_t j = 0; j < cands.size() && !dead[i]; ++j) {
            if (i == j || dead[j]) continue;
            if (!additive && cands[i].cls != cands[j].cls) continue;
            const bool superset = (cands[j].mask & cands[i].mask) == cands[i].mask;
            if (!superset) continue;
            const bool better = cands[j].ratio < cands[i].ratio ||
                                (cands[j].ratio == cands[i].ratio && (cands[j].mask != cands[i].mask || j < i));
            if (better) dead[i] = true;
        }
    }
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!dead[i]) out.push_back(cands[i]);
    }
    return out;
}

class CostAccumulator {
public:
    CostAccumulator(const std::vector<Candidate>& cands, double theta) : theta_(theta) {
        for (const auto& c : cands) class_index_.try_emplace(c.cls, class_index_.size());
        sums_.assign(class_index_.size(), 0.0);
    }
    std::size_t slot(int cls) const { return class_index_.at(cls); }
    void add(std::size_t slot, double ratio) { sums_[slot] += ratio; }
    void restore(std::size_t slot, double saved) { sums_[slot] = saved; }
    double sum_at(std::size_t slot) const { return sums_[slot]; }
    double cost() const { return theta_sum(sums_, theta_); }
    /// Cost after adding `extra` to one class, leaving the state unchanged.
    double cost_with(std::size_t slot, double extra) {
        const double saved = sums_[slot];
        sums_[slot] += extra;
        const double c = cost();
        sums_[slot] = saved;
        return c;
    }

    /// Least cost after adding a total of `extra` spread over the classes in any way.
    double least_cost_adding(double extra) {
        if (theta_ == 1.0) return cost() + extra;
        if (theta_ < 1.0) {
            // Concave in the added amounts: the minimum sits at a single class.
            double best = kInfinity;
            for (std::size_t i = 0; i < sums_.size(); ++i) best = std::min(best, cost_with(i, extra));
            return best;
        }
        // Convex: raise the smallest sums to a common level.
        scratch_.assign(sums_.begin(), sums_.end());
        std::sort(scratch_.begin(), scratch_.end());
        double level = scratch_.back() + extra / static_cast<double>(scratch_.size());
        double below = 0.0;
        for (std::size_t i = 0; i < scratch_.size(); ++i) {
            below += scratch_[i];
            const double candidate = (below + extra) / static_cast<double>(i + 1);
            if (i + 1 == scratch_.size() || candidate <= scratch_[i + 1]) {
                level = candidate;
                break;
            }
        }
        for (auto& v : scratch_) v = std::max(v, level);
        return theta_sum(scratch_, theta_);
    }

private:
    double theta_;
    std::map<int, std::size_t> class_index_;
    std::vector<double> sums_;
    std::vector<double> scratch_;
};

inline Covering to_covering(const std::vector<Candidate>& cands, const std::vector<std::size_t>& chosen) {
    Covering cov;
    for (const auto i : chosen) cov.balls.push_back(cands[i].ball);
    return cov;
}

inline double chosen_cost(const std::vector<Candidate>& cands, const std::vector<std::size_t>& chosen, double theta) {
    CostAccumulator acc(cands, theta);
    for (const auto i : chosen) acc.add(acc.slot(cands[i].cls), cands[i].ratio);
    return acc.cost();
}

/// Greedy cover by newly covered points per marginal cost, followed by removal of redundant balls.
inline std::vector<std::size_t> greedy_cover(const std::vector<Candidate>& cands, std::uint64_t full, double theta) {
    std::vector<std::size_t> chosen;
    std::uint64_t covered = 0;
    while (covered != full) {
        const double base = chosen_cost(cands, chosen, theta);
        std::size_t best = cands.size();
        double best_score = -1.0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const auto fresh = std::popcount(cands[i].mask & ~covered);
            if (fresh == 0) continue;
            chosen.push_back(i);
            const double marginal = chosen_cost(cands, chosen, theta) - base;
            chosen.pop_back();
            const double score = marginal > 0.0 ? static_cast<double>(fresh) / marginal : kInfinity;
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        if (best == cands.size()) throw Error("candidate balls do not cover the set");
        chosen.push_back(best);
        covered |= cands[best].mask;
    }
    // Remove redundant balls, most expensive first.
    std::vector<std::size_t> order(chosen);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cands[a].ratio > cands[b].ratio; });
    for (const auto victim : order) {
        std::vector<std::size_t> rest;
        std::uint64_t mask = 0;
        for (const auto i : chosen) {
            if (i != victim) {
                rest.push_back(i);
                mask |= cands[i].mask;
            }
        }
        if (mask == full) chosen = std::move(rest);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

/// Depth-first branch and bound: branch on the uncovered point with the fewest covering candidates.
class CoverSearch {
public:
    CoverSearch(const std::vector<Candidate>& cands, std::size_t points, double theta, std::size_t budget)
        : cands_(cands), budget_(budget), acc_(cands, theta), by_point_(points), excluded_(cands.size(), 0) {
        for (std::size_t i = 0; i < cands.size(); ++i) {
            for (std::size_t b = 0; b < points; ++b) {
                if (cands[i].mask >> b & 1U) by_point_[b].push_back(i);
            }
        }
        for (auto& list : by_point_) {
            std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
                return std::tie(cands_[a].ratio, a) < std::tie(cands_[b].ratio, b);
            });
        }
        full_ = points == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << points) - 1;
    }

    void seed(const std::vector<std::size_t>& chosen, double cost) {
        best_ = chosen;
        best_cost_ = cost;
    }

    /// Returns false when the node budget ran out (the incumbent is then only an upper bound).
    bool run() {
        recurse(0);
        return nodes_ <= budget_;
    }

    const std::vector<std::size_t>& best() const { return best_; }
    double best_cost() const { return best_cost_; }
    std::size_t nodes() const { return nodes_; }

private:
    void recurse(std::uint64_t covered) {
        if (++nodes_ > budget_) return;
        const double cost = acc_.cost();
        if (cost >= best_cost_) return;
        if (covered == full_) {
            best_ = current_;
            best_cost_ = cost;
            return;
        }
        // Every uncovered point needs one more open ball, and the cost grows with each class sum.
        // Points no single open ball covers two of need separate balls: their cheapest ratios add up.
        std::size_t pick = by_point_.size();
        std::size_t fewest = cands_.size() + 1;
        std::uint64_t independent = 0;
        double forced = 0.0;
        for (std::size_t b = 0; b < by_point_.size(); ++b) {
            if (covered >> b & 1U) continue;
            std::size_t open = 0;
            double cheapest = kInfinity;
            double least_ratio = kInfinity;
            std::uint64_t reach = 0;
            seen_.clear();
            for (const auto i : by_point_[b]) {
                if (excluded_[i]) continue;
                ++open;
                reach |= cands_[i].mask;
                least_ratio = std::min(least_ratio, cands_[i].ratio);
                const auto slot = acc_.slot(cands_[i].cls);
                if (std::find(seen_.begin(), seen_.end(), slot) != seen_.end()) continue;
                seen_.push_back(slot);
                cheapest = std::min(cheapest, acc_.cost_with(slot, cands_[i].ratio));
            }
            if (cheapest >= best_cost_) return;
            if ((reach & independent) == 0) {
                independent |= std::uint64_t{1} << b;
                forced += least_ratio;
            }
            if (open < fewest) {
                fewest = open;
                pick = b;
            }
        }
        if (acc_.least_cost_adding(forced) >= best_cost_) return;
        // Once a candidate's subtree is done, later siblings never use it: each subset is visited once.
        std::vector<std::size_t> closed;
        for (const auto i : by_point_[pick]) {
            if (excluded_[i]) continue;
            const auto slot = acc_.slot(cands_[i].cls);
            const double saved = acc_.sum_at(slot);
            acc_.add(slot, cands_[i].ratio);
            current_.push_back(i);
            recurse(covered | cands_[i].mask);
            current_.pop_back();
            acc_.restore(slot, saved);
            excluded_[i] = 1;
            closed.push_back(i);
            if (nodes_ > budget_) break;
        }
        for (const auto i : closed) excluded_[i] = 0;
    }

    const std::vector<Candidate>& cands_;
    std::size_t budget_;
    CostAccumulator acc_;
    std::vector<std::vector<std::size_t>> by_point_;
    std::vector<char> excluded_;
    std::vector<std::size_t> seen_;
    std::uint64_t full_ = 0;
    std::vector<std::size_t> current_;
    std::vector<std::size_t> best_;
    double best_cost_ = kInfinity;
    std::size_t nodes_ = 0;
};

inline ContentResult optimize_covering(const MetricMeasureSpace& space, std::span<const std::size_t> raw_set,
                                       const Gauge& gauge, double theta, double radius_cap, ContentMethod method,
                                       bool classless, const ContentConfig& config) {
    if (!(theta > 0.0)) throw Error("theta must be positive");
    if (!(radius_cap > 0.0)) throw Error("R must be positive");
    const auto set = normalize_set(raw_set, space.size());
    if (set.empty()) throw Error("content of an empty set");
    if (set.size() > 64) throw Error("content search supports at most 64 target points");
    ContentResult out;
    if (!std::isfinite(radius_cap)) {
        // A single ball containing everything has cost mu(X)/phi(r) -> 0 as r grows.
        out.value = 0.0;
        out.method = ContentMethod::exact;
        out.note = "R = inf: the infimum 0 is approached by ever larger balls and not attained";
        return out;
    }
    const std::uint64_t full = set.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << set.size()) - 1;
    auto cands = candidate_balls(space, set, gauge, radius_cap, true, kInfinity);
    const bool additive = theta == 1.0;
    // Upper bound from the greedy cover over top-of-class candidates, then the full family below that bound.
    const auto rough = greedy_cover(prune_dominated(cands, additive), full, theta);
    // Slack absorbs rounding in (r^theta)^{1/theta}.
    const double bound = chosen_cost(prune_dominated(cands, additive), rough, theta) * (1.0 + 1e-9);
    if (!classless) cands = candidate_balls(space, set, gauge, radius_cap, false, bound);
    std::erase_if(cands, [&](const Candidate& c) { return c.ratio > bound; });
    cands = prune_dominated(std::move(cands), additive);
    out.candidates = cands.size();

    const auto greedy = greedy_cover(cands, full, theta);
    const double greedy_cost = chosen_cost(cands, greedy, theta);
    std::vector<std::size_t> chosen = greedy;
    out.method = ContentMethod::greedy;
    if (method != ContentMethod::greedy) {
        CoverSearch search(cands, set.size(), theta, config.node_budget);
        search.seed(greedy, greedy_cost);
        const bool finished = search.run();
        out.nodes = search.nodes();
        chosen = search.best();
        if (finished) {
            out.method = ContentMethod::exact;
        } else if (method == ContentMethod::exact) {
            throw Error("exact covering search exceeded its node budget of " + std::to_string(config.node_budget));
        } else {
            out.note = "node budget exhausted; best covering found is an upper bound";
        }
    }
    out.covering = to_covering(cands, chosen);
    return out;
}

}  // namespace detail

/**
 * @brief Netrusov-Hausdorff content of E for gauge phi, exponent theta, radii <= R.
 *
 * The covering infimum is taken over the finite candidate family of
 * detail::candidate_balls, which attains it (see there). The reported value is
 * covering_cost of the returned covering.
 */
inline ContentResult netrusov_content(const MetricMeasureSpace& space, std::span<const std::size_t> set,
                                      const Gauge& gauge, double theta, double radius_cap,
                                      ContentMethod method = ContentMethod::automatic, const ContentConfig& config = {}) {
    auto out = detail::optimize_covering(space, set, gauge, theta, radius_cap, method, false, config);
    if (!out.covering.balls.empty()) out.value = covering_cost(space, out.covering, gauge, theta);
    return out;
}

/// Codimension-d Hausdorff content: coverings by balls of radius <= R with cost sum mu(B)/r^d.
inline ContentResult hausdorff_content(const MetricMeasureSpace& space, std::span<const std::size_t> set, double d,
                                       double radius_cap, ContentMethod method = ContentMethod::automatic,
                                       const ContentConfig& config = {}) {
    auto out = detail::optimize_covering(space, set, Gauge::power(d), 1.0, radius_cap, method, true, config);
    if (!out.covering.balls.empty()) out.value = hausdorff_cost(space, out.covering, d);
    return out;
}

}  // namespace besov
