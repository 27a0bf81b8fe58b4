#pragma once

#include <functional>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "besov/space.hpp"

// Brute-force references. Nothing here calls the gradient, capacity or content
// solvers: per-scale minima come from vertex or active-set enumeration and
// coverings from exhaustive subset search.

namespace besov::oracle {

/// The instance is larger than the configured exhaustive-search caps.
class CapExceeded : public Error {
public:
    using Error::Error;
};

struct OracleConfig {
    double u_grid_step = 1.0 / 64.0;
    std::size_t max_points = 4;
    std::size_t max_candidates = 20;

    void validate() const {
        if (!(u_grid_step > 0.0 && u_grid_step <= 1.0)) throw Error("oracle grid step must lie in (0, 1]");
        if (max_points < 1 || max_candidates < 1) throw Error("oracle caps must be >= 1");
    }
};

namespace detail {

/// Solves a dense k-by-k system in place; false when (numerically) singular.
inline bool solve_dense(std::vector<double> a, std::vector<double> b, std::size_t k, std::vector<double>& x) {
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::abs(a[r * k + col]) > std::abs(a[piv * k + col])) piv = r;
        }
        if (std::abs(a[piv * k + col]) < 1e-12) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < k; ++c) std::swap(a[col * k + c], a[piv * k + c]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = a[r * k + col] / a[col * k + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
            b[r] -= f * b[col];
        }
    }
    x.assign(k, 0.0);
    for (std::size_t r = 0; r < k; ++r) x[r] = b[r] / a[r * k + r];
    return true;
}

struct Edge {
    std::size_t a, b;
    double d;
};

/// One dyadic scale with its pairs, prepared for repeated exact evaluation.
struct ScaleOracle {
    std::vector<Edge> edges;
    std::vector<double> weight;  ///< global weights
    // p = 1: vertices of { y >= 0 : sum_{e at x} y_e <= w_x }; the minimum equals max_v v.Q.
    std::vector<std::vector<double>> vertices;
    // p = 2: for each edge subset with a nonsingular KKT matrix, the inverse of that matrix.
    struct ActiveSet {
        std::vector<std::size_t> members;
        std::vector<double> inverse;
    };
    std::vector<ActiveSet> active_sets;

    void prepare_linear(std::size_t n) {
        const std::size_t m = edges.size();
        // Constraint rows: y_e >= 0 (as -y_e <= 0) and point rows.
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (std::size_t e = 0; e < m; ++e) {
            std::vector<double> row(m, 0.0);
            row[e] = -1.0;
            rows.push_back(row);
            rhs.push_back(0.0);
        }
        for (std::size_t x = 0; x < n; ++x) {
            std::vector<double> row(m, 0.0);
            bool any = false;
            for (std::size_t e = 0; e < m; ++e) {
                if (edges[e].a == x || edges[e].b == x) {
                    row[e] = 1.0;
                    any = true;
                }
            }
            if (!any) continue;
            rows.push_back(row);
            rhs.push_back(weight[x]);
        }
        const std::size_t total = rows.size();
        std::vector<std::size_t> pick(m);
        // Every m-subset of rows taken as tight.
        std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t depth) {
            if (depth == m) {
                std::vector<double> a(m * m);
                std::vector<double> b(m);
                for (std::size_t r = 0; r < m; ++r) {
                    for (std::size_t c = 0; c < m; ++c) a[r * m + c] = rows[pick[r]][c];
                    b[r] = rhs[pick[r]];
                }
                std::vector<double> y;
                if (!solve_dense(a, b, m, y)) return;
                for (std::size_t r = 0; r < total; ++r) {
                    double lhs = 0.0;
                    for (std::size_t c = 0; c < m; ++c) lhs += rows[r][c] * y[c];
                    if (lhs > rhs[r] + 1e-12) return;
                }
                vertices.push_back(y);
                return;
            }
            for (std::size_t r = start; r < total; ++r) {
                pick[depth] = r;
                choose(r + 1, depth + 1);
            }
        };
        choose(0, 0);
    }

    void prepare_quadratic() {
        const std::size_t m = edges.size();
        for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
            ActiveSet as;
            for (std::size_t e = 0; e < m; ++e) {
                if (mask >> e & 1U) as.members.push_back(e);
            }
            const std::size_t k = as.members.size();
            std::vector<double> mat(k * k, 0.0);
            for (std::size_t r = 0; r < k; ++r) {
                for (std::size_t c = 0; c < k; ++c) {
                    const auto& er = edges[as.members[r]];
                    const auto& ec = edges[as.members[c]];
                    for (const auto x : {er.a, er.b}) {
                        if (x == ec.a || x == ec.b) mat[r * k + c] += 1.0 / (2.0 * weight[x]);
                    }
                }
            }
            as.inverse.assign(k * k, 0.0);
            bool ok = true;
            for (std::size_t c = 0; c < k && ok; ++c) {
                std::vector<double> unit(k, 0.0);
                unit[c] = 1.0;
                std::vector<double> col;
                ok = solve_dense(mat, unit, k, col);
                for (std::size_t r = 0; r < k && ok; ++r) as.inverse[r * k + c] = col[r];
            }
            if (ok) active_sets.push_back(std::move(as));
        }
        std::stable_sort(active_sets.begin(), active_sets.end(),
                         [](const ActiveSet& a, const ActiveSet& b) { return a.members.size() < b.members.size(); });
    }

    /// min sum_x w_x g_x^p subject to g_a + g_b >= Q_e, g >= 0, for p in {1, 2}.
    double minimum(std::span<const double> quotient, double p) const {
        bool any = false;
        for (const double q : quotient) any = any || q > 0.0;
        if (!any) return 0.0;
        if (p == 1.0) {
            double best = 0.0;
            for (const auto& v : vertices) {
                double val = 0.0;
                for (std::size_t e = 0; e < v.size(); ++e) val += v[e] * quotient[e];
                best = std::max(best, val);
            }
            return best;
        }
        std::map<std::size_t, double> g;
        for (const auto& as : active_sets) {
            const std::size_t k = as.members.size();
            std::vector<double> y(k, 0.0);
            bool ok = true;
            for (std::size_t r = 0; r < k && ok; ++r) {
                for (std::size_t c = 0; c < k; ++c) y[r] += as.inverse[r * k + c] * quotient[as.members[c]];
                ok = y[r] >= -1e-12;
            }
            if (!ok) continue;
            g.clear();
            for (std::size_t r = 0; r < k; ++r) {
                const auto& e = edges[as.members[r]];
                g[e.a] += y[r] / (2.0 * weight[e.a]);
                g[e.b] += y[r] / (2.0 * weight[e.b]);
            }
            for (std::size_t e = 0; e < edges.size() && ok; ++e) {
                const double lhs = (g.count(edges[e].a) ? g[edges[e].a] : 0.0) + (g.count(edges[e].b) ? g[edges[e].b] : 0.0);
                ok = lhs >= quotient[e] - 1e-12 * std::max(1.0, quotient[e]);
            }
            if (!ok) continue;
            double val = 0.0;
            for (const auto& [x, gx] : g) val += weight[x] * gx * gx;
            return val;
        }
        throw Error("oracle found no optimal active set");
    }
};

}  // namespace detail

/**
 * Capacity by grid search: u = 1 on E and u takes values in {0, h, ..., 1} elsewhere;
 * the gradient part is exact for each grid u. Overestimates the infimum by at most
 * the objective's variation over one grid cell.
 */
inline double brute_capacity(const MetricMeasureSpace& space, std::span<const std::size_t> raw_set, double s, double p,
                             double q, const OracleConfig& config = {}) {
    config.validate();
    const std::size_t n = space.size();
    if (n > config.max_points) throw CapExceeded("oracle capacity supports at most " + std::to_string(config.max_points) + " points");
    if (p != 1.0 && p != 2.0) throw Error("oracle capacity supports p in {1, 2}");
    if (!(q >= 1.0)) throw Error("oracle capacity needs q >= 1");
    const auto set = normalize_set(raw_set, n);
    if (set.empty()) throw Error("oracle capacity of an empty set");
    std::vector<bool> fixed(n, false);
    for (const auto x : set) fixed[x] = true;
    std::vector<std::size_t> free;
    for (std::size_t x = 0; x < n; ++x) {
        if (!fixed[x]) free.push_back(x);
    }

    std::map<int, detail::ScaleOracle> scales;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            auto& sc = scales[dyadic_scale(space.d(i, j))];
            sc.edges.push_back({i, j, space.d(i, j)});
        }
    }
    for (auto& [k, sc] : scales) {
        sc.weight.assign(space.weights().begin(), space.weights().end());
        if (p == 1.0) {
            sc.prepare_linear(n);
        } else {
            sc.prepare_quadratic();
        }
    }

    const auto steps = static_cast<std::size_t>(std::llround(1.0 / config.u_grid_step));
    std::vector<std::size_t> idx(free.size(), 0);
    std::vector<double> u(n, 1.0);
    std::vector<double> quotient;
    double best = kInfinity;
    while (true) {
        for (std::size_t f = 0; f < free.size(); ++f) {
            u[free[f]] = std::min(1.0, static_cast<double>(idx[f]) * config.u_grid_step);
        }
        double lp = 0.0;
        for (std::size_t x = 0; x < n; ++x) lp += space.weight(x) * std::pow(u[x], p);
        lp = std::pow(lp, 1.0 / p);
        double grad = 0.0;
        for (const auto& [k, sc] : scales) {
            quotient.clear();
            for (const auto& e : sc.edges) quotient.push_back(std::abs(u[e.a] - u[e.b]) / std::pow(e.d, s));
            const double norm = std::pow(sc.minimum(quotient, p), 1.0 / p);
            grad = q == kInfinity ? std::max(grad, norm) : grad + std::pow(norm, q);
        }
        if (q != kInfinity) grad = std::pow(grad, 1.0 / q);
        best = std::min(best, std::pow(lp + grad, p));
        std::size_t f = 0;
        while (f < free.size() && idx[f] == steps) idx[f++] = 0;
        if (f == free.size()) break;
        ++idx[f];
    }
    return best;
}

/**
 * Covering content by exhaustive search over all subsets of a naive candidate list:
 * every pairwise distance, every float just below a power of two, and R itself.
 */
inline double brute_content(const MetricMeasureSpace& space, std::span<const std::size_t> raw_set,
                            const std::function<double(double)>& phi, double theta, double radius_cap,
                            const OracleConfig& config = {}) {
    config.validate();
    const std::size_t n = space.size();
    const auto set = normalize_set(raw_set, n);
    if (set.empty()) throw Error("oracle content of an empty set");
    if (!std::isfinite(radius_cap) || !(radius_cap > 0.0)) throw Error("oracle content needs a finite R > 0");
    if (!(theta > 0.0)) throw Error("theta must be positive");
    if (set.size() > 32) throw CapExceeded("oracle content supports at most 32 target points");

    auto class_of = [](double r) {
        int e = 0;
        std::frexp(r, &e);  // r = f 2^e with f in [1/2, 1): 2^{e-1} <= r < 2^e
        return 1 - e;
    };
    double dmin = kInfinity;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) dmin = std::min(dmin, space.d(i, j));
    }
    if (!std::isfinite(dmin)) dmin = radius_cap;
    const int jlo = static_cast<int>(std::floor(std::log2(std::min(dmin, radius_cap)))) - 1;
    const int jhi = static_cast<int>(std::ceil(std::log2(radius_cap))) + 1;

    struct Cand {
        std::size_t center;
        double r;
        int cls;
        double ratio;
        std::uint32_t mask;
    };
    std::map<std::tuple<std::size_t, std::vector<bool>, int>, Cand> unique;
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<double> radii{radius_cap};
        for (std::size_t y = 0; y < n; ++y) {
            if (y != x) radii.push_back(space.d(x, y));
        }
        for (int j = jlo; j <= jhi; ++j) radii.push_back(std::nextafter(std::ldexp(1.0, j), 0.0));
        for (const double r : radii) {
            if (!(r > 0.0) || r > radius_cap) continue;
            std::vector<bool> members(n, false);
            double mass = 0.0;
            for (std::size_t y = 0; y < n; ++y) {
                if (space.d(x, y) < r) {
                    members[y] = true;
                    mass += space.weight(y);
                }
            }
            std::uint32_t mask = 0;
            for (std::size_t b = 0; b < set.size(); ++b) {
                if (members[set[b]]) mask |= 1U << b;
            }
            if (mask == 0) continue;
            const Cand c{x, r, class_of(r), mass / phi(r), mask};
            auto [it, inserted] = unique.try_emplace({x, members, c.cls}, c);
            if (!inserted && r > it->second.r) it->second = c;
        }
    }
    std::vector<Cand> cands;
    for (const auto& [_, c] : unique) cands.push_back(c);

    // Upper bound: for each point the cheapest candidate containing it.
    std::map<int, double> ub_sums;
    std::vector<bool> used(cands.size(), false);
    for (std::size_t b = 0; b < set.size(); ++b) {
        std::size_t pick = cands.size();
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if ((cands[i].mask >> b & 1U) && (pick == cands.size() || cands[i].ratio < cands[pick].ratio)) pick = i;
        }
        if (!used[pick]) {
            used[pick] = true;
            ub_sums[cands[pick].cls] += cands[pick].ratio;
        }
    }
    double ub = 0.0;
    for (const auto& [_, v] : ub_sums) ub += std::pow(v, theta);
    ub = std::pow(ub, 1.0 / theta) * (1.0 + 1e-9);
    std::erase_if(cands, [&](const Cand& c) { return c.ratio > ub; });
    // Same class and same covered targets: only the cheapest can appear in an optimal covering.
    std::map<std::pair<int, std::uint32_t>, Cand> cheapest;
    for (const auto& c : cands) {
        auto [it, inserted] = cheapest.try_emplace({c.cls, c.mask}, c);
        if (!inserted && c.ratio < it->second.ratio) it->second = c;
    }
    cands.clear();
    for (const auto& [_, c] : cheapest) cands.push_back(c);
    if (cands.size() > config.max_candidates) {
        throw CapExceeded("oracle content has " + std::to_string(cands.size()) + " candidates, above the cap");
    }

    const std::uint32_t full = (set.size() == 32) ? ~0U : ((1U << set.size()) - 1U);
    double best = ub;
    std::map<int, double> sums;
    for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << cands.size()); ++subset) {
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (subset >> i & 1U) mask |= cands[i].mask;
        }
        if (mask != full) continue;
        sums.clear();
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (subset >> i & 1U) sums[cands[i].cls] += cands[i].ratio;
        }
        double cost = 0.0;
        for (const auto& [_, v] : sums) cost += std::pow(v, theta);
        best = std::min(best, std::pow(cost, 1.0 / theta));
    }
    return best;
}

}  // namespace besov::oracle
