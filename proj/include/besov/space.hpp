#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "besov/common.hpp"

namespace besov {

/// One violated axiom found by validate().
struct SpaceViolation {
    std::string axiom;                 ///< "diagonal", "symmetry", "positivity", "triangle", "weight", "shape"
    std::vector<std::size_t> indices;  ///< offending point indices
    double amount = 0.0;               ///< size of the violation where meaningful

    std::string describe() const {
        std::string text = axiom + " at (";
        for (std::size_t i = 0; i < indices.size(); ++i) {
            text += (i ? "," : "") + std::to_string(indices[i]);
        }
        return text + ")";
    }
};

inline constexpr double kTriangleTolerance = 1e-12;

/**
 * @brief Checks the metric and measure axioms on raw data.
 *
 * @param dist row-major n*n distance matrix
 * @param weight point weights (length n)
 * @return every violation found; empty means the data defines a valid space
 */
inline std::vector<SpaceViolation> validate(std::span<const double> dist, std::span<const double> weight) {
    std::vector<SpaceViolation> out;
    const std::size_t n = weight.size();
    if (n == 0) {
        out.push_back({"shape", {}, 0.0});
        return out;
    }
    if (dist.size() != n * n) {
        out.push_back({"shape", {n}, static_cast<double>(dist.size())});
        return out;
    }
    auto d = [&](std::size_t i, std::size_t j) { return dist[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weight[i] > 0.0) || !std::isfinite(weight[i])) out.push_back({"weight", {i}, weight[i]});
        if (d(i, i) != 0.0) out.push_back({"diagonal", {i}, d(i, i)});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!std::isfinite(d(i, j)) || !std::isfinite(d(j, i))) {
                out.push_back({"finite", {i, j}, d(i, j)});
                continue;
            }
            if (std::abs(d(i, j) - d(j, i)) > kTriangleTolerance) out.push_back({"symmetry", {i, j}, d(i, j) - d(j, i)});
            if (!(d(i, j) > 0.0)) out.push_back({"positivity", {i, j}, d(i, j)});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double excess = d(i, j) - (d(i, k) + d(k, j));
                if (excess > kTriangleTolerance) out.push_back({"triangle", {i, k, j}, excess});
            }
        }
    }
    return out;
}

/// An unordered pair of distinct points with its distance.
struct PointPair {
    std::size_t i;
    std::size_t j;
    double d;
};

/// The dyadic level k of a distance: 2^(-k-1) <= d < 2^(-k).
inline int dyadic_scale(double d) {
    if (!(d > 0.0) || !std::isfinite(d)) throw Error("no scale for coincident points");
    int k = -static_cast<int>(std::floor(std::log2(d))) - 1;
    // log2 may round across an exact power of two; fix with exact comparisons.
    while (d < std::ldexp(1.0, -k - 1)) ++k;
    while (d >= std::ldexp(1.0, -k)) --k;
    return k;
}

/// Dyadic radius class i of a radius: 2^(-i) <= r < 2^(-i+1).
inline int radius_class(double r) { return dyadic_scale(r) + 1; }

/// A ball B(center, radius) = { y : d(y, center) < radius }.
struct Ball {
    std::size_t center = 0;
    double radius = 0.0;
};

/**
 * @brief Finite metric measure space: dense distances plus positive point weights.
 *
 * Immutable once constructed. The constructor rejects data that fails validate().
 * Point pairs are bucketed by dyadic scale at construction.
 */
class MetricMeasureSpace {
public:
    MetricMeasureSpace(std::vector<double> dist, std::vector<double> weight,
                       std::vector<std::vector<double>> coords = {})
        : n_(weight.size()), dist_(std::move(dist)), weight_(std::move(weight)), coords_(std::move(coords)) {
        const auto violations = validate(dist_, weight_);
        if (!violations.empty()) {
            std::string msg = "invalid metric measure space:";
            for (std::size_t v = 0; v < violations.size() && v < 8; ++v) msg += " " + violations[v].describe();
            throw Error(msg);
        }
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) dist_[j * n_ + i] = dist_[i * n_ + j];
        }
        for (std::size_t i = 0; i < n_; ++i) {
            total_ += weight_[i];
            for (std::size_t j = i + 1; j < n_; ++j) {
                const double d = dist_[i * n_ + j];
                pairs_by_scale_[dyadic_scale(d)].push_back({i, j, d});
                min_dist_ = std::min(min_dist_, d);
                max_dist_ = std::max(max_dist_, d);
            }
        }
    }

    std::size_t size() const { return n_; }
    double d(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    double weight(std::size_t i) const { return weight_[i]; }
    std::span<const double> weights() const { return weight_; }
    std::span<const double> distances() const { return dist_; }
    const std::vector<std::vector<double>>& coords() const { return coords_; }
    double total_measure() const { return total_; }

    /// Smallest positive distance (+inf for a single point).
    double min_distance() const { return min_dist_; }
    double diameter() const { return n_ > 1 ? max_dist_ : 0.0; }

    int pair_scale(std::size_t i, std::size_t j) const {
        if (i == j) throw Error("no scale for coincident points");
        return dyadic_scale(d(i, j));
    }

    /// Pairs grouped by scale; only active scales appear.
    const std::map<int, std::vector<PointPair>>& pairs_by_scale() const { return pairs_by_scale_; }

    /// Pairs at scale k (empty when k is not active).
    std::span<const PointPair> pairs_at(int k) const {
        const auto it = pairs_by_scale_.find(k);
        if (it == pairs_by_scale_.end()) return {};
        return it->second;
    }

    /// Active scales K(space); empty for a single point.
    std::vector<int> active_scales() const {
        std::vector<int> ks;
        for (const auto& [k, _] : pairs_by_scale_) ks.push_back(k);
        return ks;
    }

    /// Scales on which gradients are stored: [k_min - 3, k_max + 2].
    std::pair<int, int> scale_window() const {
        if (pairs_by_scale_.empty()) return {0, -1};
        return {pairs_by_scale_.begin()->first - 3, pairs_by_scale_.rbegin()->first + 2};
    }

    PointSet members(std::size_t center, double radius) const {
        PointSet out;
        for (std::size_t j = 0; j < n_; ++j) {
            if (d(center, j) < radius) out.push_back(j);
        }
        return out;
    }
    PointSet members(const Ball& b) const { return members(b.center, b.radius); }

    double ball_measure(std::size_t center, double radius) const {
        double m = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (d(center, j) < radius) m += weight_[j];
        }
        return m;
    }
    double measure(const Ball& b) const { return ball_measure(b.center, b.radius); }

    double measure(std::span<const std::size_t> set) const {
        double m = 0.0;
        for (const auto x : set) m += weight_[x];
        return m;
    }

    /// Distance from x to a nonempty point set.
    double distance_to(std::size_t x, std::span<const std::size_t> set) const {
        double best = kInfinity;
        for (const auto y : set) best = std::min(best, d(x, y));
        return best;
    }

    /// Same distances, weights multiplied by lambda.
    MetricMeasureSpace scaled_measure(double lambda) const {
        std::vector<double> w(weight_);
        for (auto& v : w) v *= lambda;
        return MetricMeasureSpace(dist_, std::move(w), coords_);
    }

    PointSet all_points() const {
        PointSet out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = i;
        return out;
    }

private:
    std::size_t n_;
    std::vector<double> dist_;
    std::vector<double> weight_;
    std::vector<std::vector<double>> coords_;
    std::map<int, std::vector<PointPair>> pairs_by_scale_;
    double total_ = 0.0;
    double min_dist_ = kInfinity;
    double max_dist_ = 0.0;
};

inline constexpr double kRadiusBump = 1e-9;

/**
 * Least c with mu(B(x,2r)) <= c mu(B(x,r)) over every ball realizable in the space.
 * Both ball measures are step functions of r that jump only at d(x,y) and d(x,y)/2,
 * so it suffices to test those radii and radii just above them.
 */
inline double doubling_constant(const MetricMeasureSpace& space) {
    const std::size_t n = space.size();
    double worst = 1.0;
    std::vector<std::pair<double, double>> sorted;  // (distance, weight)
    std::vector<double> prefix;
    for (std::size_t x = 0; x < n; ++x) {
        sorted.clear();
        for (std::size_t j = 0; j < n; ++j) sorted.emplace_back(space.d(x, j), space.weight(j));
        std::sort(sorted.begin(), sorted.end());
        prefix.assign(n + 1, 0.0);
        for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + sorted[j].second;
        auto mass_below = [&](double r) {
            const auto it = std::lower_bound(sorted.begin(), sorted.end(), std::make_pair(r, -kInfinity));
            return prefix[static_cast<std::size_t>(it - sorted.begin())];
        };
        for (std::size_t j = 1; j < n; ++j) {
            const double dj = sorted[j].first;
            for (const double r : {dj, dj / 2.0, dj * (1.0 + kRadiusBump), dj / 2.0 * (1.0 + kRadiusBump)}) {
                const double inner = mass_below(r);
                const double outer = mass_below(2.0 * r);
                worst = std::max(worst, outer / inner);
            }
        }
    }
    return worst;
}

}  // namespace besov
