#pragma once

#include <span>
#include <utility>
#include <vector>

#include "besov/space.hpp"

namespace besov {

inline void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma <= 0.5)) throw Error("gamma must lie in (0, 1/2]");
}

/**
 * @brief gamma-median of u over the point set A.
 *
 * The smallest value a of u on A with mu({x in A : u(x) > a}) < gamma mu(A).
 * The infimum over all reals is always attained at such a value, so the
 * result is exact (sort plus a suffix-mass scan).
 */
inline double gamma_median(const MetricMeasureSpace& space, std::span<const double> u, std::span<const std::size_t> set,
                           double gamma) {
    check_gamma(gamma);
    if (set.empty()) throw Error("gamma-median of an empty set");
    std::vector<std::pair<double, double>> values;
    values.reserve(set.size());
    double mass = 0.0;
    for (const auto x : set) {
        values.emplace_back(u[x], space.weight(x));
        mass += space.weight(x);
    }
    const double threshold = gamma * mass;
    std::sort(values.begin(), values.end());
    // Walk distinct values from the top; mass_above is the weight strictly above the current value.
    double mass_above = 0.0;
    double answer = values.back().first;
    std::size_t idx = values.size();
    while (idx > 0) {
        const double v = values[idx - 1].first;
        if (!(mass_above < threshold)) break;
        answer = v;
        while (idx > 0 && values[idx - 1].first == v) {
            mass_above += values[idx - 1].second;
            --idx;
        }
    }
    return answer;
}

inline double gamma_median(const MetricMeasureSpace& space, std::span<const double> u, const Ball& ball, double gamma) {
    const auto set = space.members(ball);
    return gamma_median(space, u, set, gamma);
}

/// Candidate minimizers c of c -> m_{|u-c|}(A): values of u on A and midpoints of consecutive ones.
inline std::vector<double> median_offset_candidates(std::span<const double> u, std::span<const std::size_t> set) {
    std::vector<double> vals;
    for (const auto x : set) vals.push_back(u[x]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<double> out(vals);
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) out.push_back(0.5 * (vals[i] + vals[i + 1]));
    return out;
}

/// min over the candidate offsets c of m^gamma_{|u-c|}(A).
inline double min_median_deviation(const MetricMeasureSpace& space, std::span<const double> u,
                                   std::span<const std::size_t> set, double gamma) {
    double best = kInfinity;
    ScalarField dev(u.size(), 0.0);
    for (const double c : median_offset_candidates(u, set)) {
        for (const auto x : set) dev[x] = std::abs(u[x] - c);
        best = std::min(best, gamma_median(space, dev, set, gamma));
    }
    return best;
}

/// Both sides of m_{|u - m_u(A)|}(A) <= 2 inf_c m_{|u-c|}(A).
struct DeviationBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds() const { return lhs <= rhs; }
};

inline DeviationBound median_deviation_bound(const MetricMeasureSpace& space, std::span<const double> u,
                                             std::span<const std::size_t> set, double gamma) {
    const double m = gamma_median(space, u, set, gamma);
    ScalarField dev(u.size(), 0.0);
    for (const auto x : set) dev[x] = std::abs(u[x] - m);
    return {gamma_median(space, dev, set, gamma), 2.0 * min_median_deviation(space, u, set, gamma)};
}

/**
 * Lipschitz partition of unity subordinate to balls B(center_i, r).
 * phi[i][x] is the i-th bump at x; overlap is the largest number of
 * enlarged balls B(center_i, 2r) containing one point.
 */
struct PartitionOfUnity {
    double r = 0.0;
    std::vector<std::size_t> centers;
    std::vector<std::vector<double>> phi;
    std::size_t overlap = 0;

    /// Lipschitz bound 2 * overlap / r satisfied by every bump.
    double lipschitz_bound() const { return 2.0 * static_cast<double>(overlap) / r; }
};

/// Greedy r-net in index order: no two centers within distance r, every point within r of a center.
inline std::vector<std::size_t> greedy_net(const MetricMeasureSpace& space, double r) {
    std::vector<std::size_t> centers;
    for (std::size_t x = 0; x < space.size(); ++x) {
        bool far = true;
        for (const auto c : centers) {
            if (space.d(c, x) < r) {
                far = false;
                break;
            }
        }
        if (far) centers.push_back(x);
    }
    return centers;
}

inline PartitionOfUnity partition_of_unity(const MetricMeasureSpace& space, double r) {
    if (!(r > 0.0)) throw Error("partition of unity needs r > 0");
    PartitionOfUnity pu;
    pu.r = r;
    pu.centers = greedy_net(space, r);
    const std::size_t n = space.size();
    pu.phi.assign(pu.centers.size(), std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < pu.centers.size(); ++i) {
        for (std::size_t x = 0; x < n; ++x) {
            pu.phi[i][x] = std::clamp((2.0 * r - space.d(pu.centers[i], x)) / r, 0.0, 1.0);
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < pu.centers.size(); ++i) {
            total += pu.phi[i][x];
            if (space.d(pu.centers[i], x) < 2.0 * r) ++count;
        }
        pu.overlap = std::max(pu.overlap, count);
        for (auto& bump : pu.phi) bump[x] /= total;
    }
    return pu;
}

/// x -> sum_i m^gamma_u(B(center_i, r)) phi_i(x).
inline ScalarField median_convolution(const MetricMeasureSpace& space, std::span<const double> u, double r, double gamma) {
    check_gamma(gamma);
    const auto pu = partition_of_unity(space, r);
    ScalarField out(space.size(), 0.0);
    for (std::size_t i = 0; i < pu.centers.size(); ++i) {
        const double m = gamma_median(space, u, Ball{pu.centers[i], r}, gamma);
        for (std::size_t x = 0; x < space.size(); ++x) out[x] += m * pu.phi[i][x];
    }
    return out;
}

}  // namespace besov
