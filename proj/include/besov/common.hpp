#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace besov {

/// Errors raised for invalid inputs or failed solves.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A real value per point of a space.
using ScalarField = std::vector<double>;

/// A set of point indices (kept sorted, duplicates removed by normalize_set).
using PointSet = std::vector<std::size_t>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline PointSet normalize_set(PointSet set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
}

/// Sorted, deduplicated copy of a point set after checking every index is below n.
inline PointSet normalize_set(std::span<const std::size_t> raw, std::size_t n) {
    PointSet set(raw.begin(), raw.end());
    for (const auto x : set) {
        if (x >= n) throw Error("point index " + std::to_string(x) + " out of range");
    }
    return normalize_set(std::move(set));
}

/// Deterministic generator. mt19937_64 output is fixed by the standard; the
/// conversions below are ours so results do not depend on the library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return state_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    bool coin(double p = 0.5) { return uniform() < p; }

private:
    std::mt19937_64 state_;
};

inline std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace besov
