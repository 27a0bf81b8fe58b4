#pragma once

#include <array>
#include <string>
#include <tuple>
#include <vector>

#include "besov/space.hpp"

namespace besov {

/// Parameters for the deterministic space generators. Unused fields are ignored per kind.
struct GeneratorParams {
    std::size_t n = 8;         ///< line-grid / random-cloud point count
    std::size_t side = 3;      ///< square-grid side length
    int level = 2;             ///< cantor level
    double spacing = 1.0;      ///< grid spacing
    std::size_t dim = 2;       ///< random-cloud ambient dimension
    double extent = 1.0;       ///< random-cloud cube side
    bool random_weights = false;
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;  ///< graph-metric edge list
};

inline std::vector<double> euclidean_distances(const std::vector<std::vector<double>>& coords) {
    const std::size_t n = coords.size();
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < coords[i].size(); ++c) {
                const double diff = coords[i][c] - coords[j][c];
                s += diff * diff;
            }
            dist[i * n + j] = dist[j * n + i] = std::sqrt(s);
        }
    }
    return dist;
}

inline MetricMeasureSpace line_grid(std::size_t n, double spacing = 1.0) {
    if (n == 0 || !(spacing > 0.0)) throw Error("line-grid needs n >= 1 and spacing > 0");
    std::vector<std::vector<double>> coords(n);
    for (std::size_t i = 0; i < n; ++i) coords[i] = {spacing * static_cast<double>(i)};
    auto dist = euclidean_distances(coords);
    return MetricMeasureSpace(std::move(dist), std::vector<double>(n, 1.0), std::move(coords));
}

inline MetricMeasureSpace square_grid(std::size_t side, double spacing = 1.0) {
    if (side == 0 || !(spacing > 0.0)) throw Error("square-grid needs side >= 1 and spacing > 0");
    std::vector<std::vector<double>> coords;
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            coords.push_back({spacing * static_cast<double>(c), spacing * static_cast<double>(r)});
        }
    }
    auto dist = euclidean_distances(coords);
    const std::size_t n = coords.size();
    return MetricMeasureSpace(std::move(dist), std::vector<double>(n, 1.0), std::move(coords));
}

/// Endpoints of the 2^level intervals of the level-th middle-thirds construction, total mass 1.
inline MetricMeasureSpace cantor(int level) {
    if (level < 0) throw Error("cantor level must be >= 0");
    if (level > 12) throw Error("cantor level too large for a dense space");
    std::vector<std::pair<double, double>> intervals{{0.0, 1.0}};
    for (int l = 0; l < level; ++l) {
        std::vector<std::pair<double, double>> next;
        for (const auto& [a, b] : intervals) {
            const double third = (b - a) / 3.0;
            next.emplace_back(a, a + third);
            next.emplace_back(b - third, b);
        }
        intervals = std::move(next);
    }
    std::vector<std::vector<double>> coords;
    for (const auto& [a, b] : intervals) {
        coords.push_back({a});
        coords.push_back({b});
    }
    const std::size_t n = coords.size();
    auto dist = euclidean_distances(coords);
    return MetricMeasureSpace(std::move(dist), std::vector<double>(n, 1.0 / static_cast<double>(n)), std::move(coords));
}

inline MetricMeasureSpace random_cloud(std::size_t n, std::uint64_t seed, std::size_t dim = 2, double extent = 1.0,
                                       bool random_weights = false) {
    if (n == 0 || dim == 0 || !(extent > 0.0)) throw Error("random-cloud needs n >= 1, dim >= 1, extent > 0");
    Rng rng(seed);
    std::vector<std::vector<double>> coords(n, std::vector<double>(dim));
    for (auto& p : coords) {
        for (auto& c : p) c = rng.uniform(0.0, extent);
    }
    std::vector<double> w(n, 1.0);
    if (random_weights) {
        for (auto& v : w) v = rng.uniform(0.5, 1.5);
    }
    auto dist = euclidean_distances(coords);
    return MetricMeasureSpace(std::move(dist), std::move(w), std::move(coords));
}

/// Shortest-path metric of a connected graph with positive edge lengths.
inline MetricMeasureSpace graph_metric(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
                                       std::vector<double> weights = {}) {
    if (n == 0) throw Error("graph-metric needs n >= 1");
    if (weights.empty()) weights.assign(n, 1.0);
    if (weights.size() != n) throw Error("graph-metric weights must have length n");
    std::vector<double> dist(n * n, kInfinity);
    for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = 0.0;
    for (const auto& [a, b, len] : edges) {
        if (a >= n || b >= n || a == b) throw Error("graph-metric edge endpoints out of range");
        if (!(len > 0.0) || !std::isfinite(len)) throw Error("graph-metric edge lengths must be positive");
        dist[a * n + b] = std::min(dist[a * n + b], len);
        dist[b * n + a] = std::min(dist[b * n + a], len);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double via = dist[i * n + k] + dist[k * n + j];
                if (via < dist[i * n + j]) dist[i * n + j] = via;
            }
        }
    }
    for (const double v : dist) {
        if (!std::isfinite(v)) throw Error("graph-metric graph is not connected");
    }
    return MetricMeasureSpace(std::move(dist), std::move(weights));
}

inline const std::array<std::string, 5>& generator_kinds() {
    static const std::array<std::string, 5> kinds{"line-grid", "square-grid", "cantor", "random-cloud", "graph-metric"};
    return kinds;
}

inline MetricMeasureSpace generate(const std::string& kind, const GeneratorParams& params, std::uint64_t seed) {
    if (kind == "line-grid") return line_grid(params.n, params.spacing);
    if (kind == "square-grid") return square_grid(params.side, params.spacing);
    if (kind == "cantor") return cantor(params.level);
    if (kind == "random-cloud") return random_cloud(params.n, seed, params.dim, params.extent, params.random_weights);
    if (kind == "graph-metric") return graph_metric(params.n, params.edges);
    throw Error("unknown generator kind: " + kind);
}

}  // namespace besov
