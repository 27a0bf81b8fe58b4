#pragma once

#include <vector>

#include "besov/common.hpp"

namespace besov::lp {

/// Covering-type linear program: minimize c.x subject to A x >= b, x >= 0, with c >= 0.
struct CoveringLp {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  ///< row-major rows*cols
    std::vector<double> b;
    std::vector<double> c;

    CoveringLp(std::size_t m, std::size_t n) : rows(m), cols(n), a(m * n, 0.0), b(m, 0.0), c(n, 0.0) {}

    double& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
    double at(std::size_t r, std::size_t col) const { return a[r * cols + col]; }
};

struct Solution {
    std::vector<double> x;     ///< primal solution
    std::vector<double> dual;  ///< one nonnegative multiplier per row
    double objective = 0.0;
    std::size_t pivots = 0;
};

/**
 * Solves a CoveringLp with the simplex method applied to its dual
 * (maximize b.y subject to A^T y <= c, y >= 0), whose slack basis is feasible
 * because c >= 0. Primal values are read off the slack reduced costs.
 * Dantzig pricing, switching to Bland's rule after a run of degenerate pivots.
 */
inline Solution solve(const CoveringLp& lp) {
    const std::size_t m = lp.rows;
    const std::size_t n = lp.cols;
    for (const double v : lp.c) {
        if (v < 0.0) throw Error("covering LP needs a nonnegative cost vector");
    }
    Solution sol;
    sol.x.assign(n, 0.0);
    sol.dual.assign(m, 0.0);
    if (n == 0) {
        for (const double v : lp.b) {
            if (v > 0.0) throw Error("covering LP is infeasible");
        }
        return sol;
    }

    // Dual tableau: n rows (one per primal variable), m + n columns (y then slacks).
    const std::size_t width = m + n;
    std::vector<double> t(n * width, 0.0);
    std::vector<double> rhs(lp.c);
    std::vector<double> reduced(width, 0.0);
    std::vector<std::size_t> basis(n);
    double scale = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t col = 0; col < n; ++col) t[col * width + r] = lp.at(r, col);
        reduced[r] = lp.b[r];
        scale = std::max(scale, std::abs(lp.b[r]));
    }
    for (std::size_t i = 0; i < n; ++i) {
        t[i * width + m + i] = 1.0;
        basis[i] = m + i;
    }
    const double price_tol = 1e-11 * scale;
    constexpr double pivot_tol = 1e-10;
    const std::size_t max_pivots = 200 * (width + 10);
    std::size_t degenerate_run = 0;

    std::vector<double> pivot_row(width);
    while (true) {
        const bool bland = degenerate_run > 50;
        std::size_t enter = width;
        double best = price_tol;
        for (std::size_t j = 0; j < width; ++j) {
            if (reduced[j] > best) {
                enter = j;
                if (bland) break;
                best = reduced[j];
            }
        }
        if (enter == width) break;

        std::size_t leave = n;
        double best_ratio = kInfinity;
        for (std::size_t i = 0; i < n; ++i) {
            const double coef = t[i * width + enter];
            if (coef <= pivot_tol) continue;
            const double ratio = rhs[i] / coef;
            if (ratio < best_ratio - 1e-14 || (ratio <= best_ratio + 1e-14 && leave < n && basis[i] < basis[leave])) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave == n) throw Error("covering LP is infeasible (dual unbounded)");
        if (++sol.pivots > max_pivots) throw Error("covering LP exceeded its pivot budget");
        degenerate_run = best_ratio <= 1e-14 ? degenerate_run + 1 : 0;

        const double piv = t[leave * width + enter];
        for (std::size_t j = 0; j < width; ++j) pivot_row[j] = t[leave * width + j] / piv;
        const double pivot_rhs = rhs[leave] / piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == leave) continue;
            const double f = t[i * width + enter];
            if (f == 0.0) continue;
            double* row = &t[i * width];
            for (std::size_t j = 0; j < width; ++j) row[j] -= f * pivot_row[j];
            row[enter] = 0.0;
            rhs[i] = std::max(0.0, rhs[i] - f * pivot_rhs);
        }
        const double f = reduced[enter];
        for (std::size_t j = 0; j < width; ++j) reduced[j] -= f * pivot_row[j];
        reduced[enter] = 0.0;
        std::copy(pivot_row.begin(), pivot_row.end(), t.begin() + static_cast<std::ptrdiff_t>(leave * width));
        rhs[leave] = pivot_rhs;
        basis[leave] = enter;
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (basis[i] < m) sol.dual[basis[i]] = rhs[i];
        sol.x[i] = std::max(0.0, -reduced[m + i]);
    }
    sol.objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) sol.objective += lp.c[i] * sol.x[i];
    return sol;
}

}  // namespace besov::lp
