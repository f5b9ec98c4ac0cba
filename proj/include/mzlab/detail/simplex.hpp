#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mzlab/core.hpp"

namespace mzlab::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::IterationLimit;
    std::vector<double> x;    // primal solution
    std::vector<double> dual; // y with A^T y <= c at optimum
    double objective = 0.0;
};

/// Dense two-phase tableau simplex for  min c^T x  s.t.  A x = b, x >= 0.
/// A is row-major with `rows` rows and c.size() columns. Dantzig pricing, switching
/// to Bland's rule after a run of degenerate pivots. Duals are read from the columns
/// of the phase-one artificials, which hold B^{-1}.
inline LpResult simplex_solve(const std::vector<double>& A, const std::vector<double>& b,
                              const std::vector<double>& c, int max_iter = 50000)
{
    const std::size_t m = b.size();
    const std::size_t n = c.size();
    require(A.size() == m * n, "simplex_solve: matrix shape mismatch");
    const std::size_t width = n + m + 1; // structural, artificial, rhs
    const std::size_t rhs = n + m;

    std::vector<double> sign(m, 1.0);
    std::vector<double> T(m * width, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0)
            sign[i] = -1.0;
        for (std::size_t j = 0; j < n; ++j)
            T[i * width + j] = sign[i] * A[i * n + j];
        T[i * width + n + i] = 1.0;
        T[i * width + rhs] = sign[i] * b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i)
        basis[i] = n + i;

    double scale = 1.0;
    for (double v : A)
        scale = std::max(scale, std::abs(v));
    const double pivot_tol = 1e-11 * scale;

    auto pivot = [&](std::size_t r, std::size_t col) {
        double* prow = &T[r * width];
        const double inv = 1.0 / prow[col];
        for (std::size_t j = 0; j < width; ++j)
            prow[j] *= inv;
        prow[col] = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r)
                continue;
            double* row = &T[i * width];
            const double f = row[col];
            if (f == 0.0)
                continue;
            for (std::size_t j = 0; j < width; ++j)
                row[j] -= f * prow[j];
            row[col] = 0.0;
        }
        basis[r] = col;
    };

    // Runs the simplex on cost vector `cost` over columns [0, allowed). Returns status.
    auto run = [&](const std::vector<double>& cost, std::size_t allowed, int& iters) {
        int degenerate = 0;
        while (iters < max_iter) {
            // reduced costs r_j = cost_j - cost_B^T T_j
            std::vector<double> cb(m);
            for (std::size_t i = 0; i < m; ++i)
                cb[i] = cost[basis[i]];
            double cscale = 1.0;
            for (double v : cost)
                cscale = std::max(cscale, std::abs(v));
            const double opt_tol = 1e-10 * cscale;
            const bool bland = degenerate > 50;
            std::size_t enter = allowed;
            double best = -opt_tol;
            for (std::size_t j = 0; j < allowed; ++j) {
                double r = cost[j];
                for (std::size_t i = 0; i < m; ++i)
                    r -= cb[i] * T[i * width + j];
                if (r < best || (bland && r < -opt_tol && enter == allowed)) {
                    enter = j;
                    best = r;
                    if (bland)
                        break;
                }
            }
            if (enter == allowed)
                return LpStatus::Optimal;
            std::size_t leave = m;
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                const double a = T[i * width + enter];
                if (a > pivot_tol) {
                    const double q = T[i * width + rhs] / a;
                    if (q < ratio - 1e-14 || (std::abs(q - ratio) <= 1e-14 && leave < m && basis[i] < basis[leave])) {
                        ratio = q;
                        leave = i;
                    }
                }
            }
            if (leave == m)
                return LpStatus::Unbounded;
            degenerate = ratio <= 1e-14 ? degenerate + 1 : 0;
            pivot(leave, enter);
            ++iters;
        }
        return LpStatus::IterationLimit;
    };

    LpResult res;
    int iters = 0;
    std::vector<double> phase1(n + m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        phase1[n + i] = 1.0;
    auto st = run(phase1, n, iters);
    // phase one columns [0, n) only may enter; artificials start basic
    double infeas = 0.0;
    double bscale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n)
            infeas += T[i * width + rhs];
        bscale = std::max(bscale, std::abs(b[i]));
    }
    if (st == LpStatus::IterationLimit) {
        res.status = st;
        return res;
    }
    if (infeas > 1e-8 * bscale) {
        res.status = LpStatus::Infeasible;
        return res;
    }
    // drive zero-level artificials out of the basis where a structural pivot exists
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n)
            continue;
        std::size_t col = n;
        double big = pivot_tol;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(T[i * width + j]) > big) {
                big = std::abs(T[i * width + j]);
                col = j;
            }
        }
        if (col < n)
            pivot(i, col);
    }

    std::vector<double> phase2(n + m, 0.0);
    std::copy(c.begin(), c.end(), phase2.begin());
    st = run(phase2, n, iters);
    res.status = st;
    if (st != LpStatus::Optimal)
        return res;

    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n)
            res.x[basis[i]] = T[i * width + rhs];
    res.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        res.objective += c[j] * res.x[j];
    res.dual.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double y = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            y += phase2[basis[i]] * T[i * width + n + k];
        res.dual[k] = sign[k] * y;
    }
    return res;
}

} // namespace mzlab::detail
