#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mzlab/core.hpp"

namespace mzlab::detail {

struct ScalarMin {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section minimization of a unimodal f on [a, b] until the bracket is below tol.
template <class F>
ScalarMin golden_minimize(F&& f, double a, double b, double tol, int max_iter = 200)
{
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && std::abs(b - a) > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? ScalarMin{c, fc} : ScalarMin{d, fd};
}

template <class F>
ScalarMin golden_maximize(F&& f, double a, double b, double tol, int max_iter = 200)
{
    auto r = golden_minimize([&](double x) { return -f(x); }, a, b, tol, max_iter);
    return {r.x, -r.value};
}

/// Root of a non-increasing function g on [lo, hi] with g(lo) >= 0 >= g(hi).
/// Bisects until the midpoint is no longer representable or max_iter is reached.
template <class G>
double bisect_decreasing(G&& g, double lo, double hi, double abs_tol, int max_iter = 200)
{
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= abs_tol * 1e-3)
            break;
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double binomial(int r, int k)
{
    double v = 1.0;
    for (int i = 1; i <= k; ++i)
        v = v * (r - k + i) / i;
    return v;
}

inline double factorial(int k)
{
    double v = 1.0;
    for (int i = 2; i <= k; ++i)
        v *= i;
    return v;
}

/// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size() && x.size() >= 2, "fit_slope needs at least two matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Log-log slope of values against parameters.
inline double loglog_slope(std::span<const double> params, std::span<const double> values)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < params.size(); ++i) {
        lx.push_back(std::log(params[i]));
        ly.push_back(std::log(values[i]));
    }
    return fit_slope(lx, ly);
}

/// x mod period, in [0, period).
inline double wrap(double x, double period)
{
    double r = std::fmod(x, period);
    if (r < 0)
        r += period;
    if (r >= period)
        r = 0.0;
    return r;
}

} // namespace mzlab::detail
