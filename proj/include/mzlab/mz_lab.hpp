#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mzlab/core.hpp"
#include "mzlab/detail/numerics.hpp"
#include "mzlab/detail/parallel.hpp"
#include "mzlab/detail/rng.hpp"
#include "mzlab/function_models.hpp"
#include "mzlab/nodes_quadrature.hpp"
#include "mzlab/norm_engine.hpp"
#include "mzlab/operators_kernels.hpp"

namespace mzlab {

// ---------------------------------------------------------------------------------------------
// eta constants

struct EtaResult {
    double value = 0.0;
    double tail_bound = 0.0; // rigorous bound on the neglected part of the series
    int truncation = 0;      // largest |alpha| summed
    bool below_one = false;
};

/// (1 + 2AB)^d - 1.
inline EtaResult eta_banach(double A, double B, int d)
{
    require(A >= 0.0 && B > 0.0 && d >= 1, "eta_banach: need A >= 0, B > 0, d >= 1");
    const double v = std::pow(1.0 + 2.0 * A * B, d) - 1.0;
    return {v, 0.0, 1, v < 1.0};
}

using MultiIndexFn = std::function<double(std::span<const int>)>;

namespace detail {

template <class Fn>
void for_each_shell(int d, int s, Fn&& fn)
{
    std::vector<int> a(static_cast<std::size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == d - 1) {
            a[static_cast<std::size_t>(pos)] = left;
            fn(std::span<const int>(a));
            return;
        }
        for (int v = left; v >= 0; --v) {
            a[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, s);
}

} // namespace detail

/// sum over alpha != 0 of (A^{|alpha|} B_alpha / alpha!)^q, with B_alpha <= B^{|alpha|} declared.
/// Shells |alpha| = s are added until the geometric tail bound
/// sum_{s > S} C(s+d-1, d-1) (AB)^{qs} falls below 1e-12 of the partial sum (or `truncation`
/// shells when given).
inline EtaResult eta_quasi(double A, const MultiIndexFn& B_alpha, double declared_B, double q, int d,
                           int truncation = 0)
{
    require(A > 0.0 && declared_B > 0.0 && q > 0.0 && d >= 1, "eta_quasi: need A, B, q > 0 and d >= 1");
    const double rho = std::pow(A * declared_B, q);
    require(A * declared_B < 1.0, "eta_quasi: declared bound is not summable (need A*B < 1)");
    auto shell_count = [d](int s) { return detail::binomial(s + d - 1, d - 1); };
    auto tail_after = [&](int S) {
        // terms t_s = C(s+d-1, d-1) rho^s decrease with ratio rho (s+d)/(s+1) for s > S
        const double t = shell_count(S + 1) * std::pow(rho, S + 1);
        const double ratio = rho * (S + 1.0 + d) / (S + 2.0);
        return ratio < 1.0 ? t / (1.0 - ratio) : kInf;
    };
    EtaResult out;
    double sum = 0.0;
    const int cap = truncation > 0 ? truncation : 5000;
    int s = 1;
    for (; s <= cap; ++s) {
        detail::for_each_shell(d, s, [&](std::span<const int> a) {
            const double b = B_alpha(a);
            require(b > 0.0 && b <= std::pow(declared_B, s) * (1.0 + 1e-12),
                    "eta_quasi: B_alpha exceeds the declared geometric bound");
            double fact = 1.0;
            for (int ai : a)
                fact *= detail::factorial(ai);
            sum += std::pow(std::pow(A, s) * b / fact, q);
        });
        if (truncation == 0 && tail_after(s) <= 1e-12 * sum)
            break;
    }
    out.truncation = std::min(s, cap);
    out.tail_bound = tail_after(out.truncation);
    if (truncation == 0 && !(out.tail_bound <= 1e-12 * sum))
        throw NumericalError("eta_quasi: series did not converge within the shell cap");
    out.value = sum;
    out.below_one = sum + out.tail_bound < 1.0;
    return out;
}

inline EtaResult eta_quasi_unit(double A, double q, int d, int truncation = 0)
{
    return eta_quasi(A, [](std::span<const int>) { return 1.0; }, 1.0, q, d, truncation);
}

// ---------------------------------------------------------------------------------------------
// maximal and minimal functions

enum class WindowWeight { Unit, Chebyshev }; // 1, or sqrt(1 - x^2) + 1/n on [-1, 1]

inline double window_weight(WindowWeight w, double x, int n)
{
    return w == WindowWeight::Unit ? 1.0 : phi_n(x, n);
}

struct MaxMinResult {
    std::shared_ptr<const QuadratureGrid> grid;
    std::vector<double> max_values;
    std::vector<double> min_values;
    std::vector<double> values; // |F| at the grid points

    [[nodiscard]] SampledFunction max_function() const
    {
        return {grid, std::vector<Complex>(max_values.begin(), max_values.end())};
    }
    [[nodiscard]] SampledFunction min_function() const
    {
        return {grid, std::vector<Complex>(min_values.begin(), min_values.end())};
    }
    [[nodiscard]] SampledFunction function() const
    {
        return {grid, std::vector<Complex>(values.begin(), values.end())};
    }
};

/// Max and min of |F| over Q(x, A phi(x)/n^beta) for each grid point x. The window is clipped
/// on intervals and wraps on periodic domains. Extrema come from a fine scan (at least 64 points
/// per narrowest window) whose discrete local extrema are each polished by golden section, plus
/// exact values at the window ends.
inline MaxMinResult max_min_function(const FunctionModel& F, double A, double beta = 1.0,
                                     WindowWeight phi = WindowWeight::Unit,
                                     std::shared_ptr<const QuadratureGrid> grid = nullptr)
{
    require(F.dim() == 1, "max_min_function: one-dimensional models only");
    require(A > 0.0, "max_min_function: A must be positive");
    const Domain dom = F.domain();
    require(phi == WindowWeight::Unit || (!dom.periodic && dom.span == Interval{-1.0, 1.0}),
            "max_min_function: Chebyshev window weight lives on [-1, 1]");
    const int n = std::max(1, F.degree());
    const double scale = A / std::pow(static_cast<double>(n), beta);
    auto half_width = [&](double x) { return scale * window_weight(phi, x, n); };
    const double min_half = scale * (phi == WindowWeight::Unit ? 1.0 : 1.0 / n);
    const double L = dom.measure();

    if (!grid) {
        const std::size_t need = static_cast<std::size_t>(std::ceil(16.0 * L / (2.0 * min_half)));
        std::size_t M = std::max(default_grid_size(n), need);
        if (dom.periodic)
            grid = periodic_grid(M, dom);
        else
            grid = interval_grid(dom.span, M);
    }
    require(grid->dim == 1, "max_min_function: one-dimensional grid expected");
    require(static_cast<double>(grid->points.size()) >= 16.0 * L / (2.0 * min_half) * (1.0 - 1e-9),
            "max_min_function: grid must resolve every window with at least 16 points");

    auto absf = [&](double x) { return std::abs(evaluate(F, x)); };

    // fine scan
    const double h = 2.0 * min_half / 64.0;
    const std::size_t cells = static_cast<std::size_t>(std::ceil(L / h));
    require(cells <= (std::size_t{1} << 24), "max_min_function: window too narrow for the fine scan");
    const double hf = L / static_cast<double>(cells);
    const std::size_t count = dom.periodic ? cells : cells + 1;
    std::vector<double> fx(count), fv(count);
    for (std::size_t j = 0; j < count; ++j) {
        fx[j] = j == cells ? dom.span.hi : dom.span.lo + hf * static_cast<double>(j);
        fv[j] = absf(fx[j]);
    }
    detail::check_finite(fv);
    struct Candidate {
        double x;
        double v;
    };
    std::vector<Candidate> maxima, minima;
    const double tol = 1e-13 * std::max(1.0, L);
    for (std::size_t j = 0; j < count; ++j) {
        const bool has_left = j > 0 || dom.periodic;
        const bool has_right = j + 1 < count || dom.periodic;
        if (!has_left || !has_right)
            continue;
        const double left = fv[j > 0 ? j - 1 : count - 1];
        const double right = fv[j + 1 < count ? j + 1 : 0];
        const double a = fx[j] - hf, b = fx[j] + hf;
        if (fv[j] >= left && fv[j] >= right) {
            auto r = detail::golden_maximize(absf, a, b, tol);
            maxima.push_back(r.value >= fv[j] ? Candidate{r.x, r.value} : Candidate{fx[j], fv[j]});
        }
        if (fv[j] <= left && fv[j] <= right) {
            auto r = detail::golden_minimize(absf, a, b, tol);
            minima.push_back(r.value <= fv[j] ? Candidate{r.x, r.value} : Candidate{fx[j], fv[j]});
        }
    }
    if (dom.periodic) {
        for (auto* list : {&maxima, &minima})
            for (auto& c : *list)
                c.x = dom.span.lo + detail::wrap(c.x - dom.span.lo, L);
    }
    auto by_x = [](const Candidate& a, const Candidate& b) { return a.x < b.x; };
    std::sort(maxima.begin(), maxima.end(), by_x);
    std::sort(minima.begin(), minima.end(), by_x);

    auto scan = [&](const std::vector<Candidate>& list, double a, double b, double init, bool want_max) {
        double best = init;
        auto it = std::lower_bound(list.begin(), list.end(), Candidate{a, 0.0}, by_x);
        for (; it != list.end() && it->x <= b; ++it)
            best = want_max ? std::max(best, it->v) : std::min(best, it->v);
        return best;
    };

    MaxMinResult out;
    out.grid = grid;
    const auto& pts = grid->points;
    out.max_values.resize(pts.size());
    out.min_values.resize(pts.size());
    out.values.resize(pts.size());
    double global_max = 0.0, global_min = kInf;
    for (std::size_t j = 0; j < count; ++j) {
        global_max = std::max(global_max, fv[j]);
        global_min = std::min(global_min, fv[j]);
    }
    for (const auto& c : maxima)
        global_max = std::max(global_max, c.v);
    for (const auto& c : minima)
        global_min = std::min(global_min, c.v);

    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double x = pts[i];
        const double d = half_width(x);
        const double fx0 = absf(x);
        out.values[i] = fx0;
        if (dom.periodic && 2.0 * d >= L) {
            out.max_values[i] = global_max;
            out.min_values[i] = global_min;
            continue;
        }
        double a = x - d, b = x + d;
        if (!dom.periodic) {
            a = std::max(a, dom.span.lo);
            b = std::min(b, dom.span.hi);
        }
        const double fa = absf(a), fb = absf(b);
        double mx = std::max({fa, fb, fx0});
        double mn = std::min({fa, fb, fx0});
        if (dom.periodic) {
            const double a0 = dom.span.lo + detail::wrap(a - dom.span.lo, L);
            const double b0 = a0 + (b - a);
            const double end = dom.span.lo + L;
            mx = scan(maxima, a0, std::min(b0, end), mx, true);
            mn = scan(minima, a0, std::min(b0, end), mn, false);
            if (b0 > end) {
                mx = scan(maxima, dom.span.lo, b0 - L, mx, true);
                mn = scan(minima, dom.span.lo, b0 - L, mn, false);
            }
        } else {
            mx = scan(maxima, a, b, mx, true);
            mn = scan(minima, a, b, mn, false);
        }
        out.max_values[i] = mx;
        out.min_values[i] = mn;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// two-sided ratios

struct RatioReport {
    double lower_ratio = kInf;
    double upper_ratio = 0.0;
    std::optional<double> bound_low;
    std::optional<double> bound_high;
    double tolerance = 0.0; // relative slack when counting violations
    std::size_t violations = 0;
    std::size_t trials = 0;
    std::size_t excluded = 0; // zero denominators
    std::uint64_t seed = 0;

    void add(std::optional<double> rho)
    {
        if (!rho) {
            ++excluded;
            return;
        }
        ++trials;
        lower_ratio = std::min(lower_ratio, *rho);
        upper_ratio = std::max(upper_ratio, *rho);
        if ((bound_low && *rho < *bound_low * (1.0 - tolerance)) || (bound_high && *rho > *bound_high * (1.0 + tolerance)))
            ++violations;
    }

    void merge(const RatioReport& o)
    {
        lower_ratio = std::min(lower_ratio, o.lower_ratio);
        upper_ratio = std::max(upper_ratio, o.upper_ratio);
        violations += o.violations;
        trials += o.trials;
        excluded += o.excluded;
    }
};

/// rho = ||sum |F(x_k)| chi_k||_X / ||F||_X; empty when ||F||_X = 0.
inline std::optional<double> mz_two_sided_ratio(const FunctionModel& F, const NodeSystem& s, const NormSpec& spec)
{
    const auto v = values_at_nodes(F, s);
    const double cont = model_norm(F, spec);
    if (cont == 0.0)
        return std::nullopt;
    return discrete_mz_norm(v, s, spec) / cont;
}

/// Runs `trials` independent ratio evaluations with per-trial seeds derive_seed(seed, i) and
/// aggregates them in trial order.
template <class Fn>
RatioReport ratio_sweep(std::size_t trials, std::uint64_t seed, int jobs, Fn&& trial, std::optional<double> bound_low = {},
                        std::optional<double> bound_high = {}, double tolerance = 0.0)
{
    auto rhos = detail::parallel_map<std::optional<double>>(
        trials, jobs, [&](std::size_t i) { return trial(derive_seed(seed, i), i); });
    RatioReport r;
    r.bound_low = bound_low;
    r.bound_high = bound_high;
    r.tolerance = tolerance;
    r.seed = seed;
    for (const auto& rho : rhos)
        r.add(rho);
    return r;
}

// ---------------------------------------------------------------------------------------------
// explicit constants

using ConstantParams = std::map<std::string, double>;

struct ConstantBounds {
    std::optional<double> low;  // lower bound on the ratio discrete/continuous (or on the quantity)
    std::optional<double> high; // upper bound
    bool applicable = true;     // false when the theorem's premise fails
    std::string note;
};

inline const std::vector<std::string>& constant_catalog()
{
    static const std::vector<std::string> ids{"TTMZ",      "th1",     "th3_upper", "th3_lower", "th4_upper", "th4_lower",
                                              "thNik",     "spline",  "markov",    "markov_ri", "grid_mz"};
    return ids;
}

/// Closed-form constants. Ratio-type entries bound rho = discrete norm / continuous norm:
///   TTMZ       C [, B]          rho in [1/(C e^{4 pi C/3}), e^{4 pi C/3}]   (e^{2 pi B/3} when B given)
///   th1        d [, C]          rho in [1/(3^d C), 3^d]
///   th3_upper  n, N, delta      sharp-norm rho <= e(n + 1 + 2 pi/delta)/N
///   th3_lower  n, N, delta, lambda   rho >= (min{1, 4 pi/(lambda N)} - 4 e lambda n (n+1+2 pi/delta)/N)/2
///   th4_upper                   rho <= 8e/3
///   th4_lower  sigma, C         rho >= (1/(2C) - 8 e pi sigma)/3 when sigma < 1/(16 e pi C)
///   thNik      n, N, gamma [, d]  ||T||_inf ||chi||_X / ||T||_X <= e^{2 pi d/gamma}, N >= gamma n
///   spline     r, n [, order]   ||S^(order)|| / ||S|| <= prod_i 2 (r-i)^2 n
///   markov     n, a, b [, order]   sup-norm (2 n^2/(b-a))^order
///   markov_ri  n, a, b [, order]   rearrangement invariant (8 n^2/(b-a))^order
///   grid_mz    A [, B, d]       rho in [2 - e^{dAB}, e^{dAB}], A < log 2/(dB)
inline ConstantBounds paper_constant_bounds(const std::string& id, const ConstantParams& p)
{
    auto get = [&](const char* key) {
        auto it = p.find(key);
        if (it == p.end())
            throw ValidationError("constants " + id + ": missing parameter '" + key + "'");
        return it->second;
    };
    auto opt = [&](const char* key, double fallback) {
        auto it = p.find(key);
        return it == p.end() ? fallback : it->second;
    };
    ConstantBounds out;
    if (id == "TTMZ") {
        const double C = get("C");
        const double e = p.count("B") ? std::exp(kTwoPi * get("B") / 3.0) : std::exp(4.0 * kPi * C / 3.0);
        out.low = 1.0 / (C * e);
        out.high = e;
    } else if (id == "th1") {
        const double d = get("d");
        out.high = std::pow(3.0, d);
        if (p.count("C"))
            out.low = 1.0 / (std::pow(3.0, d) * get("C"));
        else
            out.note = "lower bound needs the S_n constant C";
    } else if (id == "th3_upper") {
        out.high = kE * (get("n") + 1.0 + kTwoPi / get("delta")) / get("N");
    } else if (id == "th3_lower") {
        const double n = get("n"), N = get("N"), delta = get("delta"), lambda = get("lambda");
        const double m = std::min(1.0, 4.0 * kPi / (lambda * N));
        const double k = 4.0 * kE * lambda * n * (n + 1.0 + kTwoPi / delta);
        if (N * m > k) {
            out.low = (m - k / N) / 2.0;
        } else {
            out.applicable = false;
            out.note = "inapplicable: N min{1, 4pi/(lambda N)} <= 4 e lambda n (n+1+2pi/delta)";
        }
    } else if (id == "th4_upper") {
        out.high = 8.0 * kE / 3.0;
    } else if (id == "th4_lower") {
        const double sigma = get("sigma"), C = get("C");
        if (sigma > 0.0 && sigma < 1.0 / (16.0 * kE * kPi * C)) {
            out.low = (1.0 / (2.0 * C) - 8.0 * kE * kPi * sigma) / 3.0;
        } else {
            out.applicable = false;
            out.note = "inapplicable: need 0 < sigma < 1/(16 e pi C)";
        }
    } else if (id == "thNik") {
        const double n = get("n"), N = get("N"), gamma = get("gamma"), d = opt("d", 1.0);
        require(N >= gamma * n, "constants thNik: need N >= gamma n");
        out.high = std::exp(kTwoPi * d / gamma);
    } else if (id == "spline") {
        const double r = get("r"), n = get("n");
        const int order = static_cast<int>(opt("order", 1.0));
        require(order >= 1 && order < r, "constants spline: derivative order must lie in [1, r)");
        double b = 1.0;
        for (int i = 0; i < order; ++i)
            b *= 2.0 * (r - i) * (r - i) * n;
        out.high = b;
        out.note = "MZ grid needs N >= 2 r^2 n";
    } else if (id == "markov" || id == "markov_ri") {
        const double n = get("n"), a = get("a"), b = get("b");
        require(b > a, "constants markov: need b > a");
        const double order = opt("order", 1.0);
        const double c = (id == "markov" ? 2.0 : 8.0) * n * n / (b - a);
        out.high = std::pow(c, order);
        out.note = "MZ grid needs N >= (8/log 2) n^2";
    } else if (id == "grid_mz") {
        const double A = get("A"), B = opt("B", 1.0), d = opt("d", 1.0);
        const double e = std::exp(d * A * B);
        out.high = e;
        if (A < std::log(2.0) / (d * B)) {
            out.low = 2.0 - e;
        } else {
            out.applicable = false;
            out.note = "lower bound inapplicable: need A < log 2/(dB)";
        }
    } else {
        throw ValidationError("constants: unknown theorem id '" + id + "'");
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// discrete Zygmund-type bound and Nikolskii

struct MarginResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; // rhs - lhs
};

/// int Phi(e T) over the period by the trapezoid rule on max(16384, 256 n) points.
inline double zygmund_integral(const TrigPoly& T, const OrliczPhi& phi)
{
    require(T.dim == 1, "zygmund_integral: univariate T expected");
    const std::size_t M = std::max<std::size_t>(16384, 256 * static_cast<std::size_t>(std::max(1, T.n)));
    const double h = kTwoPi / static_cast<double>(M);
    double integral = 0.0;
    for (std::size_t j = 0; j < M; ++j)
        integral += phi(kE * std::abs(evaluate(T, h * static_cast<double>(j))));
    return integral * h;
}

/// Same check with int Phi(e T) supplied (reused across node sets).
inline MarginResult zygmund_discrete_bound_check(const TrigPoly& T, std::span<const double> nodes, const OrliczPhi& phi,
                                                 double integral)
{
    require(T.dim == 1, "zygmund_discrete_bound_check: univariate T expected");
    const auto g = mesh_gauges(std::vector<double>(nodes.begin(), nodes.end()), true);
    MarginResult r;
    for (double x : nodes)
        r.lhs += phi(std::abs(evaluate(T, x)));
    r.rhs = ((T.n + 1.0) / kTwoPi + 1.0 / g.delta) * integral;
    r.margin = r.rhs - r.lhs;
    return r;
}

/// sum_k Phi(T(tau_k)) <= ((n+1)/(2 pi) + 1/delta) int Phi(e T), with delta the minimal gap
/// (periodic wraparound).
inline MarginResult zygmund_discrete_bound_check(const TrigPoly& T, std::span<const double> nodes, const OrliczPhi& phi)
{
    return zygmund_discrete_bound_check(T, nodes, phi, zygmund_integral(T, phi));
}

struct NikolskiiResult {
    double sup = 0.0;       // ||T||_inf
    double norm = 0.0;      // ||T||_X
    double indicator = 0.0; // ||chi_{(0, 2pi/N)^d}||_X
    double constant = 0.0;  // e^{2 pi d/gamma}
    double bound = 0.0;     // constant ||T||_X / indicator
    double margin = 0.0;    // bound - sup
};

namespace detail {

inline double sup_trig(const TrigPoly& T)
{
    if (T.dim == 1)
        return sup_norm(FunctionModel(T)).value;
    const std::size_t M = std::max<std::size_t>(256, 16 * static_cast<std::size_t>(std::max(1, T.n)));
    const double h = kTwoPi / static_cast<double>(M);
    std::vector<std::pair<double, std::pair<double, double>>> top;
    for (std::size_t j = 0; j < M; ++j)
        for (std::size_t i = 0; i < M; ++i) {
            const double x = h * i, y = h * j;
            top.push_back({std::abs(evaluate2(T, x, y)), {x, y}});
        }
    std::partial_sort(top.begin(), top.begin() + 8, top.end(), [](auto& a, auto& b) { return a.first > b.first; });
    double best = top.front().first;
    for (int t = 0; t < 8; ++t) {
        double x = top[t].second.first, y = top[t].second.second;
        double w = h;
        for (int sweep = 0; sweep < 6; ++sweep) {
            auto rx = golden_maximize([&](double u) { return std::abs(evaluate2(T, u, y)); }, x - w, x + w, 1e-14);
            x = rx.x;
            auto ry = golden_maximize([&](double u) { return std::abs(evaluate2(T, x, u)); }, y - w, y + w, 1e-14);
            y = ry.x;
            best = std::max({best, rx.value, ry.value});
            w *= 0.5;
        }
    }
    return best;
}

inline double cube_indicator_norm(const NormSpec& spec, double side, int d)
{
    if (d == 1)
        return indicator_norm(spec, side, Domain::torus());
    require(!std::holds_alternative<WeightedLpSpec>(spec.v) && !std::holds_alternative<VariableLpSpec>(spec.v) &&
                !std::holds_alternative<MixedLpSpec>(spec.v),
            "indicator of a cube: rearrangement-invariant spec expected");
    const double area = std::pow(side, d);
    const double total = std::pow(kTwoPi, d);
    std::vector<double> v{1.0, 0.0}, w{area, total - area}, x{0.0, 0.0};
    return weighted_norm(v, w, x, spec);
}

} // namespace detail

/// ||T||_inf <= e^{2 pi d/gamma} ||T||_X / ||chi_{(0, 2pi/N)^d}||_X for N >= gamma n.
inline NikolskiiResult nikolskii_check(const TrigPoly& T, const NormSpec& spec, int N, double gamma)
{
    require(gamma > 0.0, "nikolskii_check: gamma must be positive");
    require(N >= gamma * T.n, "nikolskii_check: need N >= gamma n");
    NikolskiiResult r;
    r.constant = std::exp(kTwoPi * T.dim / gamma);
    r.indicator = detail::cube_indicator_norm(spec, kTwoPi / N, T.dim);
    r.norm = model_norm(FunctionModel(T), spec);
    r.sup = detail::sup_trig(T);
    r.bound = r.constant * r.norm / r.indicator;
    r.margin = r.bound - r.sup;
    return r;
}

/// Lp -> Lq transfer: ||T||_q <= (C/||chi||_p)^{1 - p/q} ||T||_p with ||chi||_p = (2pi/N)^{d/p}.
inline double nikolskii_transfer_bound(double p, double q, int N, double gamma, int d, double norm_p)
{
    require(p > 0.0 && q > p, "nikolskii_transfer_bound: need 0 < p < q");
    const double C = std::exp(kTwoPi * d / gamma);
    const double chi = std::pow(std::pow(kTwoPi / N, d), 1.0 / p);
    return std::pow(C / chi, 1.0 - p / q) * norm_p;
}

/// Orlicz form: ||T||_inf <= C Phi^{-1}((N/2pi)^d) ||T||_Phi (Luxemburg).
inline double nikolskii_orlicz_bound(const OrliczPhi& phi, int N, double gamma, int d, double luxemburg_norm)
{
    const double C = std::exp(kTwoPi * d / gamma);
    return C * phi.inverse(std::pow(N / kTwoPi, d)) * luxemburg_norm;
}

// ---------------------------------------------------------------------------------------------
// Bernstein / Markov ratio search

struct BernsteinRequest {
    Family family = Family::Trig;
    int n = 1;
    NormSpec spec = NormSpec::lp(kInf);
    WindowWeight phi = WindowWeight::Unit;
    int order = 1;       // derivative order r
    double beta = 1.0;   // n^{r beta} normalisation
    int trials = 20;
    std::uint64_t seed = 0;
    int ascent_steps = 50;
    int spline_order = 3;
    Interval span{-1.0, 1.0};
    std::vector<double> lambdas;
    bool real_valued = true;
    int jobs = 1;
};

struct BernsteinReport {
    double raw_ratio = 0.0;        // sup ||phi^r F^(r)||_X / ||F||_X found
    double normalized = 0.0;       // raw_ratio / n^{r beta}
    double best_random = 0.0;      // raw, random trials only
    double best_probe = 0.0;       // raw, family probes only
    std::optional<double> bound;   // matching closed-form bound on the raw ratio
    double gamma_lambda = 0.0;     // exponential families
    std::vector<double> argmax;    // parameter vector of the best function
};

namespace detail {

/// Real parameter vector for a model (coefficients; complex ones split into re/im).
inline std::vector<double> model_params(const FunctionModel& f)
{
    std::vector<double> p;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, TrigPoly>) {
                if (m.real_valued && m.dim == 1) {
                    p.push_back(m.coeff(0).real());
                    for (int k = 1; k <= m.n; ++k) {
                        p.push_back(m.coeff(k).real());
                        p.push_back(m.coeff(k).imag());
                    }
                } else {
                    for (const auto& c : m.coeffs) {
                        p.push_back(c.real());
                        p.push_back(c.imag());
                    }
                }
            } else if constexpr (std::is_same_v<M, AlgPoly>) {
                p = m.cheb;
            } else if constexpr (std::is_same_v<M, PeriodicSpline>) {
                p = m.coeffs;
            } else {
                for (const auto& c : m.coeffs) {
                    p.push_back(c.real());
                    p.push_back(c.imag());
                }
            }
        },
        f.repr);
    return p;
}

inline FunctionModel model_from_params(const FunctionModel& like, std::span<const double> p)
{
    return std::visit(
        [&](const auto& m) -> FunctionModel {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, TrigPoly>) {
                TrigPoly t = m;
                if (m.real_valued && m.dim == 1) {
                    t.at(0) = p[0];
                    for (int k = 1; k <= m.n; ++k) {
                        t.at(k) = Complex(p[2 * k - 1], p[2 * k]);
                        t.at(-k) = std::conj(t.at(k));
                    }
                } else {
                    for (std::size_t i = 0; i < t.coeffs.size(); ++i)
                        t.coeffs[i] = Complex(p[2 * i], p[2 * i + 1]);
                }
                return t;
            } else if constexpr (std::is_same_v<M, AlgPoly>) {
                AlgPoly a = m;
                a.cheb.assign(p.begin(), p.end());
                return a;
            } else if constexpr (std::is_same_v<M, PeriodicSpline>) {
                PeriodicSpline s = m;
                s.coeffs.assign(p.begin(), p.end());
                return s;
            } else {
                ExpSum e = m;
                for (std::size_t i = 0; i < e.coeffs.size(); ++i)
                    e.coeffs[i] = Complex(p[2 * i], p[2 * i + 1]);
                return e;
            }
        },
        like.repr);
}

} // namespace detail

/// ||phi^r F^(r)||_X / ||F||_X (sup norms through the polished scan); 0 when ||F||_X = 0.
inline double bernstein_raw_ratio(const FunctionModel& F, const NormSpec& spec, int order,
                                  WindowWeight phi = WindowWeight::Unit)
{
    require(order >= 1, "bernstein ratio: derivative order must be at least 1");
    const double den = model_norm(F, spec);
    if (den == 0.0)
        return 0.0;
    const int n = std::max(1, F.degree());
    if (F.dim() == 2) {
        require(phi == WindowWeight::Unit, "bernstein ratio: weighted windows are one-dimensional");
        const auto D = differentiate_partial(std::get<TrigPoly>(F.repr), order, 0);
        return model_norm(FunctionModel(D), spec) / den;
    }
    const FunctionModel D = differentiate(F, order, true);
    auto g = [&](double x) { return std::pow(window_weight(phi, x, n), order) * evaluate(D, x); };
    double num;
    if (spec.is_sup())
        num = sup_abs(g, F.domain(), default_grid_size(n)).value;
    else
        num = continuous_norm(sample_fn(g, default_grid(F)), spec);
    return num / den;
}

namespace detail {

/// Monomial coefficients of T_m((2x - lo - hi)/(hi - lo)).
inline std::vector<double> chebyshev_monomials(int m, double lo, double hi)
{
    const double a = 2.0 / (hi - lo), b = -(lo + hi) / (hi - lo);
    std::vector<double> prev{1.0}, cur{b, a};
    if (m == 0)
        return prev;
    for (int k = 1; k < m; ++k) {
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i] += 2.0 * b * cur[i];
            next[i + 1] += 2.0 * a * cur[i];
        }
        for (std::size_t i = 0; i < prev.size(); ++i)
            next[i] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

} // namespace detail

/// Extremal probes per family: sin(nx), cos(nx) for trig, T_n for algebraic, alternating
/// coefficients for splines, the top exponential and (for equally spaced exponents) a mapped
/// Chebyshev polynomial for exponential sums.
inline std::vector<FunctionModel> bernstein_probes(const BernsteinRequest& q)
{
    std::vector<FunctionModel> out;
    switch (q.family) {
    case Family::Trig:
        if (q.real_valued || true) {
            out.emplace_back(trig_sin(q.n, q.n));
            out.emplace_back(trig_cos(q.n, q.n));
        }
        break;
    case Family::Alg: out.emplace_back(AlgPoly::chebyshev(q.n, q.span)); break;
    case Family::Spline: {
        std::vector<double> c(static_cast<std::size_t>(q.n));
        for (std::size_t j = 0; j < c.size(); ++j)
            c[j] = j % 2 ? -1.0 : 1.0;
        out.emplace_back(PeriodicSpline::make(q.spline_order, c));
        break;
    }
    case Family::Exp:
    case Family::Muntz: {
        std::vector<double> lam = q.lambdas;
        if (lam.empty())
            for (int j = 0; j <= q.n; ++j)
                lam.push_back(j);
        const bool muntz = q.family == Family::Muntz;
        std::vector<Complex> c(lam.size(), Complex{});
        c.back() = 1.0;
        out.emplace_back(ExpSum::make(lam, c, q.span, muntz));
        // lambda_j = lambda_0 + j step: u^{lambda_0} T_m(u^step) with u = e^t (or x), T_m the
        // Chebyshev polynomial of the image interval
        const std::size_t m = lam.size() - 1;
        bool progression = m >= 1;
        const double step = m >= 1 ? (lam[m] - lam[0]) / static_cast<double>(m) : 0.0;
        for (std::size_t j = 0; j <= m && progression; ++j)
            progression = std::abs(lam[j] - (lam[0] + step * static_cast<double>(j))) <= 1e-12 * std::max(1.0, std::abs(lam[m]));
        if (progression) {
            auto image = [&](double t) { return muntz ? std::pow(t, step) : std::exp(step * t); };
            const auto mono = detail::chebyshev_monomials(static_cast<int>(m), image(q.span.lo), image(q.span.hi));
            std::vector<Complex> cc(mono.begin(), mono.end());
            out.emplace_back(ExpSum::make(lam, cc, q.span, muntz));
        }
        break;
    }
    }
    return out;
}

/// Closed-form bound on the raw ratio when one exists: n^r (trig, translation invariant X),
/// (2n^2/(b-a))^r (algebraic, sup norm), (8n^2/(b-a))^r (algebraic, other specs), the spline chain
/// prod 2(s-i)^2 n; none for weighted windows or exponential sums.
inline std::optional<double> bernstein_bound(const BernsteinRequest& q)
{
    if (q.phi != WindowWeight::Unit)
        return std::nullopt;
    const double n = q.n;
    switch (q.family) {
    case Family::Trig: return std::pow(n, q.order);
    case Family::Alg: {
        const double c = (q.spec.is_sup() ? 2.0 : 8.0) * n * n / q.span.length();
        return std::pow(c, q.order);
    }
    case Family::Spline: {
        if (q.order >= q.spline_order)
            return std::nullopt;
        double b = 1.0;
        for (int i = 0; i < q.order; ++i)
            b *= 2.0 * (q.spline_order - i) * (q.spline_order - i) * n;
        return b;
    }
    default: return std::nullopt;
    }
}

/// Random trials, family probes, then projected-gradient ascent on the coefficient unit sphere
/// from the best candidate (forward-difference gradient, halving line search).
inline BernsteinReport bernstein_estimate(const BernsteinRequest& q)
{
    BernsteinReport rep;
    rep.bound = bernstein_bound(q);
    auto ratio = [&](const FunctionModel& f) { return bernstein_raw_ratio(f, q.spec, q.order, q.phi); };

    ModelRequest mr{q.family, q.n, 0, q.real_valued, q.spline_order, 1, q.span, q.lambdas};
    if (q.family == Family::Spline)
        mr.span = {0.0, 1.0};
    auto randoms = detail::parallel_map<std::pair<double, std::vector<double>>>(
        static_cast<std::size_t>(q.trials), q.jobs, [&](std::size_t i) {
            ModelRequest r = mr;
            r.seed = derive_seed(q.seed, i);
            const auto f = random_model(r);
            return std::make_pair(ratio(f), detail::model_params(f));
        });
    std::optional<FunctionModel> best_model;
    double best = -1.0;
    for (const auto& [v, p] : randoms) {
        rep.best_random = std::max(rep.best_random, v);
        if (v > best) {
            best = v;
            ModelRequest r = mr;
            r.seed = derive_seed(q.seed, 0);
            best_model = detail::model_from_params(random_model(r), p);
        }
    }
    for (const auto& f : bernstein_probes(q)) {
        const double v = ratio(f);
        rep.best_probe = std::max(rep.best_probe, v);
        if (v > best) {
            best = v;
            best_model = f;
        }
    }
    require(best_model.has_value(), "bernstein_estimate: need at least one trial or probe");

    // ascent on the unit sphere
    std::vector<double> c = detail::model_params(*best_model);
    auto normalize = [](std::vector<double>& v) {
        double s = 0.0;
        for (double x : v)
            s += x * x;
        s = std::sqrt(s);
        if (s > 0.0)
            for (double& x : v)
                x /= s;
    };
    normalize(c);
    auto at = [&](const std::vector<double>& p) { return ratio(detail::model_from_params(*best_model, p)); };
    double cur = at(c);
    double step = 0.1;
    for (int it = 0; it < q.ascent_steps && step > 1e-10; ++it) {
        std::vector<double> grad(c.size());
        const double eps = 1e-6;
        for (std::size_t i = 0; i < c.size(); ++i) {
            auto cp = c;
            cp[i] += eps;
            grad[i] = (at(cp) - cur) / eps;
        }
        double dot = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i)
            dot += grad[i] * c[i];
        double gn = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            grad[i] -= dot * c[i];
            gn += grad[i] * grad[i];
        }
        gn = std::sqrt(gn);
        if (gn == 0.0)
            break;
        bool moved = false;
        while (step > 1e-10) {
            auto trial = c;
            for (std::size_t i = 0; i < c.size(); ++i)
                trial[i] += step * grad[i] / gn;
            normalize(trial);
            const double v = at(trial);
            if (v > cur) {
                c = std::move(trial);
                cur = v;
                moved = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if (!moved)
            break;
    }
    if (cur > best) {
        best = cur;
    } else {
        c = detail::model_params(*best_model);
    }
    rep.raw_ratio = best;
    rep.argmax = c;
    rep.normalized = best / std::pow(static_cast<double>(q.n), q.order * q.beta);
    if (q.family == Family::Exp || q.family == Family::Muntz) {
        std::vector<double> lam = q.lambdas;
        if (lam.empty())
            for (int j = 0; j <= q.n; ++j)
                lam.push_back(j);
        rep.gamma_lambda = gamma_lambda(lam);
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Gauss-Jacobi MZ experiment

struct QuadratureMzRequest {
    int n = 8;
    double alpha = 0.0;
    double beta = 0.0;
    double p = 2.0;
    int trials = 100;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct QuadratureMzReport {
    RatioReport christoffel;   // (sum |P(x_j)|^p mu_j / int |P|^p w)^{1/p}, Christoffel mu_j
    RatioReport cells;         // same with mu_j = int over (x_{j-1}, x_{j+1}) of w
    bool certified = false;    // parameters inside the admissible range for the two-sided estimate
    bool cms_valid = false;    // mu_k <= int_{Omega_k} w for all k
    double max_cms_ratio = 0.0;
    double top_poly_sum = 0.0; // sum psi_{n-1}(x_j)^2 mu_j
};

inline bool jacobi_mz_certified(double alpha, double beta, double p)
{
    if (!(p > 1.0 && p < kInf))
        return false;
    auto ok = [&](double a) { return std::abs((a + 1.0) * (0.5 - 1.0 / p)) < std::min(0.25, (a + 1.0) / 2.0); };
    return ok(alpha) && ok(beta);
}

/// Random P in P_{n-1} (orthonormal-basis coefficients i.i.d. normal) against the n-point
/// Gauss-Jacobi rule. For even integer p the integral uses a larger Gauss rule (exact);
/// otherwise the graded grid with the Jacobi weight.
inline QuadratureMzReport quadrature_mz_experiment(const QuadratureMzRequest& q)
{
    require(q.n >= 1, "quadrature_mz_experiment: n must be at least 1");
    require(q.p > 0.0 && q.p < kInf, "quadrature_mz_experiment: finite p expected");
    const auto rule = gauss_jacobi(q.n, q.alpha, q.beta);
    const auto weight = WeightSpec::jacobi(q.alpha, q.beta);
    const auto cms = cms_cells(rule, weight);
    std::vector<double> cell_mass;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        cell_mass.push_back(rule.weights[k] / cms.ratios[k]);

    QuadratureMzReport rep;
    rep.certified = jacobi_mz_certified(q.alpha, q.beta, q.p);
    rep.cms_valid = cms.valid;
    rep.max_cms_ratio = cms.max_ratio;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double v = orthonormal_jacobi(q.n - 1, q.alpha, q.beta, rule.nodes[k], rule.mass).back();
        rep.top_poly_sum += v * v * rule.weights[k];
    }

    const bool even = std::floor(q.p) == q.p && static_cast<long>(q.p) % 2 == 0;
    std::optional<GaussRule> big;
    if (even)
        big = gauss_jacobi(static_cast<int>(q.n * q.p / 2.0) + 2, q.alpha, q.beta);
    auto grid = interval_grid({-1.0, 1.0}, default_grid_size(q.n), 1.0, std::min({q.alpha, q.beta, 0.0}));
    const auto spec = NormSpec{WeightedLpSpec{q.p, weight}};

    auto eval = [&](std::span<const double> c, double x) {
        const auto psi = orthonormal_jacobi(q.n - 1, q.alpha, q.beta, x, rule.mass);
        double s = 0.0;
        for (std::size_t k = 0; k < psi.size(); ++k)
            s += c[k] * psi[k];
        return s;
    };
    auto results = detail::parallel_map<std::pair<std::optional<double>, std::optional<double>>>(
        static_cast<std::size_t>(q.trials), q.jobs, [&](std::size_t i) {
            CounterRng rng(derive_seed(q.seed, i));
            std::vector<double> c(static_cast<std::size_t>(q.n));
            for (auto& v : c)
                v = rng.normal();
            double integral;
            if (big) {
                integral = 0.0;
                for (std::size_t k = 0; k < big->nodes.size(); ++k)
                    integral += big->weights[k] * std::pow(std::abs(eval(c, big->nodes[k])), q.p);
            } else {
                integral = std::pow(continuous_norm(sample_fn([&](double x) { return Complex(eval(c, x)); }, grid), spec), q.p);
            }
            if (integral == 0.0)
                return std::make_pair(std::optional<double>{}, std::optional<double>{});
            double s1 = 0.0, s2 = 0.0;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double a = std::pow(std::abs(eval(c, rule.nodes[k])), q.p);
                s1 += a * rule.weights[k];
                s2 += a * cell_mass[k];
            }
            return std::make_pair(std::optional<double>(std::pow(s1 / integral, 1.0 / q.p)),
                                  std::optional<double>(std::pow(s2 / integral, 1.0 / q.p)));
        });
    rep.christoffel.seed = rep.cells.seed = q.seed;
    for (const auto& [a, b] : results) {
        rep.christoffel.add(a);
        rep.cells.add(b);
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------
// empirical S_n operator norm (lower estimate)

struct SnEstimate {
    double lower_estimate = 0.0; // max ||S_n f||_X / ||f||_X found; never a certified bound
    int trials = 0;
};

/// Random real trigonometric f of degree 4n, the Fejer-smoothed sign of the Dirichlet kernel and the
/// Fejer kernel K_{4n} itself.
inline SnEstimate sn_norm_lower_estimate(int n, const NormSpec& spec, int trials, std::uint64_t seed, int jobs = 1)
{
    require(n >= 1 && trials >= 0, "sn_norm_lower_estimate: need n >= 1");
    const int big = 4 * n;
    auto ratio = [&](const TrigPoly& f) {
        const double den = model_norm(FunctionModel(f), spec);
        return den == 0.0 ? 0.0 : model_norm(FunctionModel(partial_sum(f, n)), spec) / den;
    };
    auto vals = detail::parallel_map<double>(static_cast<std::size_t>(trials), jobs, [&](std::size_t i) {
        return ratio(std::get<TrigPoly>(random_model({Family::Trig, big, derive_seed(seed, i), true}).repr));
    });
    SnEstimate r;
    r.trials = trials;
    for (double v : vals)
        r.lower_estimate = std::max(r.lower_estimate, v);
    const auto dn = KernelSpec::dirichlet(n);
    auto sgn = sample_fn([&](double x) { return Complex(dn.value(x) >= 0.0 ? 1.0 : -1.0); },
                         periodic_grid(default_grid_size(big)));
    r.lower_estimate = std::max(r.lower_estimate, ratio(fejer_mean(sgn, big + 1)));
    auto ones = TrigPoly::zero(big);
    for (int k = -big; k <= big; ++k)
        ones.at(k) = 1.0;
    ones.real_valued = true;
    r.lower_estimate = std::max(r.lower_estimate, ratio(fejer_mean(ones, big + 1)));
    return r;
}

} // namespace mzlab
