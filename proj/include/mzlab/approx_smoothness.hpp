#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mzlab/core.hpp"
#include "mzlab/detail/numerics.hpp"
#include "mzlab/detail/rng.hpp"
#include "mzlab/detail/simplex.hpp"
#include "mzlab/function_models.hpp"
#include "mzlab/norm_engine.hpp"
#include "mzlab/operators_kernels.hpp"

namespace mzlab {

using RealFn = std::function<double(double)>;

// ---------------------------------------------------------------------------------------------
// target catalog

/// E_nu(f)_{L_2} <= K nu^{-s} for nu >= 1.
struct L2Decay {
    double K = 0.0;
    double s = 0.0;
};

struct TargetFunction {
    std::string id;
    RealFn f;
    std::function<Complex(int)> coeff; // exact Fourier coefficients c_k
    int max_freq = -1;                 // finite spectrum, or -1
    std::optional<L2Decay> decay;      // rigorous L_2 tail bound when known
    std::string smoothness;

    double operator()(double x) const { return f(x); }

    /// E_n(f)_{L_2} = (2 pi sum_{|k|>n} |c_k|^2)^{1/2}, summed from the tail upwards.
    [[nodiscard]] double l2_best_error(int n) const
    {
        require(n >= 0, "l2_best_error: n must be non-negative");
        if (max_freq >= 0 && n >= max_freq)
            return 0.0;
        const int stop = max_freq >= 0 ? max_freq : n + (1 << 21);
        double s = 0.0;
        for (int k = stop; k > n; --k)
            s += std::norm(coeff(k));
        if (max_freq < 0) {
            // remainder beyond the summed range, from the local power law of |c_k|
            const double c1 = std::abs(coeff(stop)), c2 = std::abs(coeff(stop / 2));
            if (c1 > 0.0 && c2 > 0.0) {
                const double p = std::log(c2 / c1) / std::log(2.0);
                if (p > 0.5)
                    s += c1 * c1 * stop / (2.0 * p - 1.0);
            }
        }
        return std::sqrt(2.0 * kTwoPi * s);
    }

    /// E_0 .. E_{n_max} in one downward pass.
    [[nodiscard]] std::vector<double> l2_best_errors(int n_max) const
    {
        std::vector<double> e(static_cast<std::size_t>(n_max) + 1);
        const double top = l2_best_error(n_max);
        double s = top * top / (2.0 * kTwoPi);
        e[static_cast<std::size_t>(n_max)] = top;
        for (int k = n_max; k > 0; --k) {
            s += std::norm(coeff(k));
            e[static_cast<std::size_t>(k - 1)] = std::sqrt(2.0 * kTwoPi * s);
        }
        return e;
    }
};

/// |cos x| = 2/pi + sum_k (4/pi)(-1)^{k+1}/(4k^2-1) cos 2kx.
inline TargetFunction target_abs_cos()
{
    TargetFunction t;
    t.id = "abs_cos";
    t.f = [](double x) { return std::abs(std::cos(x)); };
    t.coeff = [](int k) {
        k = std::abs(k);
        if (k % 2)
            return Complex{};
        const int m = k / 2;
        const double sgn = m % 2 ? 1.0 : -1.0;
        return Complex(m == 0 ? 2.0 / kPi : sgn * (2.0 / kPi) * 1.0 / (4.0 * m * m - 1.0));
    };
    // |c_m| <= 8/(3 pi m^2) for m >= 2
    t.decay = L2Decay{std::sqrt(256.0 / (27.0 * kPi)), 1.5};
    t.smoothness = "f' in BV";
    return t;
}

/// |sin x|^theta, 0 < theta < 2.
inline TargetFunction target_power_cusp(double theta)
{
    require(theta > 0.0 && theta < 2.0, "power_cusp: theta must lie in (0, 2)");
    TargetFunction t;
    t.id = "power_cusp:" + format_number(theta);
    t.f = [theta](double x) { return std::pow(std::abs(std::sin(x)), theta); };
    const double g = std::tgamma(theta + 1.0);
    t.coeff = [theta, g](int k) {
        k = std::abs(k);
        if (k % 2)
            return Complex{};
        const int m = k / 2;
        if (m == 0)
            return Complex(g / (std::pow(2.0, theta) * std::pow(std::tgamma(1.0 + theta / 2.0), 2)));
        const double r = std::exp(std::lgamma(m - theta / 2.0) - std::lgamma(m + 1.0 + theta / 2.0));
        return Complex(-g * std::sin(kPi * theta / 2.0) / (kPi * std::pow(2.0, theta)) * r);
    };
    t.smoothness = "Lip " + format_number(theta);
    return t;
}

/// sum_{j=1}^{depth} 2^{-j} cos(2^j x).
inline TargetFunction target_lacunary(int depth)
{
    require(depth >= 1 && depth <= 24, "lacunary: depth must lie in [1, 24]");
    TargetFunction t;
    t.id = "lacunary:" + std::to_string(depth);
    t.f = [depth](double x) {
        double s = 0.0;
        for (int j = 1; j <= depth; ++j)
            s += std::ldexp(std::cos(std::ldexp(x, j)), -j);
        return s;
    };
    t.coeff = [depth](int k) {
        k = std::abs(k);
        for (int j = 1; j <= depth; ++j)
            if (k == (1 << j))
                return Complex(std::ldexp(0.5, -j));
        return Complex{};
    };
    t.max_freq = 1 << depth;
    t.decay = L2Decay{std::sqrt(4.0 * kPi / 3.0), 1.0};
    t.smoothness = "Lip 1 (Zygmund class)";
    return t;
}

/// e^{cos x}, c_k = I_k(1).
inline TargetFunction target_smooth()
{
    TargetFunction t;
    t.id = "smooth_test";
    t.f = [](double x) { return std::exp(std::cos(x)); };
    t.coeff = [](int k) {
        k = std::abs(k);
        return k > 60 ? Complex{} : Complex(std::cyl_bessel_i(static_cast<double>(k), 1.0));
    };
    t.max_freq = 60; // I_60(1) < 1e-100
    t.decay = L2Decay{11.0, 3.0};
    t.smoothness = "analytic";
    return t;
}

/// abs_cos | power_cusp:<theta> | lacunary:<depth> | smooth_test
inline TargetFunction make_target(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    auto arg = [&]() {
        require(colon != std::string::npos, "target '" + text + "' needs a parameter");
        try {
            std::size_t used = 0;
            const double v = std::stod(text.substr(colon + 1), &used);
            require(used == text.size() - colon - 1, "bad number");
            return v;
        } catch (const std::exception&) {
            throw ValidationError("target '" + text + "': bad parameter");
        }
    };
    if (head == "abs_cos" && colon == std::string::npos)
        return target_abs_cos();
    if (head == "smooth_test" && colon == std::string::npos)
        return target_smooth();
    if (head == "power_cusp")
        return target_power_cusp(arg());
    if (head == "lacunary") {
        const double d = arg();
        require(d == std::floor(d), "lacunary depth must be an integer");
        return target_lacunary(static_cast<int>(d));
    }
    throw ValidationError("unknown target '" + text + "'");
}

// ---------------------------------------------------------------------------------------------
// differences and moduli

/// r-th forward difference with wraparound; h must be a multiple of the grid step.
inline SampledFunction difference(const SampledFunction& f, double h, int r)
{
    require(f.grid && f.grid->trapezoid && f.grid->dim == 1, "difference: uniform periodic samples required");
    require(r >= 1, "difference: order must be at least 1");
    const std::size_t M = f.values.size();
    const double step = f.grid->domain.measure() / static_cast<double>(M);
    const double q = h / step;
    const double qi = std::round(q);
    require(std::abs(q - qi) <= 1e-9 * std::max(1.0, std::abs(q)), "difference: h must be a multiple of the grid step");
    const long long s = static_cast<long long>(qi);
    SampledFunction out{f.grid, std::vector<Complex>(M)};
    const long long Ml = static_cast<long long>(M);
    for (std::size_t j = 0; j < M; ++j) {
        Complex acc{};
        for (int nu = 0; nu <= r; ++nu) {
            long long idx = (static_cast<long long>(j) + (r - nu) * s) % Ml;
            if (idx < 0)
                idx += Ml;
            const double c = detail::binomial(r, nu) * (nu % 2 ? -1.0 : 1.0);
            acc += c * f.values[static_cast<std::size_t>(idx)];
        }
        out.values[j] = acc;
    }
    return out;
}

namespace detail {

inline double difference_norm(const RealFn& f, double h, int r, const NormSpec& spec,
                              const std::shared_ptr<const QuadratureGrid>& grid)
{
    if (spec.is_sup()) {
        auto d = [&](double x) {
            double acc = 0.0;
            for (int nu = 0; nu <= r; ++nu)
                acc += binomial(r, nu) * (nu % 2 ? -1.0 : 1.0) * f(x + (r - nu) * h);
            return acc;
        };
        return sup_abs(d, grid->domain, grid->points.size(), 4).value;
    }
    std::vector<double> v(grid->points.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double x = grid->points[j];
        double acc = 0.0;
        for (int nu = 0; nu <= r; ++nu)
            acc += binomial(r, nu) * (nu % 2 ? -1.0 : 1.0) * f(x + (r - nu) * h);
        v[j] = std::abs(acc);
    }
    return weighted_norm(v, grid->weights, grid->points, spec);
}

} // namespace detail

/// omega_r(f, delta)_X: 256-point h scan on (0, delta], golden refinement around the best h.
/// f is evaluated directly, so every h is an exact shift. Norms use M trapezoid points.
inline double modulus(const RealFn& f, double delta, int r, const NormSpec& spec, std::size_t M = 4096)
{
    require(delta > 0.0 && r >= 1, "modulus: need delta > 0 and r >= 1");
    const auto grid = periodic_grid(M);
    const int K = 256;
    double best = 0.0;
    int arg = 1;
    for (int k = 1; k <= K; ++k) {
        const double v = detail::difference_norm(f, delta * k / K, r, spec, grid);
        if (v > best) {
            best = v;
            arg = k;
        }
    }
    const double a = delta * (arg - 1) / K, b = delta * std::min(arg + 1, K) / K;
    auto res = detail::golden_maximize([&](double h) { return detail::difference_norm(f, h, r, spec, grid); },
                                       std::max(a, 1e-300), b, 1e-12 * delta);
    return std::max(best, res.value);
}

struct TauResult {
    double value = 0.0;
    SampledFunction local; // omega_r(f, x, delta) on the evaluation grid
};

/// tau_r(f, delta)_X = ||omega_r(f, ., delta)||_X with
/// omega_r(f, x, delta) = sup{|Delta_h^r f(t)| : t, t + rh in [x - r delta/2, x + r delta/2]}.
/// f is sampled on a uniform grid of step s <= delta/32 (at least `min_points` points); h runs
/// over multiples of s up to delta and t over grid points, and each x is a grid point.
inline TauResult tau_modulus(const RealFn& f, double delta, int r, const NormSpec& spec, std::size_t min_points = 4096)
{
    require(delta > 0.0 && r >= 1, "tau_modulus: need delta > 0 and r >= 1");
    std::size_t K = std::max<std::size_t>(min_points, static_cast<std::size_t>(std::ceil(kTwoPi / (delta / 32.0))));
    require(K <= (std::size_t{1} << 24), "tau_modulus: delta too small");
    const auto grid = periodic_grid(K);
    const double s = kTwoPi / static_cast<double>(K);
    const long long H = std::max<long long>(1, static_cast<long long>(std::floor(delta / s * (1 + 1e-12))));
    const long long half = (r * H) / 2; // window [x - half, x + half] in steps
    const long long Kl = static_cast<long long>(K);
    std::vector<double> fv(K);
    for (std::size_t j = 0; j < K; ++j)
        fv[j] = f(grid->points[j]);
    auto at = [&](long long i) {
        i %= Kl;
        return fv[static_cast<std::size_t>(i < 0 ? i + Kl : i)];
    };
    std::vector<double> local(K, 0.0);
    std::vector<double> d(K);
    for (long long h = 1; h <= H && r * h <= 2 * half; ++h) {
        for (long long t = 0; t < Kl; ++t) {
            double acc = 0.0;
            for (int nu = 0; nu <= r; ++nu)
                acc += detail::binomial(r, nu) * (nu % 2 ? -1.0 : 1.0) * at(t + (r - nu) * h);
            d[static_cast<std::size_t>(t)] = std::abs(acc);
        }
        // t ranges over [x - half, x + half - r h]: a sliding maximum of width w
        const long long w = 2 * half - r * h + 1;
        std::deque<long long> dq;
        auto value = [&](long long i) { return d[static_cast<std::size_t>(((i % Kl) + Kl) % Kl)]; };
        for (long long i = -half; i < -half + w; ++i) {
            while (!dq.empty() && value(dq.back()) <= value(i))
                dq.pop_back();
            dq.push_back(i);
        }
        for (long long x = 0; x < Kl; ++x) {
            const long long lo = x - half;
            while (dq.front() < lo)
                dq.pop_front();
            local[static_cast<std::size_t>(x)] = std::max(local[static_cast<std::size_t>(x)], value(dq.front()));
            const long long next = lo + w; // enters for x + 1
            while (!dq.empty() && value(dq.back()) <= value(next))
                dq.pop_back();
            dq.push_back(next);
        }
    }
    TauResult out;
    out.local = SampledFunction{grid, std::vector<Complex>(local.begin(), local.end())};
    out.value = weighted_norm(local, grid->weights, grid->points, spec);
    return out;
}

// ---------------------------------------------------------------------------------------------
// best and one-sided approximation

namespace detail {

/// Real basis 1, cos x, sin x, ..., cos nx, sin nx.
inline double trig_basis(std::size_t i, double x)
{
    if (i == 0)
        return 1.0;
    const double k = static_cast<double>((i + 1) / 2);
    return i % 2 ? std::cos(k * x) : std::sin(k * x);
}

inline TrigPoly trig_from_real(std::span<const double> a, int n)
{
    auto t = TrigPoly::zero(n);
    t.real_valued = true;
    t.at(0) = a[0];
    for (int k = 1; k <= n; ++k) {
        const Complex c(0.5 * a[2 * k - 1], -0.5 * a[2 * k]);
        t.at(k) = c;
        t.at(-k) = std::conj(c);
    }
    return t;
}

inline std::vector<double> real_from_trig(const TrigPoly& t, int n)
{
    std::vector<double> a(static_cast<std::size_t>(2 * n + 1), 0.0);
    a[0] = t.coeff(0).real();
    for (int k = 1; k <= n; ++k) {
        a[2 * k - 1] = 2.0 * t.coeff(k).real();
        a[2 * k] = -2.0 * t.coeff(k).imag();
    }
    return a;
}

struct BasisTable {
    std::shared_ptr<const QuadratureGrid> grid;
    std::vector<std::vector<double>> phi; // phi[i][j] = basis i at grid point j
    std::vector<double> f;
};

inline BasisTable basis_table(const RealFn& f, int n, std::size_t M)
{
    BasisTable b;
    b.grid = periodic_grid(M);
    const auto& x = b.grid->points;
    b.phi.assign(static_cast<std::size_t>(2 * n + 1), std::vector<double>(M));
    for (std::size_t i = 0; i < b.phi.size(); ++i)
        for (std::size_t j = 0; j < M; ++j)
            b.phi[i][j] = trig_basis(i, x[j]);
    b.f.resize(M);
    for (std::size_t j = 0; j < M; ++j)
        b.f[j] = f(x[j]);
    return b;
}

/// Coordinate descent with golden line searches; three runs (the start and two seeded
/// perturbations of the incumbent). Stops a run when a sweep improves by less than `tol`
/// relative at the smallest step.
template <class Obj>
std::vector<double> coordinate_descent(std::vector<double> start, Obj&& obj, double scale, double tol = 1e-8,
                                       std::uint64_t seed = 1)
{
    std::vector<double> best = start;
    double best_val = obj(best);
    CounterRng rng(seed);
    for (int run = 0; run < 3; ++run) {
        std::vector<double> a = best;
        if (run > 0)
            for (double& v : a)
                v += 0.05 * scale * rng.normal();
        double cur = obj(a);
        double step = scale;
        for (int sweep = 0; sweep < 400 && step > 1e-9 * scale; ++sweep) {
            const double before = cur;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double ai = a[i];
                auto line = [&](double t) {
                    a[i] = ai + t;
                    return obj(a);
                };
                auto r = golden_minimize(line, -step, step, 1e-3 * step);
                if (r.value < cur) {
                    a[i] = ai + r.x;
                    cur = r.value;
                } else {
                    a[i] = ai;
                }
            }
            if (before - cur <= tol * std::max(before, 1e-300))
                step *= 0.25;
        }
        if (cur < best_val) {
            best_val = cur;
            best = a;
        }
    }
    return best;
}

} // namespace detail

struct ApproxResult {
    double value = 0.0; // E_n(f)_X
    TrigPoly poly;      // minimiser found
    bool local_only = false; // quasi-norm target: a local optimum only
    double lower_bound = 0.0; // minimax only: levelled reference error
};

/// Minimax (sup norm) approximation on the M-point grid by discrete Remez exchange:
/// solve f - T = (-1)^k E on a reference of 2n+2 grid points, replace the reference by the
/// alternating extrema of the error (one per sign run, thinned by dropping the smallest and
/// merging its neighbours), stop when max|f - T| and |E| agree to 1e-12.
/// `lower_bound` is the levelled |E| (a lower bound for the grid minimax error).
inline ApproxResult minimax_approx(const RealFn& f, int n, std::size_t M)
{
    const std::size_t m = static_cast<std::size_t>(2 * n + 2);
    require(n >= 0 && M >= 2 * m, "minimax_approx: grid too small");
    const auto b = detail::basis_table(f, n, M);
    const std::size_t dims = m - 1;
    std::vector<std::size_t> ref(m);
    for (std::size_t k = 0; k < m; ++k)
        ref[k] = k * M / m;
    double fscale = 0.0;
    for (double v : b.f)
        fscale = std::max(fscale, std::abs(v));
    std::vector<double> a(dims, 0.0), err(M);
    double level = 0.0;
    auto residual = [&]() {
        double mx = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            double p = 0.0;
            for (std::size_t i = 0; i < dims; ++i)
                p += a[i] * b.phi[i][j];
            err[j] = b.f[j] - p;
            mx = std::max(mx, std::abs(err[j]));
        }
        return mx;
    };
    double mx = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::MatrixXd S(m, m);
        Eigen::VectorXd rhs(m);
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t i = 0; i < dims; ++i)
                S(static_cast<long>(k), static_cast<long>(i)) = b.phi[i][ref[k]];
            S(static_cast<long>(k), static_cast<long>(dims)) = k % 2 ? -1.0 : 1.0;
            rhs(static_cast<long>(k)) = b.f[ref[k]];
        }
        const Eigen::VectorXd sol = S.partialPivLu().solve(rhs);
        for (std::size_t i = 0; i < dims; ++i)
            a[i] = sol(static_cast<long>(i));
        level = std::abs(sol(static_cast<long>(dims)));
        mx = residual();
        if (mx - level <= 1e-12 * std::max(mx, 1e-300) || mx <= 1e-14 * std::max(fscale, 1e-300))
            break;
        // one extremum per sign run, circularly
        std::size_t start = 0;
        while (start < M && (err[start] >= 0) == (err[(start + M - 1) % M] >= 0))
            ++start;
        if (start == M)
            break; // error of one sign everywhere: the level already equals the sup
        std::vector<std::size_t> ext;
        for (std::size_t c = 0; c < M;) {
            const std::size_t j0 = (start + c) % M;
            const bool pos = err[j0] >= 0;
            std::size_t best = j0;
            while (c < M && (err[(start + c) % M] >= 0) == pos) {
                const std::size_t j = (start + c) % M;
                if (std::abs(err[j]) > std::abs(err[best]))
                    best = j;
                ++c;
            }
            ext.push_back(best);
        }
        if (ext.size() < m)
            break;
        while (ext.size() > m) {
            std::size_t k = 0;
            for (std::size_t i = 1; i < ext.size(); ++i)
                if (std::abs(err[ext[i]]) < std::abs(err[ext[k]]))
                    k = i;
            const std::size_t L = ext.size();
            const std::size_t prev = (k + L - 1) % L, next = (k + 1) % L;
            const std::size_t drop = std::abs(err[ext[prev]]) < std::abs(err[ext[next]]) ? prev : next;
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < L; ++i)
                if (i != k && i != drop)
                    keep.push_back(ext[i]);
            ext = std::move(keep);
        }
        std::sort(ext.begin(), ext.end());
        if (ext == ref)
            break;
        ref = std::move(ext);
    }
    ApproxResult out;
    out.poly = detail::trig_from_real(a, n);
    // achieved error of the minimiser off the grid as well
    out.value = std::max(mx, sup_abs([&](double x) { return f(x) - evaluate(out.poly, x).real(); }, Domain::torus(),
                                     M, 64)
                                 .value);
    out.lower_bound = level;
    return out;
}

/// E_n(f)_X. L_2: orthogonal projection from the DFT of M samples (M >= 64n by default).
/// Sup norm: grid minimax linear program. Other specs: coordinate descent from the
/// projection; p < 1 is flagged as a local optimum.
inline ApproxResult best_approx(const RealFn& f, int n, const NormSpec& spec, std::size_t M = 0)
{
    require(n >= 0, "best_approx: n must be non-negative");
    const auto* lp = std::get_if<LpSpec>(&spec.v);
    const bool l2 = lp && lp->p == 2.0;
    if (M == 0)
        M = std::max<std::size_t>(l2 ? 65536 : 4096, 64 * static_cast<std::size_t>(std::max(n, 1)));
    const auto grid = periodic_grid(M);
    const auto samples = sample_fn([&](double x) { return Complex(f(x)); }, grid);
    const TrigPoly proj = partial_sum(samples, n);
    ApproxResult out;
    if (l2) {
        out.poly = proj;
        out.value = continuous_norm(
            sample_fn([&](double x) { return Complex(f(x)) - evaluate(proj, x); }, grid), spec);
        return out;
    }
    if (spec.is_sup())
        return minimax_approx(f, n, M);

    const auto b = detail::basis_table(f, n, M);
    std::vector<double> res(M);
    auto obj = [&](const std::vector<double>& a) {
        for (std::size_t j = 0; j < M; ++j) {
            double p = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
                p += a[i] * b.phi[i][j];
            res[j] = std::abs(b.f[j] - p);
        }
        return weighted_norm(res, grid->weights, grid->points, spec);
    };
    auto a0 = detail::real_from_trig(proj, n);
    double scale = 0.0;
    for (double v : b.f)
        scale = std::max(scale, std::abs(v));
    const auto a = detail::coordinate_descent(a0, obj, std::max(scale, 1e-12) * 0.25);
    out.poly = detail::trig_from_real(a, n);
    out.value = obj(a);
    out.local_only = (lp && lp->p < 1.0);
    return out;
}

/// Catalog targets in L_2 use the exact coefficients.
inline ApproxResult best_approx(const TargetFunction& f, int n, const NormSpec& spec, std::size_t M = 0)
{
    const auto* lp = std::get_if<LpSpec>(&spec.v);
    if (!(lp && lp->p == 2.0))
        return best_approx(f.f, n, spec, M);
    ApproxResult out;
    out.poly = TrigPoly::zero(n);
    out.poly.real_valued = true;
    for (int k = -n; k <= n; ++k)
        out.poly.at(k) = f.coeff(k);
    out.value = f.l2_best_error(n);
    return out;
}

struct OneSidedResult {
    double value = 0.0;       // ||Q - q||_X with the constraint on the grid (a lower estimate)
    double certified = 0.0;   // after shifting Q up and q down to satisfy q <= f <= Q on a 16x check grid
    TrigPoly lower;           // q
    TrigPoly upper;           // Q
};

namespace detail {

/// min int Q over Q in T_n with Q(x_j) >= f(x_j), via the dual
///   max sum f_j z_j  s.t.  sum_j phi_i(x_j) z_j = 2 pi [i = 0],  z >= 0.
inline std::vector<double> upper_l1(const BasisTable& b)
{
    const std::size_t rows = b.phi.size(), cols = b.f.size();
    std::vector<double> A(rows * cols), rhs(rows, 0.0), c(cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            A[i * cols + j] = b.phi[i][j];
    rhs[0] = kTwoPi;
    for (std::size_t j = 0; j < cols; ++j)
        c[j] = -b.f[j];
    const auto lp = simplex_solve(A, rhs, c);
    if (lp.status != LpStatus::Optimal)
        throw NumericalError("one_sided_approx: linear program did not reach an optimum");
    std::vector<double> a(rows);
    for (std::size_t i = 0; i < rows; ++i)
        a[i] = -lp.dual[i];
    return a;
}

} // namespace detail

/// Ẽ_n(f)_X = inf ||Q - q||_X over q <= f <= Q in T_n, with the constraint on a 64n-point grid
/// (at least 32). L_1: two linear programs (upper and lower envelopes separate). Other specs:
/// penalised coordinate descent started from E_n's minimiser shifted to feasibility.
inline OneSidedResult one_sided_approx(const RealFn& f, int n, const NormSpec& spec, std::size_t grid_points = 0)
{
    require(n >= 0, "one_sided_approx: n must be non-negative");
    if (grid_points == 0)
        grid_points = std::max<std::size_t>(32, 64 * static_cast<std::size_t>(n));
    const auto b = detail::basis_table(f, n, grid_points);
    const auto* lp = std::get_if<LpSpec>(&spec.v);
    const std::size_t dims = b.phi.size();
    std::vector<double> upper, lower;
    auto poly_at = [&](const std::vector<double>& a, double x) {
        double p = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            p += a[i] * detail::trig_basis(i, x);
        return p;
    };
    const std::size_t dense = 16 * grid_points;
    const auto dgrid = periodic_grid(dense);
    auto gap_norm = [&](const std::vector<double>& Q, const std::vector<double>& q) {
        std::vector<double> v(dense);
        for (std::size_t j = 0; j < dense; ++j)
            v[j] = std::abs(poly_at(Q, dgrid->points[j]) - poly_at(q, dgrid->points[j]));
        return weighted_norm(v, dgrid->weights, dgrid->points, spec);
    };

    if (lp && lp->p == 1.0) {
        upper = detail::upper_l1(b);
        auto neg = b;
        for (double& v : neg.f)
            v = -v;
        lower = detail::upper_l1(neg);
        for (double& v : lower)
            v = -v;
    } else {
        const auto ba = best_approx(f, n, spec);
        auto a = detail::real_from_trig(ba.poly, n);
        double up = 0.0, dn = 0.0;
        for (std::size_t j = 0; j < grid_points; ++j) {
            double p = 0.0;
            for (std::size_t i = 0; i < dims; ++i)
                p += a[i] * b.phi[i][j];
            up = std::max(up, b.f[j] - p);
            dn = std::max(dn, p - b.f[j]);
        }
        std::vector<double> x(2 * dims);
        std::copy(a.begin(), a.end(), x.begin());
        std::copy(a.begin(), a.end(), x.begin() + static_cast<long>(dims));
        x[0] += up;
        x[dims] -= dn;
        const auto& g = b.grid;
        std::vector<double> gap(grid_points);
        double scale = 0.0;
        for (double v : b.f)
            scale = std::max(scale, std::abs(v));
        scale = std::max(scale, 1e-12);
        auto obj = [&](const std::vector<double>& z) {
            double pen = 0.0;
            for (std::size_t j = 0; j < grid_points; ++j) {
                double Q = 0.0, q = 0.0;
                for (std::size_t i = 0; i < dims; ++i) {
                    Q += z[i] * b.phi[i][j];
                    q += z[dims + i] * b.phi[i][j];
                }
                gap[j] = std::abs(Q - q);
                pen = std::max({pen, b.f[j] - Q, q - b.f[j]});
            }
            return weighted_norm(gap, g->weights, g->points, spec) + 1e3 * pen;
        };
        x = detail::coordinate_descent(x, obj, 0.1 * scale, 1e-8, 7);
        upper.assign(x.begin(), x.begin() + static_cast<long>(dims));
        lower.assign(x.begin() + static_cast<long>(dims), x.end());
    }
    // restore grid feasibility exactly
    double up = 0.0, dn = 0.0;
    for (std::size_t j = 0; j < grid_points; ++j) {
        const double x = b.grid->points[j];
        up = std::max(up, b.f[j] - poly_at(upper, x));
        dn = std::max(dn, poly_at(lower, x) - b.f[j]);
    }
    upper[0] += up;
    lower[0] -= dn;
    OneSidedResult out;
    out.value = gap_norm(upper, lower);
    // certified pair on the dense grid
    up = 0.0;
    dn = 0.0;
    for (std::size_t j = 0; j < dense; ++j) {
        const double x = dgrid->points[j];
        const double fx = f(x);
        up = std::max(up, fx - poly_at(upper, x));
        dn = std::max(dn, poly_at(lower, x) - fx);
    }
    auto cu = upper, cl = lower;
    cu[0] += up;
    cl[0] -= dn;
    out.certified = gap_norm(cu, cl);
    out.upper = detail::trig_from_real(upper, n);
    out.lower = detail::trig_from_real(lower, n);
    return out;
}

// ---------------------------------------------------------------------------------------------
// inequality checkers

struct LagrangeRow {
    int n = 0;
    double error = 0.0; // ||f - L_n f||_X
    double tau = 0.0;   // tau_r(f, 1/n)_X
    double ratio = 0.0; // error / tau
};

struct LagrangeTable {
    std::vector<LagrangeRow> rows;
    double slope = 0.0;     // log-log slope of error against n
    double constant = 0.0;  // max ratio
    double spread = 0.0;    // max ratio / min ratio
};

inline LagrangeTable lagrange_error_check(const RealFn& f, const std::vector<int>& ns, const NormSpec& spec, int r = 1)
{
    require(!ns.empty(), "lagrange_error_check: empty n list");
    LagrangeTable t;
    std::vector<double> xs, ys;
    double lo = kInf;
    for (int n : ns) {
        require(n >= 1, "lagrange_error_check: n must be positive");
        const auto L = lagrange_interpolate_fn(f, n);
        const auto grid = periodic_grid(std::max<std::size_t>(65536, 64 * static_cast<std::size_t>(n)) + 1);
        LagrangeRow row;
        row.n = n;
        row.error = continuous_norm(sample_fn([&](double x) { return Complex(f(x)) - evaluate(L, x); }, grid), spec);
        row.tau = tau_modulus(f, 1.0 / n, r, spec).value;
        row.ratio = row.tau > 0.0 ? row.error / row.tau : 0.0;
        t.constant = std::max(t.constant, row.ratio);
        if (row.tau > 0.0)
            lo = std::min(lo, row.ratio);
        t.rows.push_back(row);
        xs.push_back(n);
        ys.push_back(row.error);
    }
    bool positive = true;
    for (double y : ys)
        positive = positive && y > 0.0;
    t.slope = positive && xs.size() >= 2 ? detail::loglog_slope(xs, ys) : 0.0;
    t.spread = lo < kInf && lo > 0.0 ? t.constant / lo : 0.0;
    return t;
}

/// h^r ||T^(r)||_2 / ||Delta_h^r T||_2 from the coefficients; empty for constant T.
inline std::optional<double> stechkin_boas_check(const TrigPoly& T, double h, int r)
{
    require(T.dim == 1, "stechkin_boas_check: univariate T expected");
    require(r >= 1, "stechkin_boas_check: r must be at least 1");
    require(h > 0.0 && h < kPi / std::max(1, T.n), "stechkin_boas_check: need 0 < h < pi/n");
    double num = 0.0, den = 0.0;
    for (int k = -T.n; k <= T.n; ++k) {
        const double c = std::norm(T.coeff(k));
        if (c == 0.0 || k == 0)
            continue;
        num += c * std::pow(static_cast<double>(k), 2 * r);
        den += c * std::pow(2.0 * std::sin(k * h / 2.0), 2 * r);
    }
    if (den == 0.0)
        return std::nullopt;
    return std::pow(h, r) * std::sqrt(num / den);
}

struct UlyanovResult {
    double lhs = 0.0;   // E_n(f)_target
    double rhs = 0.0;   // sigma_{2n} E_n(f)_X + sum_{nu=n+1}^{M} sigma_{4 nu} E_nu(f)_X / nu + tail
    double tail = 0.0;  // bound for nu > M from the target's decay class
    double implied_constant = 0.0; // lhs / rhs
};

/// X = L_2 with sigma_nu = 1/||chi_{(0, 2pi/nu)}||_2 = (nu/2pi)^{1/2}; target sup norm or L_q.
/// E_nu(f)_2 comes from the exact Fourier tail, the part beyond M from the decay class.
inline UlyanovResult ulyanov_check(const TargetFunction& f, int n, const NormSpec& X, const NormSpec& target, int M)
{
    const auto* lp = std::get_if<LpSpec>(&X.v);
    if (!lp || lp->p != 2.0)
        throw UnsupportedError("ulyanov_check: explicit E_nu(f)_X needs X = L_2");
    require(n >= 1 && M >= 4 * n, "ulyanov_check: need n >= 1 and M >= 4n");
    if (!f.decay)
        throw UnsupportedError("ulyanov_check: target '" + f.id + "' has no known decay class");
    auto sigma = [](double nu) { return std::sqrt(nu / kTwoPi); };
    UlyanovResult out;
    const auto E = f.l2_best_errors(M);
    out.rhs = sigma(2.0 * n) * E[static_cast<std::size_t>(n)];
    for (int nu = n + 1; nu <= M; ++nu)
        out.rhs += sigma(4.0 * nu) * E[static_cast<std::size_t>(nu)] / nu;
    const double K = f.decay->K, s = f.decay->s;
    // sum_{nu > M} (4 nu/2pi)^{1/2} K nu^{-s-1} <= 2 K/sqrt(2pi) int_M^inf nu^{-s-1/2}
    out.tail = (f.max_freq >= 0 && M >= f.max_freq) ? 0.0
                                                   : 2.0 * K / std::sqrt(kTwoPi) * std::pow(M, 0.5 - s) / (s - 0.5);
    out.rhs += out.tail;
    out.lhs = best_approx(f, n, target).value;
    out.implied_constant = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

} // namespace mzlab
