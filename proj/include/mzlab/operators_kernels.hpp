#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mzlab/core.hpp"
#include "mzlab/function_models.hpp"
#include "mzlab/norm_engine.hpp"

namespace mzlab {

enum class KernelKind { Dirichlet, Fejer, ValleePoussin };

/// Multiplier sequences on Z:
///   dirichlet(n)       1 for |k| <= n
///   fejer(n)           1 - |k|/n for |k| <= n-1 (the kernel K_{n-1})
///   vallee_poussin(n)  2K_{2n-1} - K_{n-1}: 1 for |k| <= n, 2(1 - |k|/(2n)) up to 2n-1
struct KernelSpec {
    KernelKind kind = KernelKind::Dirichlet;
    int n = 0;

    static KernelSpec dirichlet(int n)
    {
        require(n >= 0, "dirichlet kernel needs n >= 0");
        return {KernelKind::Dirichlet, n};
    }
    static KernelSpec fejer(int n)
    {
        require(n >= 1, "fejer kernel needs n >= 1");
        return {KernelKind::Fejer, n};
    }
    static KernelSpec vallee_poussin(int n)
    {
        require(n >= 1, "de la Vallee Poussin kernel needs n >= 1");
        return {KernelKind::ValleePoussin, n};
    }

    [[nodiscard]] double multiplier(int k) const
    {
        const int a = std::abs(k);
        switch (kind) {
        case KernelKind::Dirichlet: return a <= n ? 1.0 : 0.0;
        case KernelKind::Fejer: return a <= n - 1 ? 1.0 - static_cast<double>(a) / n : 0.0;
        case KernelKind::ValleePoussin:
            if (a <= n)
                return 1.0;
            return a <= 2 * n - 1 ? 2.0 * (1.0 - static_cast<double>(a) / (2.0 * n)) : 0.0;
        }
        return 0.0;
    }

    /// Largest frequency with a non-zero multiplier.
    [[nodiscard]] int max_freq() const
    {
        switch (kind) {
        case KernelKind::Dirichlet: return n;
        case KernelKind::Fejer: return n - 1;
        case KernelKind::ValleePoussin: return 2 * n - 1;
        }
        return n;
    }

    /// Kernel value sum_k m_k e^{ikx} (real: multipliers are even).
    [[nodiscard]] double value(double x) const
    {
        double s = multiplier(0);
        for (int k = 1; k <= max_freq(); ++k)
            s += 2.0 * multiplier(k) * std::cos(k * x);
        return s;
    }
};

/// Multiplier table m_0..m_{2n} for the de la Vallee Poussin kernel.
inline std::vector<double> vallee_poussin_coeffs(int n)
{
    const auto v = KernelSpec::vallee_poussin(n);
    std::vector<double> m;
    for (int k = 0; k <= 2 * n; ++k)
        m.push_back(v.multiplier(k));
    return m;
}

/// Applies the multiplier to the coefficients of t; the result has degree max_freq (per
/// coordinate for d = 2).
inline TrigPoly apply_kernel(const TrigPoly& t, const KernelSpec& k)
{
    const int m = k.max_freq();
    auto out = TrigPoly::zero(m, t.dim);
    out.real_valued = t.real_valued;
    if (t.dim == 1) {
        for (int j = -m; j <= m; ++j)
            out.at(j) = k.multiplier(j) * t.coeff(j);
    } else {
        for (int j2 = -m; j2 <= m; ++j2)
            for (int j1 = -m; j1 <= m; ++j1)
                out.at(j1, j2) = k.multiplier(j1) * k.multiplier(j2) * t.coeff(j1, j2);
    }
    return out;
}

/// Fourier coefficients |k| <= n of samples on a uniform periodic grid (trapezoid DFT).
inline TrigPoly fourier_coefficients(const SampledFunction& f, int n)
{
    require(f.grid && f.grid->trapezoid, "fourier_coefficients: uniform periodic grid required");
    require(n >= 0, "fourier_coefficients: n must be non-negative");
    const auto& g = *f.grid;
    const std::size_t M = g.points.size();
    require(M >= static_cast<std::size_t>(2 * n + 1), "fourier_coefficients: grid too coarse for frequency n");
    require(g.domain == Domain::torus(), "fourier_coefficients: grid must live on [0, 2pi)");
    // roots of unity e^{-2 pi i r/M}, indexed by (k j) mod M
    std::vector<Complex> root(M);
    for (std::size_t r = 0; r < M; ++r)
        root[r] = std::polar(1.0, -kTwoPi * static_cast<double>(r) / static_cast<double>(M));
    auto tw = [&](int k, std::size_t j) {
        const long long Ml = static_cast<long long>(M);
        long long r = (static_cast<long long>(k) * static_cast<long long>(j)) % Ml;
        if (r < 0)
            r += Ml;
        return root[static_cast<std::size_t>(r)];
    };
    auto out = TrigPoly::zero(n, g.dim);
    const double inv = 1.0 / static_cast<double>(M);
    if (g.dim == 1) {
        require(f.values.size() == M, "fourier_coefficients: sample count mismatch");
        for (int k = -n; k <= n; ++k) {
            Complex s{};
            for (std::size_t j = 0; j < M; ++j)
                s += f.values[j] * tw(k, j);
            out.at(k) = s * inv;
        }
    } else {
        require(f.values.size() == M * M, "fourier_coefficients: sample count mismatch");
        // transform along x for each row, then along y
        const std::size_t side = out.side();
        std::vector<Complex> rows(side * M);
        for (std::size_t j = 0; j < M; ++j)
            for (int k1 = -n; k1 <= n; ++k1) {
                Complex s{};
                for (std::size_t i = 0; i < M; ++i)
                    s += f.values[i + M * j] * tw(k1, i);
                rows[static_cast<std::size_t>(k1 + n) + side * j] = s * inv;
            }
        for (int k2 = -n; k2 <= n; ++k2)
            for (int k1 = -n; k1 <= n; ++k1) {
                Complex s{};
                for (std::size_t j = 0; j < M; ++j)
                    s += rows[static_cast<std::size_t>(k1 + n) + side * j] * tw(k2, j);
                out.at(k1, k2) = s * inv;
            }
    }
    bool real = true;
    for (const auto& v : f.values)
        real = real && v.imag() == 0.0;
    if (real && g.dim == 1) {
        // enforce exact conjugate symmetry for real samples
        out.real_valued = true;
        for (int k = 1; k <= n; ++k) {
            const Complex c = 0.5 * (out.at(k) + std::conj(out.at(-k)));
            out.at(k) = c;
            out.at(-k) = std::conj(c);
        }
        out.at(0) = out.at(0).real();
    }
    return out;
}

/// S_n: coefficients |k| <= n.
inline TrigPoly partial_sum(const TrigPoly& t, int n) { return apply_kernel(t, KernelSpec::dirichlet(n)); }
inline TrigPoly partial_sum(const SampledFunction& f, int n) { return fourier_coefficients(f, n); }

/// f * K_{n-1} = (1/n) sum_{k<n} S_k f.
inline TrigPoly fejer_mean(const TrigPoly& t, int n) { return apply_kernel(t, KernelSpec::fejer(n)); }
inline TrigPoly fejer_mean(const SampledFunction& f, int n)
{
    require(n >= 1, "fejer_mean: n must be at least 1");
    return apply_kernel(fourier_coefficients(f, n - 1), KernelSpec::fejer(n));
}

inline TrigPoly vallee_poussin_mean(const TrigPoly& t, int n)
{
    return apply_kernel(t, KernelSpec::vallee_poussin(n));
}
inline TrigPoly vallee_poussin_mean(const SampledFunction& f, int n)
{
    require(n >= 1, "vallee_poussin_mean: n must be at least 1");
    return apply_kernel(fourier_coefficients(f, 2 * n - 1), KernelSpec::vallee_poussin(n));
}

/// Canonical interpolation nodes t_k = 2 pi k/(2n+1), k = 0..2n.
inline std::vector<double> lagrange_nodes(int n)
{
    require(n >= 0, "lagrange_nodes: n must be non-negative");
    std::vector<double> t(static_cast<std::size_t>(2 * n + 1));
    for (std::size_t k = 0; k < t.size(); ++k)
        t[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(t.size());
    return t;
}

/// The unique T in T_n with T(t_k) = samples[k], by discrete Fourier inversion.
inline TrigPoly lagrange_interpolate(std::span<const Complex> samples, int n)
{
    require(n >= 0, "lagrange_interpolate: n must be non-negative");
    require(samples.size() == static_cast<std::size_t>(2 * n + 1),
            "lagrange_interpolate: need exactly 2n+1 samples at 2 pi k/(2n+1)");
    auto grid = periodic_grid(samples.size());
    SampledFunction s{grid, std::vector<Complex>(samples.begin(), samples.end())};
    return fourier_coefficients(s, n);
}

template <class Fn>
TrigPoly lagrange_interpolate_fn(Fn&& f, int n)
{
    std::vector<Complex> v;
    for (double t : lagrange_nodes(n))
        v.emplace_back(f(t));
    return lagrange_interpolate(v, n);
}

/// Direct kernel form (1/(2n+1)) sum_k f(t_k) sin((n+1/2)(x-t_k)) / sin((x-t_k)/2).
inline Complex lagrange_kernel_sum(std::span<const Complex> samples, int n, double x)
{
    require(samples.size() == static_cast<std::size_t>(2 * n + 1), "lagrange_kernel_sum: need 2n+1 samples");
    const auto t = lagrange_nodes(n);
    Complex s{};
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double u = x - t[k];
        const double den = std::sin(0.5 * u);
        const double ker = std::abs(den) < 1e-15 ? static_cast<double>(2 * n + 1) : std::sin((n + 0.5) * u) / den;
        s += samples[k] * ker;
    }
    return s / static_cast<double>(2 * n + 1);
}

} // namespace mzlab
