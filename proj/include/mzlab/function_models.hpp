#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mzlab/core.hpp"
#include "mzlab/detail/numerics.hpp"
#include "mzlab/detail/rng.hpp"

namespace mzlab {

/// Trigonometric polynomial sum_{|k|<=n} c_k e^{ikx}; for dim 2 the coefficient of
/// e^{i(k1 x + k2 y)} sits at (k1+n) + (2n+1)(k2+n).
struct TrigPoly {
    int n = 0;
    int dim = 1;
    bool real_valued = false;
    std::vector<Complex> coeffs{Complex{0.0}};

    [[nodiscard]] std::size_t side() const { return static_cast<std::size_t>(2 * n + 1); }
    [[nodiscard]] std::size_t index(int k) const { return static_cast<std::size_t>(k + n); }
    [[nodiscard]] std::size_t index(int k1, int k2) const { return index(k1) + side() * index(k2); }

    [[nodiscard]] Complex coeff(int k) const { return std::abs(k) > n ? Complex{} : coeffs[index(k)]; }
    [[nodiscard]] Complex coeff(int k1, int k2) const
    {
        return (std::abs(k1) > n || std::abs(k2) > n) ? Complex{} : coeffs[index(k1, k2)];
    }
    Complex& at(int k) { return coeffs[index(k)]; }
    Complex& at(int k1, int k2) { return coeffs[index(k1, k2)]; }

    static TrigPoly zero(int n, int dim = 1)
    {
        TrigPoly t;
        t.n = n;
        t.dim = dim;
        t.coeffs.assign(dim == 1 ? static_cast<std::size_t>(2 * n + 1)
                                 : static_cast<std::size_t>((2 * n + 1) * (2 * n + 1)),
                        Complex{});
        return t;
    }

    /// Validates shape and, when `real` is set, conjugate symmetry c_{-k} = conj(c_k).
    static TrigPoly make(int n, std::vector<Complex> coeffs, bool real = false, int dim = 1)
    {
        require(n >= 0, "TrigPoly: degree must be non-negative");
        require(dim == 1 || dim == 2, "TrigPoly: dimension must be 1 or 2");
        const std::size_t side = static_cast<std::size_t>(2 * n + 1);
        require(coeffs.size() == (dim == 1 ? side : side * side), "TrigPoly: expected (2n+1)^d coefficients");
        TrigPoly t;
        t.n = n;
        t.dim = dim;
        t.real_valued = real;
        t.coeffs = std::move(coeffs);
        for (const auto& c : t.coeffs)
            require(std::isfinite(c.real()) && std::isfinite(c.imag()), "TrigPoly: non-finite coefficient");
        if (real) {
            double scale = 0.0;
            for (const auto& c : t.coeffs)
                scale = std::max(scale, std::abs(c));
            const double tol = 1e-12 * std::max(1.0, scale);
            if (dim == 1) {
                for (int k = 0; k <= n; ++k)
                    require(std::abs(t.coeff(-k) - std::conj(t.coeff(k))) <= tol,
                            "TrigPoly: real flag set but coefficients are not conjugate symmetric");
            } else {
                for (int k1 = -n; k1 <= n; ++k1)
                    for (int k2 = -n; k2 <= n; ++k2)
                        require(std::abs(t.coeff(-k1, -k2) - std::conj(t.coeff(k1, k2))) <= tol,
                                "TrigPoly: real flag set but coefficients are not conjugate symmetric");
            }
        }
        return t;
    }
};

/// Algebraic polynomial sum a_k T_k(t), t = (2x - a - b)/(b - a), on [a, b].
struct AlgPoly {
    int n = 0;
    std::vector<double> cheb{0.0};
    Interval span{-1.0, 1.0};

    static AlgPoly make(std::vector<double> cheb, Interval span = {-1.0, 1.0})
    {
        require(!cheb.empty(), "AlgPoly: need at least one coefficient");
        require(span.hi > span.lo, "AlgPoly: need b > a");
        AlgPoly p;
        p.n = static_cast<int>(cheb.size()) - 1;
        p.cheb = std::move(cheb);
        p.span = span;
        return p;
    }

    static AlgPoly chebyshev(int n, Interval span = {-1.0, 1.0})
    {
        std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
        c.back() = 1.0;
        return make(std::move(c), span);
    }
};

/// Periodic spline on [0,1): sum_j c_j M_r(n x - j) with the cardinal B-spline M_r of order r
/// (degree r-1, support [0, r]). Order 1 is the right-continuous piecewise constant case and is
/// only produced by differentiation with the piecewise flag.
struct PeriodicSpline {
    int r = 2;
    int n = 1;
    std::vector<double> coeffs{0.0};
    bool piecewise = false;

    static PeriodicSpline make(int r, std::vector<double> coeffs)
    {
        require(r >= 2, "PeriodicSpline: order r must be at least 2");
        require(!coeffs.empty(), "PeriodicSpline: need at least one knot");
        PeriodicSpline s;
        s.r = r;
        s.n = static_cast<int>(coeffs.size());
        s.coeffs = std::move(coeffs);
        return s;
    }
};

/// Exponential sum sum c_j e^{lambda_j t}, or Muentz polynomial sum c_j x^{lambda_j}, on [a, b].
struct ExpSum {
    std::vector<double> lambdas{0.0};
    std::vector<Complex> coeffs{Complex{0.0}};
    Interval span{0.0, 1.0};
    bool muntz = false;

    static ExpSum make(std::vector<double> lambdas, std::vector<Complex> coeffs, Interval span, bool muntz)
    {
        require(!lambdas.empty() && lambdas.size() == coeffs.size(), "ExpSum: lambdas and coeffs must match");
        for (std::size_t j = 1; j < lambdas.size(); ++j)
            require(lambdas[j] > lambdas[j - 1], "ExpSum: lambdas must be strictly increasing");
        require(span.hi > span.lo, "ExpSum: need b > a");
        if (muntz)
            require(span.lo > 0.0, "ExpSum: Muentz polynomials need 0 < a < b");
        ExpSum e;
        e.lambdas = std::move(lambdas);
        e.coeffs = std::move(coeffs);
        e.span = span;
        e.muntz = muntz;
        return e;
    }
};

enum class Family { Trig, Alg, Spline, Exp, Muntz };

inline std::string to_string(Family f)
{
    switch (f) {
    case Family::Trig: return "trig";
    case Family::Alg: return "alg";
    case Family::Spline: return "spline";
    case Family::Exp: return "exp";
    case Family::Muntz: return "muntz";
    }
    return "?";
}

inline Family parse_family(const std::string& s)
{
    if (s == "trig") return Family::Trig;
    if (s == "alg") return Family::Alg;
    if (s == "spline") return Family::Spline;
    if (s == "exp") return Family::Exp;
    if (s == "muntz") return Family::Muntz;
    throw ValidationError("unknown function family '" + s + "'");
}

struct FunctionModel {
    std::variant<TrigPoly, AlgPoly, PeriodicSpline, ExpSum> repr;

    FunctionModel() = default;
    FunctionModel(TrigPoly t) : repr(std::move(t)) {}
    FunctionModel(AlgPoly p) : repr(std::move(p)) {}
    FunctionModel(PeriodicSpline s) : repr(std::move(s)) {}
    FunctionModel(ExpSum e) : repr(std::move(e)) {}

    [[nodiscard]] Family family() const
    {
        switch (repr.index()) {
        case 0: return Family::Trig;
        case 1: return Family::Alg;
        case 2: return Family::Spline;
        default: return std::get<ExpSum>(repr).muntz ? Family::Muntz : Family::Exp;
        }
    }

    [[nodiscard]] Domain domain() const
    {
        switch (repr.index()) {
        case 0: return Domain::torus();
        case 1: return Domain::interval(std::get<AlgPoly>(repr).span.lo, std::get<AlgPoly>(repr).span.hi);
        case 2: return Domain::unit_period();
        default: {
            const auto& e = std::get<ExpSum>(repr);
            return Domain::interval(e.span.lo, e.span.hi);
        }
        }
    }

    [[nodiscard]] int dim() const { return repr.index() == 0 ? std::get<TrigPoly>(repr).dim : 1; }

    /// Degree parameter n of the family (number of exponents minus one for sums).
    [[nodiscard]] int degree() const
    {
        switch (repr.index()) {
        case 0: return std::get<TrigPoly>(repr).n;
        case 1: return std::get<AlgPoly>(repr).n;
        case 2: return std::get<PeriodicSpline>(repr).n;
        default: return static_cast<int>(std::get<ExpSum>(repr).lambdas.size()) - 1;
        }
    }

    [[nodiscard]] bool is_real() const
    {
        switch (repr.index()) {
        case 0: return std::get<TrigPoly>(repr).real_valued;
        case 1:
        case 2: return true;
        default: {
            for (const auto& c : std::get<ExpSum>(repr).coeffs)
                if (c.imag() != 0.0)
                    return false;
            return true;
        }
        }
    }
};

// ---------------------------------------------------------------------------------------------
// evaluation

inline Complex evaluate(const TrigPoly& t, double x)
{
    require(t.dim == 1, "evaluate: use evaluate2 for bivariate polynomials");
    const Complex z = std::polar(1.0, x);
    Complex pos{};
    for (int k = t.n; k >= 0; --k)
        pos = pos * z + t.coeffs[t.index(k)];
    Complex neg{};
    const Complex zc = std::conj(z);
    for (int k = t.n; k >= 1; --k)
        neg = (neg + t.coeffs[t.index(-k)]) * zc;
    return pos + neg;
}

inline Complex evaluate2(const TrigPoly& t, double x, double y)
{
    require(t.dim == 2, "evaluate2: polynomial is not bivariate");
    const Complex zy = std::polar(1.0, y);
    // inner sums over k1 for each k2, then Horner in e^{iy}
    std::vector<Complex> row(t.side());
    const Complex zx = std::polar(1.0, x);
    for (int k2 = -t.n; k2 <= t.n; ++k2) {
        Complex pos{}, neg{};
        for (int k1 = t.n; k1 >= 0; --k1)
            pos = pos * zx + t.coeffs[t.index(k1, k2)];
        for (int k1 = t.n; k1 >= 1; --k1)
            neg = (neg + t.coeffs[t.index(-k1, k2)]) * std::conj(zx);
        row[t.index(k2)] = pos + neg;
    }
    Complex pos{}, neg{};
    for (int k = t.n; k >= 0; --k)
        pos = pos * zy + row[t.index(k)];
    for (int k = t.n; k >= 1; --k)
        neg = (neg + row[t.index(-k)]) * std::conj(zy);
    return pos + neg;
}

/// Clenshaw recurrence for sum a_k T_k(t), |t| <= 1.
inline double clenshaw(std::span<const double> a, double t)
{
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = a.size(); k-- > 1;) {
        const double b0 = 2.0 * t * b1 - b2 + a[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + a[0];
}

inline double evaluate(const AlgPoly& p, double x)
{
    if (!p.span.contains(x, 1e-12 * std::max(1.0, p.span.length())))
        throw DomainError("AlgPoly: point outside [a, b]");
    double t = (2.0 * x - p.span.lo - p.span.hi) / p.span.length();
    t = std::clamp(t, -1.0, 1.0);
    return clenshaw(p.cheb, t);
}

/// Cardinal B-spline M_r on [0, r), right-continuous, with sum_j M_r(t - j) = 1.
inline double cardinal_bspline(int r, double t)
{
    if (t < 0.0 || t >= r)
        return 0.0;
    if (r == 1)
        return 1.0;
    // de Boor triangle on integer knots
    std::vector<double> v(static_cast<std::size_t>(r), 0.0);
    const int cell = std::min(static_cast<int>(std::floor(t)), r - 1);
    v[static_cast<std::size_t>(cell)] = 1.0;
    for (int k = 2; k <= r; ++k) {
        std::vector<double> w(static_cast<std::size_t>(r), 0.0);
        for (int j = 0; j + k <= r; ++j) {
            const double left = v[static_cast<std::size_t>(j)];
            const double right = j + 1 < r ? v[static_cast<std::size_t>(j + 1)] : 0.0;
            w[static_cast<std::size_t>(j)] = ((t - j) * left + (j + k - t) * right) / (k - 1);
        }
        v = std::move(w);
    }
    return v[0];
}

inline double evaluate(const PeriodicSpline& s, double x)
{
    const double u = s.n * detail::wrap(x, 1.0);
    const int base = static_cast<int>(std::floor(u));
    double acc = 0.0;
    for (int j = base - s.r + 1; j <= base; ++j) {
        const int idx = ((j % s.n) + s.n) % s.n;
        acc += s.coeffs[static_cast<std::size_t>(idx)] * cardinal_bspline(s.r, u - j);
    }
    return acc;
}

inline Complex evaluate(const ExpSum& e, double x)
{
    if (!e.span.contains(x, 1e-12 * std::max(1.0, e.span.length())))
        throw DomainError("ExpSum: point outside [a, b]");
    Complex acc{};
    if (e.muntz) {
        const double lx = std::log(std::max(x, e.span.lo));
        for (std::size_t j = 0; j < e.lambdas.size(); ++j)
            acc += e.coeffs[j] * std::exp(e.lambdas[j] * lx);
    } else {
        for (std::size_t j = 0; j < e.lambdas.size(); ++j)
            acc += e.coeffs[j] * std::exp(e.lambdas[j] * x);
    }
    return acc;
}

inline Complex evaluate(const FunctionModel& f, double x)
{
    return std::visit([x](const auto& m) -> Complex { return evaluate(m, x); }, f.repr);
}

inline std::vector<Complex> evaluate(const FunctionModel& f, std::span<const double> points)
{
    std::vector<Complex> out;
    out.reserve(points.size());
    for (double x : points)
        out.push_back(evaluate(f, x));
    return out;
}

// ---------------------------------------------------------------------------------------------
// differentiation

inline TrigPoly differentiate(const TrigPoly& t, int order)
{
    require(order >= 1, "differentiate: order must be positive");
    require(t.dim == 1, "differentiate: use differentiate_partial for bivariate polynomials");
    TrigPoly d = t;
    for (int k = -t.n; k <= t.n; ++k)
        d.at(k) *= std::pow(Complex(0.0, k), order);
    return d;
}

/// Partial derivative D^(a1, a2) of a bivariate trigonometric polynomial.
inline TrigPoly differentiate_partial(const TrigPoly& t, int a1, int a2)
{
    require(t.dim == 2 && a1 >= 0 && a2 >= 0, "differentiate_partial: bivariate input and non-negative orders");
    TrigPoly d = t;
    for (int k1 = -t.n; k1 <= t.n; ++k1)
        for (int k2 = -t.n; k2 <= t.n; ++k2)
            d.at(k1, k2) *= std::pow(Complex(0.0, k1), a1) * std::pow(Complex(0.0, k2), a2);
    return d;
}

inline AlgPoly differentiate(const AlgPoly& p, int order)
{
    require(order >= 1, "differentiate: order must be positive");
    AlgPoly cur = p;
    for (int o = 0; o < order; ++o) {
        const int n = cur.n;
        if (n == 0) {
            cur = AlgPoly::make({0.0}, cur.span);
            continue;
        }
        std::vector<double> d(static_cast<std::size_t>(n) + 1, 0.0); // d_k for k = 0..n (d_n = 0)
        for (int k = n; k >= 1; --k) {
            const double next = k + 1 <= n ? d[static_cast<std::size_t>(k + 1)] : 0.0;
            d[static_cast<std::size_t>(k - 1)] = next + 2.0 * k * cur.cheb[static_cast<std::size_t>(k)];
        }
        d[0] *= 0.5;
        d.pop_back();
        const double scale = 2.0 / cur.span.length();
        for (auto& v : d)
            v *= scale;
        cur = AlgPoly::make(std::move(d), cur.span);
    }
    return cur;
}

/// Spline derivative: order <= r-2 is classical; order r-1 needs `allow_piecewise` and yields a
/// right-continuous piecewise constant spline.
inline PeriodicSpline differentiate(const PeriodicSpline& s, int order, bool allow_piecewise = false)
{
    require(order >= 1, "differentiate: order must be positive");
    if (order > s.r - 1 || (order == s.r - 1 && !allow_piecewise))
        throw UnsupportedError("differentiate: spline of order " + std::to_string(s.r) +
                               " has no classical derivative of order " + std::to_string(order));
    PeriodicSpline cur = s;
    for (int o = 0; o < order; ++o) {
        std::vector<double> d(cur.coeffs.size());
        for (int j = 0; j < cur.n; ++j) {
            const int prev = (j - 1 + cur.n) % cur.n;
            d[static_cast<std::size_t>(j)] =
                cur.n * (cur.coeffs[static_cast<std::size_t>(j)] - cur.coeffs[static_cast<std::size_t>(prev)]);
        }
        cur.coeffs = std::move(d);
        cur.r -= 1;
    }
    cur.piecewise = cur.r == 1;
    return cur;
}

inline ExpSum differentiate(const ExpSum& e, int order)
{
    require(order >= 1, "differentiate: order must be positive");
    if (!e.muntz) {
        ExpSum d = e;
        for (std::size_t j = 0; j < d.lambdas.size(); ++j)
            d.coeffs[j] *= std::pow(d.lambdas[j], order);
        return d;
    }
    ExpSum cur = e;
    for (int o = 0; o < order; ++o) {
        std::vector<double> lam;
        std::vector<Complex> cf;
        for (std::size_t j = 0; j < cur.lambdas.size(); ++j) {
            if (cur.lambdas[j] == 0.0)
                continue;
            lam.push_back(cur.lambdas[j] - 1.0);
            cf.push_back(cur.coeffs[j] * cur.lambdas[j]);
        }
        if (lam.empty()) {
            lam.push_back(0.0);
            cf.emplace_back(0.0);
        }
        cur = ExpSum::make(std::move(lam), std::move(cf), cur.span, true);
    }
    return cur;
}

inline FunctionModel differentiate(const FunctionModel& f, int order, bool allow_piecewise = false)
{
    switch (f.repr.index()) {
    case 0: return differentiate(std::get<TrigPoly>(f.repr), order);
    case 1: return differentiate(std::get<AlgPoly>(f.repr), order);
    case 2: return differentiate(std::get<PeriodicSpline>(f.repr), order, allow_piecewise);
    default: return differentiate(std::get<ExpSum>(f.repr), order);
    }
}

// ---------------------------------------------------------------------------------------------
// linear combinations

inline TrigPoly combine(Complex alpha, const TrigPoly& f, Complex beta, const TrigPoly& g)
{
    require(f.dim == g.dim, "combine: dimension mismatch");
    const int n = std::max(f.n, g.n);
    TrigPoly out = TrigPoly::zero(n, f.dim);
    if (f.dim == 1) {
        for (int k = -n; k <= n; ++k)
            out.at(k) = alpha * f.coeff(k) + beta * g.coeff(k);
    } else {
        for (int k1 = -n; k1 <= n; ++k1)
            for (int k2 = -n; k2 <= n; ++k2)
                out.at(k1, k2) = alpha * f.coeff(k1, k2) + beta * g.coeff(k1, k2);
    }
    out.real_valued = f.real_valued && g.real_valued && alpha.imag() == 0.0 && beta.imag() == 0.0;
    return out;
}

inline FunctionModel combine(Complex alpha, const FunctionModel& f, Complex beta, const FunctionModel& g)
{
    require(f.repr.index() == g.repr.index(), "combine: models must belong to the same family");
    switch (f.repr.index()) {
    case 0: return combine(alpha, std::get<TrigPoly>(f.repr), beta, std::get<TrigPoly>(g.repr));
    case 1: {
        const auto& p = std::get<AlgPoly>(f.repr);
        const auto& q = std::get<AlgPoly>(g.repr);
        require(p.span == q.span, "combine: interval mismatch");
        require(alpha.imag() == 0.0 && beta.imag() == 0.0, "combine: algebraic polynomials are real");
        std::vector<double> c(static_cast<std::size_t>(std::max(p.n, q.n)) + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] = alpha.real() * (k < p.cheb.size() ? p.cheb[k] : 0.0) +
                   beta.real() * (k < q.cheb.size() ? q.cheb[k] : 0.0);
        return AlgPoly::make(std::move(c), p.span);
    }
    case 2: {
        const auto& s = std::get<PeriodicSpline>(f.repr);
        const auto& t = std::get<PeriodicSpline>(g.repr);
        require(s.r == t.r && s.n == t.n, "combine: spline order/knot mismatch");
        require(alpha.imag() == 0.0 && beta.imag() == 0.0, "combine: splines are real");
        PeriodicSpline out = s;
        for (std::size_t j = 0; j < out.coeffs.size(); ++j)
            out.coeffs[j] = alpha.real() * s.coeffs[j] + beta.real() * t.coeffs[j];
        return out;
    }
    default: {
        const auto& e = std::get<ExpSum>(f.repr);
        const auto& h = std::get<ExpSum>(g.repr);
        require(e.span == h.span && e.muntz == h.muntz, "combine: exponential sum domain mismatch");
        std::vector<double> lam;
        std::vector<Complex> cf;
        std::size_t i = 0, j = 0;
        while (i < e.lambdas.size() || j < h.lambdas.size()) {
            if (j == h.lambdas.size() || (i < e.lambdas.size() && e.lambdas[i] < h.lambdas[j])) {
                lam.push_back(e.lambdas[i]);
                cf.push_back(alpha * e.coeffs[i++]);
            } else if (i == e.lambdas.size() || h.lambdas[j] < e.lambdas[i]) {
                lam.push_back(h.lambdas[j]);
                cf.push_back(beta * h.coeffs[j++]);
            } else {
                lam.push_back(e.lambdas[i]);
                cf.push_back(alpha * e.coeffs[i++] + beta * h.coeffs[j++]);
            }
        }
        return ExpSum::make(std::move(lam), std::move(cf), e.span, e.muntz);
    }
    }
}

inline FunctionModel scale(const FunctionModel& f, double alpha) { return combine(alpha, f, 0.0, f); }

// ---------------------------------------------------------------------------------------------
// named members and random generation

/// sin(k x) as a degree-n trigonometric polynomial (n >= k).
inline TrigPoly trig_sin(int n, int k)
{
    TrigPoly t = TrigPoly::zero(n);
    t.at(k) = Complex(0.0, -0.5);
    t.at(-k) = Complex(0.0, 0.5);
    t.real_valued = true;
    return t;
}

inline TrigPoly trig_cos(int n, int k)
{
    TrigPoly t = TrigPoly::zero(n);
    t.at(k) += 0.5;
    t.at(-k) += 0.5;
    t.real_valued = true;
    return t;
}

/// L2 norm on [0, 2pi)^d from coefficients.
inline double l2_norm_exact(const TrigPoly& t)
{
    double s = 0.0;
    for (const auto& c : t.coeffs)
        s += std::norm(c);
    return std::sqrt(s * std::pow(kTwoPi, t.dim));
}

struct ModelRequest {
    Family family = Family::Trig;
    int n = 1;
    std::uint64_t seed = 0;
    bool real_valued = false;
    int spline_order = 3;
    int dim = 1;
    Interval span{-1.0, 1.0};
    std::vector<double> lambdas; // exponential sums; default {0, 1, ..., n}
};

/// Coefficients i.i.d. standard (complex) normal from CounterRng(seed); real families draw real
/// normals, real trigonometric polynomials are conjugate-symmetrized.
inline FunctionModel random_model(const ModelRequest& req)
{
    require(req.n >= 1, "random_model: n must be at least 1");
    CounterRng rng(req.seed);
    switch (req.family) {
    case Family::Trig: {
        TrigPoly t = TrigPoly::zero(req.n, req.dim);
        if (req.dim == 1) {
            for (int k = -req.n; k <= req.n; ++k)
                t.at(k) = rng.complex_normal();
            if (req.real_valued) {
                t.at(0) = Complex(t.at(0).real(), 0.0);
                for (int k = 1; k <= req.n; ++k)
                    t.at(-k) = std::conj(t.at(k));
            }
        } else {
            for (auto& c : t.coeffs)
                c = rng.complex_normal();
            if (req.real_valued) {
                t.at(0, 0) = Complex(t.at(0, 0).real(), 0.0);
                for (int k1 = -req.n; k1 <= req.n; ++k1)
                    for (int k2 = -req.n; k2 <= req.n; ++k2)
                        if (k2 > 0 || (k2 == 0 && k1 > 0))
                            t.at(-k1, -k2) = std::conj(t.at(k1, k2));
            }
        }
        t.real_valued = req.real_valued;
        return t;
    }
    case Family::Alg: {
        std::vector<double> c(static_cast<std::size_t>(req.n) + 1);
        for (auto& v : c)
            v = rng.normal();
        return AlgPoly::make(std::move(c), req.span);
    }
    case Family::Spline: {
        std::vector<double> c(static_cast<std::size_t>(req.n));
        for (auto& v : c)
            v = rng.normal();
        return PeriodicSpline::make(req.spline_order, std::move(c));
    }
    case Family::Exp:
    case Family::Muntz: {
        std::vector<double> lam = req.lambdas;
        if (lam.empty())
            for (int j = 0; j <= req.n; ++j)
                lam.push_back(j);
        std::vector<Complex> cf(lam.size());
        for (auto& c : cf)
            c = req.real_valued ? Complex(rng.normal(), 0.0) : rng.complex_normal();
        return ExpSum::make(std::move(lam), std::move(cf), req.span, req.family == Family::Muntz);
    }
    }
    throw ValidationError("random_model: unknown family");
}

/// n^2 + sum lambda_j with n = |Lambda| - 1.
inline double gamma_lambda(std::span<const double> lambdas)
{
    require(!lambdas.empty(), "gamma_lambda: need at least one exponent");
    for (std::size_t j = 1; j < lambdas.size(); ++j)
        require(lambdas[j] > lambdas[j - 1], "gamma_lambda: exponents must be strictly increasing");
    const double n = static_cast<double>(lambdas.size() - 1);
    double s = n * n;
    for (double l : lambdas)
        s += l;
    return s;
}

} // namespace mzlab
