#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mzlab/core.hpp"
#include "mzlab/detail/gauss.hpp"
#include "mzlab/detail/numerics.hpp"
#include "mzlab/function_models.hpp"

namespace mzlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------------------------
// dense grids

/// Integration grid standing in for the measure: points non-decreasing (per axis for d = 2),
/// weights positive and summing to the domain measure. Interval grids also carry the exact
/// distances to both endpoints, which stay strictly monotone where the points round onto an end.
struct QuadratureGrid {
    Domain domain;
    int dim = 1;
    std::vector<double> points;  // 1-D points, or axis points for the tensor grid
    std::vector<double> weights; // matching weights (per axis for d = 2)
    double oversampling = 1.0;   // points per unit of target degree
    bool trapezoid = false;      // uniform periodic grid, exact for e^{ikx}, |k| < size
    std::vector<double> gap_lo;  // x - lo (interval grids only)
    std::vector<double> gap_hi;  // hi - x (interval grids only)

    [[nodiscard]] std::size_t size() const { return dim == 1 ? points.size() : points.size() * points.size(); }
    [[nodiscard]] double total_weight() const
    {
        const double s = std::accumulate(weights.begin(), weights.end(), 0.0);
        return dim == 1 ? s : s * s;
    }
};

inline std::shared_ptr<const QuadratureGrid> periodic_grid(std::size_t M, Domain domain = Domain::torus(),
                                                           double oversampling = 1.0)
{
    require(M >= 1, "periodic_grid: need at least one point");
    require(domain.periodic, "periodic_grid: domain must be periodic");
    auto g = std::make_shared<QuadratureGrid>();
    g->domain = domain;
    g->trapezoid = true;
    g->oversampling = oversampling;
    const double h = domain.measure() / static_cast<double>(M);
    g->points.resize(M);
    g->weights.assign(M, h);
    for (std::size_t j = 0; j < M; ++j)
        g->points[j] = domain.span.lo + h * static_cast<double>(j);
    return g;
}

/// Composite Gauss-Legendre grid on an interval with roughly M points in uniform panels plus
/// geometric grading at both ends, deep enough for endpoint behaviour down to (1 -+ x)^grade.
inline std::shared_ptr<const QuadratureGrid> interval_grid(Interval span, std::size_t M, double oversampling = 1.0,
                                                           double grade = -0.5)
{
    const int panels = std::max(1, static_cast<int>(M / detail::kPanelOrder));
    auto rule = detail::composite_rule(span.lo, span.hi, panels, grade, grade);
    auto g = std::make_shared<QuadratureGrid>();
    g->domain = Domain::interval(span.lo, span.hi);
    g->points = std::move(rule.nodes);
    g->weights = std::move(rule.weights);
    g->gap_lo = std::move(rule.gap_lo);
    g->gap_hi = std::move(rule.gap_hi);
    g->oversampling = oversampling;
    return g;
}

/// Tensor trapezoid grid on [0, 2pi)^2 with M points per axis.
inline std::shared_ptr<const QuadratureGrid> tensor_grid(std::size_t M, double oversampling = 1.0)
{
    auto axis = periodic_grid(M, Domain::torus(), oversampling);
    auto g = std::make_shared<QuadratureGrid>(*axis);
    g->dim = 2;
    return g;
}

inline std::size_t default_grid_size(int n) { return std::max<std::size_t>(4096, 64 * static_cast<std::size_t>(n)); }

/// Default oracle grid for a model: trapezoid with max(4096, 64n) points on periodic domains,
/// graded Gauss-Legendre panels of the same count on intervals, max(256, 64n) per axis for d = 2.
inline std::shared_ptr<const QuadratureGrid> default_grid(const FunctionModel& f)
{
    const int n = std::max(1, f.degree());
    if (f.dim() == 2)
        return tensor_grid(std::max<std::size_t>(256, 64 * static_cast<std::size_t>(n)), 64.0);
    const Domain d = f.domain();
    const std::size_t M = default_grid_size(n);
    if (d.periodic)
        return periodic_grid(M, d, static_cast<double>(M) / n);
    return interval_grid(d.span, M, static_cast<double>(M) / n);
}

struct SampledFunction {
    std::shared_ptr<const QuadratureGrid> grid;
    std::vector<Complex> values; // row-major in x for d = 2: values[i + M*j] at (x_i, y_j)
};

inline SampledFunction sample(const FunctionModel& f, std::shared_ptr<const QuadratureGrid> grid)
{
    SampledFunction s{std::move(grid), {}};
    const auto& g = *s.grid;
    if (g.dim == 2) {
        const auto& t = std::get<TrigPoly>(f.repr);
        const std::size_t M = g.points.size();
        s.values.resize(M * M);
        for (std::size_t j = 0; j < M; ++j)
            for (std::size_t i = 0; i < M; ++i)
                s.values[i + M * j] = evaluate2(t, g.points[i], g.points[j]);
        return s;
    }
    s.values = evaluate(f, g.points);
    return s;
}

inline SampledFunction sample(const FunctionModel& f) { return sample(f, default_grid(f)); }

template <class Fn>
SampledFunction sample_fn(Fn&& fn, std::shared_ptr<const QuadratureGrid> grid)
{
    SampledFunction s{std::move(grid), {}};
    s.values.reserve(s.grid->points.size());
    for (double x : s.grid->points)
        s.values.emplace_back(fn(x));
    return s;
}

// ---------------------------------------------------------------------------------------------
// catalogs

enum class WeightKind { Const, Jacobi, Sin };

/// Weight catalog: constant 1, Jacobi (1-x)^alpha (1+x)^beta on [-1, 1], |sin x|^gamma on the period.
struct WeightSpec {
    WeightKind kind = WeightKind::Const;
    double alpha = 0.0; // jacobi alpha, or sin exponent gamma
    double beta = 0.0;

    static WeightSpec constant() { return {}; }
    static WeightSpec jacobi(double a, double b)
    {
        require(a > -1.0 && b > -1.0, "jacobi weight needs alpha, beta > -1");
        return {WeightKind::Jacobi, a, b};
    }
    static WeightSpec sin_power(double g)
    {
        require(g >= 0.0, "sin weight needs gamma >= 0");
        return {WeightKind::Sin, g, 0.0};
    }

    [[nodiscard]] double operator()(double x) const
    {
        switch (kind) {
        case WeightKind::Const: return 1.0;
        case WeightKind::Jacobi: return std::pow(1.0 - x, alpha) * std::pow(1.0 + x, beta);
        case WeightKind::Sin: return std::pow(std::abs(std::sin(x)), alpha);
        }
        return 1.0;
    }

    /// Weight at a point of [lo, hi] given by its exact distances to lo and hi; keeps Jacobi
    /// factors finite and accurate for points that round onto +-1.
    [[nodiscard]] double at_gaps(double x, double lo, double hi, double gap_lo, double gap_hi) const
    {
        if (kind != WeightKind::Jacobi)
            return (*this)(x);
        const double right = (1.0 - hi) + gap_hi; // 1 - x
        const double left = (lo + 1.0) + gap_lo;  // 1 + x
        return std::pow(right, alpha) * std::pow(left, beta);
    }

    /// Integral of the weight over [lo, hi]; graded panels near the Jacobi endpoint singularities.
    [[nodiscard]] double integral(double lo, double hi) const
    {
        if (hi <= lo)
            return 0.0;
        if (kind == WeightKind::Const)
            return hi - lo;
        std::optional<double> grade_lo, grade_hi;
        int panels = 4;
        if (kind == WeightKind::Jacobi) {
            require(lo >= -1.0 - 1e-14 && hi <= 1.0 + 1e-14, "jacobi weight integral outside [-1, 1]");
            lo = std::max(lo, -1.0);
            hi = std::min(hi, 1.0);
            if (lo <= -1.0 + 1e-14 && beta != 0.0)
                grade_lo = beta;
            if (hi >= 1.0 - 1e-14 && alpha != 0.0)
                grade_hi = alpha;
        } else {
            // |sin x|^g is non-smooth at multiples of pi: split there
            panels = 8;
            const double k0 = std::ceil(lo / kPi);
            double a = lo;
            double acc = 0.0;
            for (double k = k0; k * kPi < hi; k += 1.0) {
                const double b = k * kPi;
                if (b > a) {
                    auto r = detail::composite_rule(a, b, panels, alpha, alpha);
                    for (std::size_t i = 0; i < r.nodes.size(); ++i)
                        acc += r.weights[i] * (*this)(r.nodes[i]);
                }
                a = b;
            }
            auto r = detail::composite_rule(a, hi, panels, alpha, alpha);
            for (std::size_t i = 0; i < r.nodes.size(); ++i)
                acc += r.weights[i] * (*this)(r.nodes[i]);
            return acc;
        }
        auto r = detail::composite_rule(lo, hi, panels, grade_lo, grade_hi);
        double acc = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            acc += r.weights[i] * at_gaps(r.nodes[i], lo, hi, r.gap_lo[i], r.gap_hi[i]);
        return acc;
    }
};

enum class OrliczKind { Power, PowerLog, Exp };
enum class OrliczMode { Luxemburg, Sharp };

/// Orlicz catalog: |t|^p (p >= 1), |t|^p log(e + a|t|) (p >= 1, a > 0), e^{|t|} - 1.
struct OrliczPhi {
    OrliczKind kind = OrliczKind::Power;
    double p = 2.0;
    double a = 1.0;

    static OrliczPhi power(double p)
    {
        require(p >= 1.0, "orlicz power needs p >= 1");
        return {OrliczKind::Power, p, 1.0};
    }
    static OrliczPhi power_log(double p, double a)
    {
        require(p >= 1.0 && a > 0.0, "orlicz powerlog needs p >= 1 and a > 0");
        return {OrliczKind::PowerLog, p, a};
    }
    static OrliczPhi exp_minus_one() { return {OrliczKind::Exp, 1.0, 1.0}; }

    [[nodiscard]] double operator()(double t) const
    {
        t = std::abs(t);
        switch (kind) {
        case OrliczKind::Power: return std::pow(t, p);
        case OrliczKind::PowerLog: return std::pow(t, p) * std::log(kE + a * t);
        case OrliczKind::Exp: return std::expm1(t);
        }
        return 0.0;
    }

    /// Inverse on [0, inf).
    [[nodiscard]] double inverse(double y) const
    {
        require(y >= 0.0, "orlicz inverse needs y >= 0");
        switch (kind) {
        case OrliczKind::Power: return std::pow(y, 1.0 / p);
        case OrliczKind::Exp: return std::log1p(y);
        case OrliczKind::PowerLog: {
            double hi = 1.0;
            while ((*this)(hi) < y)
                hi *= 2.0;
            return detail::bisect_decreasing([&](double t) { return y - (*this)(t); }, 0.0, hi, 0.0);
        }
        }
        return 0.0;
    }
};

struct LpSpec {
    double p = 2.0; // may be infinity
};
struct WeightedLpSpec {
    double p = 2.0;
    WeightSpec weight;
};
struct OrliczSpec {
    OrliczPhi phi;
    OrliczMode mode = OrliczMode::Luxemburg;
};
struct LorentzSpec {
    double p = 2.0;
    double q = 2.0; // may be infinity
};
/// Variable exponent p(x) = p0 + p1 sin^2 x.
struct VariableLpSpec {
    double p0 = 2.0;
    double p1 = 0.0;
    [[nodiscard]] double exponent(double x) const
    {
        const double s = std::sin(x);
        return p0 + p1 * s * s;
    }
};
/// Mixed norm on [0, 2pi)^2: inner L_{p1} in x, outer L_{p2} in y.
struct MixedLpSpec {
    double p1 = 2.0;
    double p2 = 2.0;
};

inline std::string format_number(double v)
{
    if (std::isinf(v))
        return "inf";
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

struct NormSpec {
    std::variant<LpSpec, WeightedLpSpec, OrliczSpec, LorentzSpec, VariableLpSpec, MixedLpSpec> v{LpSpec{}};

    NormSpec() = default;
    template <class T>
    NormSpec(T spec) : v(std::move(spec))
    {
    }

    static NormSpec lp(double p) { return LpSpec{p}; }
    static NormSpec orlicz(OrliczPhi phi, OrliczMode mode = OrliczMode::Luxemburg) { return OrliczSpec{phi, mode}; }

    [[nodiscard]] bool is_lp() const { return std::holds_alternative<LpSpec>(v); }
    [[nodiscard]] bool is_sup() const { return is_lp() && std::isinf(std::get<LpSpec>(v).p); }

    /// Aggregation exponent of the quasi-triangle inequality ||f+g||^q <= ||f||^q + ||g||^q.
    [[nodiscard]] double q_x() const
    {
        return std::visit(
            [](const auto& s) -> double {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, LpSpec> || std::is_same_v<S, WeightedLpSpec>)
                    return std::min(s.p, 1.0);
                else if constexpr (std::is_same_v<S, OrliczSpec>)
                    return 1.0;
                else if constexpr (std::is_same_v<S, LorentzSpec>)
                    return (s.q >= 1.0 && s.q <= s.p) ? 1.0 : std::min({1.0, s.p, s.q});
                else if constexpr (std::is_same_v<S, VariableLpSpec>)
                    return std::min(1.0, s.p0);
                else
                    return std::min({1.0, s.p1, s.p2});
            },
            v);
    }

    [[nodiscard]] std::string to_string() const
    {
        return std::visit(
            [](const auto& s) -> std::string {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, LpSpec>) {
                    return "lp:" + format_number(s.p);
                } else if constexpr (std::is_same_v<S, WeightedLpSpec>) {
                    std::string w;
                    switch (s.weight.kind) {
                    case WeightKind::Const: w = "const"; break;
                    case WeightKind::Jacobi:
                        w = "jacobi:" + format_number(s.weight.alpha) + ":" + format_number(s.weight.beta);
                        break;
                    case WeightKind::Sin: w = "sin:" + format_number(s.weight.alpha); break;
                    }
                    return "wlp:" + format_number(s.p) + ":" + w;
                } else if constexpr (std::is_same_v<S, OrliczSpec>) {
                    std::string phi;
                    switch (s.phi.kind) {
                    case OrliczKind::Power: phi = "power:" + format_number(s.phi.p); break;
                    case OrliczKind::PowerLog:
                        phi = "powerlog:" + format_number(s.phi.p) + ":" + format_number(s.phi.a);
                        break;
                    case OrliczKind::Exp: phi = "exp"; break;
                    }
                    return "orlicz:" + phi + (s.mode == OrliczMode::Sharp ? ":sharp" : ":luxemburg");
                } else if constexpr (std::is_same_v<S, LorentzSpec>) {
                    return "lorentz:" + format_number(s.p) + ":" + format_number(s.q);
                } else if constexpr (std::is_same_v<S, VariableLpSpec>) {
                    return "vlp:" + format_number(s.p0) + ":" + format_number(s.p1);
                } else {
                    return "mixed:" + format_number(s.p1) + ":" + format_number(s.p2);
                }
            },
            v);
    }

    static NormSpec parse(const std::string& text)
    {
        std::vector<std::string> tok;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':'))
            tok.push_back(item);
        auto bad = [&](const std::string& why) { return ValidationError("norm spec '" + text + "': " + why); };
        auto num = [&](std::size_t i) -> double {
            if (i >= tok.size())
                throw bad("missing parameter");
            if (tok[i] == "inf")
                return kInf;
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(tok[i], &used);
            } catch (const std::exception&) {
                throw bad("'" + tok[i] + "' is not a number");
            }
            if (used != tok[i].size() || std::isnan(x))
                throw bad("'" + tok[i] + "' is not a number");
            return x;
        };
        auto arity = [&](std::size_t n) {
            if (tok.size() != n)
                throw bad("expected " + std::to_string(n - 1) + " fields after the kind");
        };
        auto positive = [&](double p, const char* what) {
            if (!(p > 0.0))
                throw bad(std::string(what) + " must be positive");
        };
        if (tok.empty())
            throw bad("empty");
        const std::string& kind = tok[0];
        if (kind == "lp") {
            arity(2);
            const double p = num(1);
            positive(p, "p");
            return LpSpec{p};
        }
        if (kind == "wlp") {
            if (tok.size() < 3)
                throw bad("missing weight");
            const double p = num(1);
            positive(p, "p");
            if (std::isinf(p))
                throw bad("weighted sup norm is not supported");
            WeightSpec w;
            try {
                if (tok[2] == "const") {
                    arity(3);
                } else if (tok[2] == "jacobi") {
                    arity(5);
                    w = WeightSpec::jacobi(num(3), num(4));
                } else if (tok[2] == "sin") {
                    arity(4);
                    w = WeightSpec::sin_power(num(3));
                } else {
                    throw bad("unknown weight '" + tok[2] + "'");
                }
            } catch (const ValidationError& e) {
                throw bad(e.what());
            }
            return WeightedLpSpec{p, w};
        }
        if (kind == "orlicz") {
            if (tok.size() < 2)
                throw bad("missing Orlicz function");
            OrliczPhi phi;
            std::size_t next = 0;
            try {
                if (tok[1] == "power") {
                    phi = OrliczPhi::power(num(2));
                    next = 3;
                } else if (tok[1] == "powerlog") {
                    phi = OrliczPhi::power_log(num(2), num(3));
                    next = 4;
                } else if (tok[1] == "exp") {
                    phi = OrliczPhi::exp_minus_one();
                    next = 2;
                } else {
                    throw bad("unknown Orlicz function '" + tok[1] + "'");
                }
            } catch (const ValidationError& e) {
                throw bad(e.what());
            }
            if (std::isinf(phi.p))
                throw bad("Orlicz exponent must be finite");
            OrliczMode mode = OrliczMode::Luxemburg;
            if (tok.size() == next + 1) {
                if (tok[next] == "sharp")
                    mode = OrliczMode::Sharp;
                else if (tok[next] != "luxemburg")
                    throw bad("unknown Orlicz mode '" + tok[next] + "'");
            } else if (tok.size() != next) {
                throw bad("too many fields");
            }
            return OrliczSpec{phi, mode};
        }
        if (kind == "lorentz") {
            arity(3);
            const double p = num(1), q = num(2);
            positive(p, "p");
            positive(q, "q");
            if (std::isinf(p))
                throw bad("Lorentz p must be finite");
            return LorentzSpec{p, q};
        }
        if (kind == "vlp") {
            arity(3);
            const double p0 = num(1), p1 = num(2);
            positive(p0, "p0");
            if (!(p1 >= 0.0) || std::isinf(p0) || std::isinf(p1))
                throw bad("p1 must be finite and non-negative");
            return VariableLpSpec{p0, p1};
        }
        if (kind == "mixed") {
            arity(3);
            const double p1 = num(1), p2 = num(2);
            positive(p1, "p1");
            positive(p2, "p2");
            if (std::isinf(p1) || std::isinf(p2))
                throw bad("mixed exponents must be finite");
            return MixedLpSpec{p1, p2};
        }
        throw bad("unknown kind '" + kind + "'");
    }
};

// ---------------------------------------------------------------------------------------------
// weighted-sum kernels shared by continuous and step-function norms

namespace detail {

inline void check_finite(std::span<const double> v)
{
    for (double x : v)
        require(std::isfinite(x), "norm: non-finite value");
}

inline double lp_sum(std::span<const double> v, std::span<const double> w, double p)
{
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (w[i] > 0.0)
            m = std::max(m, v[i]);
    if (std::isinf(p) || m == 0.0)
        return m;
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] > 0.0)
            s += w[i] * std::pow(v[i] / m, p);
    return m * std::pow(s, 1.0 / p);
}

/// lambda with sum w Phi(v/lambda) = 1 (bisection on lambda), 0 for v == 0.
template <class Modular>
double luxemburg_solve(Modular&& modular, double vmax)
{
    if (vmax == 0.0)
        return 0.0;
    double lo = vmax, hi = vmax;
    int guard = 0;
    while (modular(lo) <= 1.0 && guard++ < 2000)
        lo *= 0.5;
    guard = 0;
    while (modular(hi) > 1.0 && guard++ < 2000)
        hi *= 2.0;
    if (!(modular(lo) > 1.0) || !(modular(hi) <= 1.0))
        throw NumericalError("Luxemburg norm: failed to bracket the modular");
    return bisect_decreasing([&](double lam) { return modular(lam) - 1.0; }, lo, hi, 1e-13);
}

inline double luxemburg(std::span<const double> v, std::span<const double> w, const OrliczPhi& phi)
{
    double vmax = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (w[i] > 0.0)
            vmax = std::max(vmax, v[i]);
    auto modular = [&](double lam) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] > 0.0)
                s += w[i] * phi(v[i] / lam);
        return s;
    };
    return luxemburg_solve(modular, vmax);
}

} // namespace detail

enum class SharpStatus { Interior, BoundaryOptimum, Zero };

struct SharpResult {
    double value = 0.0;
    double kappa = 0.0; // minimizer (the boundary value when the infimum is a limit)
    SharpStatus status = SharpStatus::Zero;
};

namespace detail {

/// inf over kappa > 0 of (1/kappa)(1 + sum w Phi(kappa v)), by golden section on ln kappa.
inline SharpResult sharp_minimize(std::span<const double> v, std::span<const double> w, const OrliczPhi& phi)
{
    double vmax = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (w[i] > 0.0)
            vmax = std::max(vmax, v[i]);
    if (vmax == 0.0)
        return {0.0, 0.0, SharpStatus::Zero};
    auto g = [&](double s) {
        const double kappa = std::exp(s);
        double acc = 1.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] > 0.0)
                acc += w[i] * phi(kappa * v[i]);
        return acc / kappa;
    };
    auto gf = [&](double s) {
        const double r = g(s);
        return std::isfinite(r) ? r : kInf;
    };
    // bracket a < m < b with g(m) <= g(a), g(b), widening geometrically
    constexpr double s_cap = 700.0;
    const double s0 = -std::log(vmax);
    double a = s0 - 1.0, m = s0, b = s0 + 1.0;
    double ga = gf(a), gm = gf(m), gb = gf(b);
    double step = 1.0;
    int doublings = 0;
    while (!(gm <= ga && gm <= gb)) {
        if (++doublings > 60)
            throw NumericalError("Orlicz sharp norm: failed to bracket the minimizer");
        step *= 2.0;
        if (gb < gm) {
            if (b >= s_cap)
                return {gb, std::exp(b), SharpStatus::BoundaryOptimum};
            a = m;
            ga = gm;
            m = b;
            gm = gb;
            b = std::min(m + step, s_cap);
            gb = gf(b);
        } else {
            b = m;
            gb = gm;
            m = a;
            gm = ga;
            a = m - step;
            ga = gf(a);
        }
    }
    auto best = golden_minimize(gf, a, b, 1e-12, 400);
    if (gm < best.value)
        best = {m, gm};
    // a tail that only flattens out in floating point (g decreasing towards its limit as k -> inf)
    const double g_cap = gf(s_cap);
    if (g_cap <= best.value * (1.0 + 1e-14))
        return {g_cap, std::exp(s_cap), SharpStatus::BoundaryOptimum};
    return {best.value, std::exp(best.x), SharpStatus::Interior};
}

inline std::vector<double> abs_values(std::span<const Complex> v)
{
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        a[i] = std::abs(v[i]);
    check_finite(a);
    return a;
}

} // namespace detail

struct Rearrangement {
    std::vector<double> values;     // |v| sorted non-increasing
    std::vector<double> cumulative; // W_i = total weight of the first i+1 entries
    std::vector<std::size_t> order; // original indices
};

/// Decreasing rearrangement of a step function; ties keep the original index order.
inline Rearrangement rearrangement(std::span<const double> values, std::span<const double> weights)
{
    require(values.size() == weights.size(), "rearrangement: values and weights differ in length");
    for (double w : weights)
        require(w > 0.0, "rearrangement: weights must be positive");
    Rearrangement r;
    r.order.resize(values.size());
    std::iota(r.order.begin(), r.order.end(), 0);
    std::stable_sort(r.order.begin(), r.order.end(),
                     [&](std::size_t i, std::size_t j) { return std::abs(values[i]) > std::abs(values[j]); });
    double acc = 0.0;
    for (auto i : r.order) {
        r.values.push_back(std::abs(values[i]));
        acc += weights[i];
        r.cumulative.push_back(acc);
    }
    return r;
}

/// Lorentz (p,q) functional of a decreasing step function:
/// (sum v_i^q (p/q)(W_i^{q/p} - W_{i-1}^{q/p}))^{1/q}, or max v_i W_i^{1/p} for q = inf.
inline double lorentz_from_rearrangement(const Rearrangement& r, double p, double q)
{
    const double m = r.values.empty() ? 0.0 : r.values.front();
    if (m == 0.0)
        return 0.0;
    if (std::isinf(q)) {
        double best = 0.0;
        for (std::size_t i = 0; i < r.values.size(); ++i)
            best = std::max(best, r.values[i] * std::pow(r.cumulative[i], 1.0 / p));
        return best;
    }
    double s = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const double cur = std::pow(r.cumulative[i], q / p);
        if (r.values[i] > 0.0)
            s += std::pow(r.values[i] / m, q) * (p / q) * (cur - prev);
        prev = cur;
    }
    return m * std::pow(s, 1.0 / q);
}

/// Norm of the function taking value v[i] on a set of measure w[i] at location x[i] (the
/// location matters only for variable exponents). Shared by grid norms and step functions.
inline double weighted_norm(std::span<const double> v, std::span<const double> w, std::span<const double> x,
                            const NormSpec& spec)
{
    detail::check_finite(v);
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LpSpec>) {
                return detail::lp_sum(v, w, s.p);
            } else if constexpr (std::is_same_v<S, WeightedLpSpec>) {
                std::vector<double> ww(w.begin(), w.end());
                for (std::size_t i = 0; i < ww.size(); ++i)
                    ww[i] *= s.weight(x[i]);
                return detail::lp_sum(v, ww, s.p);
            } else if constexpr (std::is_same_v<S, OrliczSpec>) {
                if (s.mode == OrliczMode::Sharp)
                    return detail::sharp_minimize(v, w, s.phi).value;
                return detail::luxemburg(v, w, s.phi);
            } else if constexpr (std::is_same_v<S, LorentzSpec>) {
                std::vector<double> vv, ww;
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (w[i] > 0.0) {
                        vv.push_back(v[i]);
                        ww.push_back(w[i]);
                    }
                return lorentz_from_rearrangement(rearrangement(vv, ww), s.p, s.q);
            } else if constexpr (std::is_same_v<S, VariableLpSpec>) {
                double vmax = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (w[i] > 0.0)
                        vmax = std::max(vmax, v[i]);
                std::vector<double> px(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    px[i] = s.exponent(x[i]);
                auto modular = [&](double lam) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < v.size(); ++i)
                        if (v[i] > 0.0)
                            acc += w[i] * std::pow(v[i] / lam, px[i]);
                    return acc;
                };
                return detail::luxemburg_solve(modular, vmax);
            } else {
                throw ValidationError("mixed norm needs a bivariate tensor grid");
            }
        },
        spec.v);
}

/// Mixed L_{p1, p2} norm of tensor data v[i + M j] with axis weights wx, wy.
inline double mixed_norm(std::span<const double> v, std::span<const double> wx, std::span<const double> wy,
                         const MixedLpSpec& s)
{
    const std::size_t M = wx.size();
    require(v.size() == M * wy.size(), "mixed norm: tensor shape mismatch");
    std::vector<double> inner(wy.size());
    for (std::size_t j = 0; j < wy.size(); ++j)
        inner[j] = detail::lp_sum(v.subspan(j * M, M), wx, s.p1);
    return detail::lp_sum(inner, wy, s.p2);
}

/// Norm of a sampled function against the grid measure.
inline double continuous_norm(const SampledFunction& f, const NormSpec& spec)
{
    require(f.grid && f.grid->size() > 0, "continuous_norm: empty grid");
    require(f.values.size() == f.grid->size(), "continuous_norm: values do not match grid");
    const auto v = detail::abs_values(f.values);
    const auto& g = *f.grid;
    if (g.dim == 2) {
        if (const auto* m = std::get_if<MixedLpSpec>(&spec.v))
            return mixed_norm(v, g.weights, g.weights, *m);
        const std::size_t M = g.points.size();
        std::vector<double> w(M * M), x(M * M);
        for (std::size_t j = 0; j < M; ++j)
            for (std::size_t i = 0; i < M; ++i) {
                w[i + M * j] = g.weights[i] * g.weights[j];
                x[i + M * j] = g.points[i];
            }
        require(!std::holds_alternative<VariableLpSpec>(spec.v) && !std::holds_alternative<WeightedLpSpec>(spec.v),
                "continuous_norm: variable and weighted norms are one-dimensional");
        return weighted_norm(v, w, x, spec);
    }
    if (const auto* wl = std::get_if<WeightedLpSpec>(&spec.v); wl && wl->weight.kind == WeightKind::Jacobi) {
        require(!g.domain.periodic && g.domain.span.lo >= -1.0 - 1e-12 && g.domain.span.hi <= 1.0 + 1e-12,
                "continuous_norm: Jacobi weight lives on [-1, 1]");
        if (g.gap_lo.size() == g.points.size()) {
            detail::check_finite(v);
            std::vector<double> ww(g.weights);
            for (std::size_t i = 0; i < ww.size(); ++i)
                ww[i] *= wl->weight.at_gaps(g.points[i], g.domain.span.lo, g.domain.span.hi, g.gap_lo[i], g.gap_hi[i]);
            return detail::lp_sum(v, ww, wl->p);
        }
    }
    return weighted_norm(v, g.weights, g.points, spec);
}

inline double continuous_norm(const FunctionModel& f, const NormSpec& spec) { return continuous_norm(sample(f), spec); }

/// Sharp Orlicz norm inf_k (1/k)(1 + int Phi(k f)) on the grid, with minimizer and status.
inline SharpResult orlicz_sharp_norm(const SampledFunction& f, const OrliczPhi& phi)
{
    require(f.grid && f.grid->dim == 1, "orlicz_sharp_norm: one-dimensional grid expected");
    const auto v = detail::abs_values(f.values);
    return detail::sharp_minimize(v, f.grid->weights, phi);
}

/// Discrete sharp norm inf_k (1/k)(1 + (2 pi/m) sum Phi(k f(x_j))) over m node values.
inline SharpResult discrete_orlicz_sharp_norm(std::span<const Complex> values, const OrliczPhi& phi)
{
    require(!values.empty(), "discrete_orlicz_sharp_norm: need at least one node");
    const auto v = detail::abs_values(values);
    std::vector<double> w(v.size(), kTwoPi / static_cast<double>(v.size()));
    return detail::sharp_minimize(v, w, phi);
}

// ---------------------------------------------------------------------------------------------
// step functions on cells

namespace detail {

/// Verifies that cells are pairwise disjoint up to `tol` (after reduction mod the period).
inline void check_disjoint(std::span<const Interval> cells, const Domain& domain, double tol = 1e-12)
{
    std::vector<Interval> pieces;
    for (const auto& c : cells) {
        require(c.hi > c.lo, "cells must have positive measure");
        if (!domain.periodic) {
            pieces.push_back(c);
            continue;
        }
        const double P = domain.measure();
        require(c.length() <= P + tol, "cell longer than the period");
        const double lo = domain.span.lo + wrap(c.lo - domain.span.lo, P);
        const double hi = lo + c.length();
        const double end = domain.span.hi;
        if (hi <= end + tol) {
            pieces.push_back({lo, std::min(hi, end)});
        } else {
            pieces.push_back({lo, end});
            pieces.push_back({domain.span.lo, domain.span.lo + (hi - end)});
        }
    }
    std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < pieces.size(); ++i)
        if (pieces[i].lo < pieces[i - 1].hi - tol)
            throw ValidationError("cells overlap beyond tolerance");
}

/// Expands a step function into per-cell Gauss points (needed when the norm depends on x).
inline void expand_cells(std::span<const double> v, std::span<const Interval> cells, std::vector<double>& vv,
                         std::vector<double>& ww, std::vector<double>& xx)
{
    const auto& ref = gauss_legendre(kPanelOrder);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const double half = 0.5 * cells[k].length();
        const double mid = 0.5 * (cells[k].lo + cells[k].hi);
        for (std::size_t q = 0; q < ref.nodes.size(); ++q) {
            vv.push_back(v[k]);
            ww.push_back(half * ref.weights[q]);
            xx.push_back(mid + half * ref.nodes[q]);
        }
    }
}

} // namespace detail

/// Norm of sum_k v_k chi_{cells_k} for disjoint cells, in closed form per spec.
inline double step_norm(std::span<const double> v, std::span<const Interval> cells, const NormSpec& spec)
{
    require(v.size() == cells.size(), "step_norm: values and cells differ in length");
    if (const auto* wl = std::get_if<WeightedLpSpec>(&spec.v)) {
        std::vector<double> w(cells.size());
        for (std::size_t k = 0; k < cells.size(); ++k)
            w[k] = wl->weight.integral(cells[k].lo, cells[k].hi);
        return detail::lp_sum(v, w, wl->p);
    }
    if (std::holds_alternative<VariableLpSpec>(spec.v)) {
        std::vector<double> vv, ww, xx;
        detail::expand_cells(v, cells, vv, ww, xx);
        return weighted_norm(vv, ww, xx, spec);
    }
    std::vector<double> w(cells.size()), x(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        w[k] = cells[k].length();
        x[k] = 0.5 * (cells[k].lo + cells[k].hi);
    }
    return weighted_norm(v, w, x, spec);
}

/// || sum_k |F(x_k)| chi_{Omega_k} ||_X for disjoint cells (closed form, no dense grid).
inline double discrete_mz_norm(std::span<const Complex> values, std::span<const Interval> cells, const NormSpec& spec,
                               const Domain& domain)
{
    require(values.size() == cells.size(), "discrete_mz_norm: one value per cell required");
    detail::check_disjoint(cells, domain);
    return step_norm(detail::abs_values(values), cells, spec);
}

/// Same functional for overlapping cells: sum_k |F(x_k)| chi_{Omega_k} is rebuilt on the
/// elementary partition generated by all cell endpoints.
inline double discrete_mz_norm_overlapping(std::span<const Complex> values, std::span<const Interval> cells,
                                           const NormSpec& spec)
{
    require(values.size() == cells.size(), "discrete_mz_norm: one value per cell required");
    const auto v = detail::abs_values(values);
    std::vector<double> ends;
    for (const auto& c : cells) {
        require(c.hi > c.lo, "cells must have positive measure");
        ends.push_back(c.lo);
        ends.push_back(c.hi);
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    std::vector<Interval> pieces;
    std::vector<double> pv;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const double mid = 0.5 * (ends[i] + ends[i + 1]);
        double s = 0.0;
        bool covered = false;
        for (std::size_t k = 0; k < cells.size(); ++k)
            if (cells[k].lo <= mid && mid < cells[k].hi) {
                s += v[k];
                covered = true;
            }
        if (covered) {
            pieces.push_back({ends[i], ends[i + 1]});
            pv.push_back(s);
        }
    }
    return step_norm(pv, pieces, spec);
}

/// ||chi_{(0, len)}||_X on a domain of the given measure.
inline double indicator_norm(const NormSpec& spec, double len, const Domain& domain)
{
    require(len > 0.0 && len <= domain.measure() + 1e-12, "indicator_norm: length out of range");
    std::vector<Interval> cells{{domain.span.lo, domain.span.lo + len}};
    std::vector<double> v{1.0};
    if (len < domain.measure() - 1e-15) {
        cells.push_back({domain.span.lo + len, domain.span.hi});
        v.push_back(0.0);
    }
    return step_norm(v, cells, spec);
}

// ---------------------------------------------------------------------------------------------
// sup norm

struct SupResult {
    double value = 0.0;
    double at = 0.0;
};

/// max |f| via a dense scan (endpoints included on intervals) and golden polish of the best
/// local maxima.
template <class Fn>
SupResult sup_abs(Fn&& fn, const Domain& domain, std::size_t M, int polish = 8)
{
    const double lo = domain.span.lo;
    const double len = domain.measure();
    const std::size_t count = domain.periodic ? M : M + 1;
    const double h = len / static_cast<double>(M);
    std::vector<double> vals(count);
    for (std::size_t j = 0; j < count; ++j)
        vals[j] = std::abs(fn(j == M ? domain.span.hi : lo + h * static_cast<double>(j)));
    detail::check_finite(vals);
    std::vector<std::size_t> peaks;
    for (std::size_t j = 0; j < count; ++j) {
        const double left = j > 0 ? vals[j - 1] : (domain.periodic ? vals[count - 1] : -1.0);
        const double right = j + 1 < count ? vals[j + 1] : (domain.periodic ? vals[0] : -1.0);
        if (vals[j] >= left && vals[j] >= right)
            peaks.push_back(j);
    }
    std::sort(peaks.begin(), peaks.end(), [&](auto a, auto b) { return vals[a] > vals[b]; });
    SupResult best;
    for (std::size_t j = 0; j < count; ++j)
        if (vals[j] > best.value)
            best = {vals[j], j == M ? domain.span.hi : lo + h * static_cast<double>(j)};
    for (std::size_t t = 0; t < peaks.size() && static_cast<int>(t) < polish; ++t) {
        const double x = lo + h * static_cast<double>(peaks[t]);
        double a = x - h, b = x + h;
        if (!domain.periodic) {
            a = std::max(a, domain.span.lo);
            b = std::min(b, domain.span.hi);
        }
        auto r = detail::golden_maximize([&](double y) { return std::abs(fn(y)); }, a, b, 1e-14 * std::max(1.0, len));
        if (r.value > best.value)
            best = {r.value, r.x};
    }
    return best;
}

inline SupResult sup_norm(const FunctionModel& f)
{
    require(f.dim() == 1, "sup_norm: one-dimensional models only");
    const std::size_t M = default_grid_size(std::max(1, f.degree()));
    return sup_abs([&](double x) { return evaluate(f, x); }, f.domain(), M);
}

/// ||f||_X for a model, with the sup norm taken through the polished scan.
inline double model_norm(const FunctionModel& f, const NormSpec& spec)
{
    if (spec.is_sup() && f.dim() == 1)
        return sup_norm(f).value;
    return continuous_norm(sample(f), spec);
}

} // namespace mzlab
