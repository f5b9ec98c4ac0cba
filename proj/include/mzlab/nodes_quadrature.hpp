#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "mzlab/core.hpp"
#include "mzlab/detail/gauss.hpp"
#include "mzlab/detail/numerics.hpp"
#include "mzlab/detail/rng.hpp"
#include "mzlab/function_models.hpp"
#include "mzlab/norm_engine.hpp"

namespace mzlab {

/// Sample points x_k with cells Omega_k. For dim 2 the system is the tensor product of the
/// 1-D axis data; node (i, j) has flat index i + N j.
struct NodeSystem {
    Domain domain = Domain::torus();
    int dim = 1;
    std::vector<double> nodes;
    std::vector<Interval> cells;
    std::vector<Interval> reference_cells; // optional Omega_k*
    std::vector<double> weights;           // quadrature weights when the system carries a rule
    int multiplicity = 1;                  // c_d
    bool overlapping = false;
    bool external_nodes = false;

    [[nodiscard]] std::size_t axis_size() const { return nodes.size(); }
    [[nodiscard]] std::size_t size() const { return dim == 1 ? nodes.size() : nodes.size() * nodes.size(); }
};

struct MeshGauges {
    double delta = 0.0;      // min adjacent gap
    double lambda_gap = 0.0; // max adjacent gap
};

/// Nodes lo + L(k + offset)/count with uniform half-open cells [lo + Lk/count, lo + L(k+1)/count).
inline NodeSystem equispaced_nodes(std::size_t count, Domain domain = Domain::torus(), int dim = 1,
                                   double offset = 0.0)
{
    require(count >= 1, "equispaced_nodes: need at least one node");
    require(dim == 1 || dim == 2, "equispaced_nodes: dimension must be 1 or 2");
    require(offset >= 0.0 && offset < 1.0, "equispaced_nodes: offset must lie in [0, 1)");
    NodeSystem s;
    s.domain = domain;
    s.dim = dim;
    const double h = domain.measure() / static_cast<double>(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double lo = domain.span.lo + h * static_cast<double>(k);
        const double hi = k + 1 == count ? domain.span.hi : domain.span.lo + h * static_cast<double>(k + 1);
        s.nodes.push_back(lo + offset * h);
        s.cells.push_back({lo, hi});
        s.weights.push_back(hi - lo);
    }
    s.reference_cells = s.cells;
    return s;
}

/// The 2n+1 nodes 2 pi k/(2n+1).
inline NodeSystem minimal_trig_nodes(int n, int dim = 1)
{
    require(n >= 0, "minimal_trig_nodes: n must be non-negative");
    return equispaced_nodes(static_cast<std::size_t>(2 * n + 1), Domain::torus(), dim);
}

/// Periodic system from arbitrary distinct points: cells run between consecutive midpoints
/// (wrapping across the period).
inline NodeSystem nodes_from_points(std::vector<double> pts, Domain domain = Domain::torus())
{
    require(!pts.empty(), "nodes_from_points: need at least one point");
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 1; i < pts.size(); ++i)
        require(pts[i] > pts[i - 1], "nodes_from_points: duplicate nodes");
    NodeSystem s;
    s.domain = domain;
    s.nodes = pts;
    const std::size_t m = pts.size();
    const double P = domain.measure();
    for (std::size_t k = 0; k < m; ++k) {
        double lo, hi;
        if (domain.periodic) {
            const double prev = k == 0 ? pts[m - 1] - P : pts[k - 1];
            const double next = k + 1 == m ? pts[0] + P : pts[k + 1];
            lo = 0.5 * (prev + pts[k]);
            hi = 0.5 * (pts[k] + next);
            if (m == 1) {
                lo = pts[0] - 0.5 * P;
                hi = pts[0] + 0.5 * P;
            }
        } else {
            lo = k == 0 ? domain.span.lo : 0.5 * (pts[k - 1] + pts[k]);
            hi = k + 1 == m ? domain.span.hi : 0.5 * (pts[k] + pts[k + 1]);
        }
        s.cells.push_back({lo, hi});
        s.weights.push_back(hi - lo);
    }
    return s;
}

/// y_j uniform in [2 pi (j - sigma)/(2n+1), 2 pi (j + sigma)/(2n+1)), j = 0..2n; midpoint cells.
inline NodeSystem perturbed_nodes(int n, double sigma, std::uint64_t seed)
{
    require(n >= 0, "perturbed_nodes: n must be non-negative");
    require(sigma > 0.0 && sigma < 0.25, "perturbed_nodes: sigma must lie in (0, 1/4)");
    CounterRng rng(seed);
    const int N = 2 * n + 1;
    std::vector<double> pts;
    for (int j = 0; j < N; ++j)
        pts.push_back(kTwoPi * (j + sigma * (2.0 * rng.uniform() - 1.0)) / N);
    return nodes_from_points(std::move(pts));
}

/// m distinct uniform random points on the period (sorted), midpoint cells.
inline NodeSystem random_nodes(std::size_t m, std::uint64_t seed)
{
    require(m >= 1, "random_nodes: need at least one node");
    CounterRng rng(seed);
    std::vector<double> pts;
    while (pts.size() < m) {
        const double x = kTwoPi * rng.uniform();
        if (std::find(pts.begin(), pts.end(), x) == pts.end())
            pts.push_back(x);
    }
    return nodes_from_points(std::move(pts));
}

inline MeshGauges mesh_gauges(std::vector<double> nodes, bool periodic, double period = kTwoPi)
{
    require(nodes.size() >= 2, "mesh_gauges: need at least two nodes");
    std::sort(nodes.begin(), nodes.end());
    MeshGauges g{kInf, 0.0};
    auto take = [&](double gap) {
        require(gap > 0.0, "mesh_gauges: duplicate nodes");
        g.delta = std::min(g.delta, gap);
        g.lambda_gap = std::max(g.lambda_gap, gap);
    };
    for (std::size_t i = 1; i < nodes.size(); ++i)
        take(nodes[i] - nodes[i - 1]);
    if (periodic)
        take(period + nodes.front() - nodes.back());
    return g;
}

// ---------------------------------------------------------------------------------------------
// Gauss-Jacobi

struct GaussRule {
    double alpha = 0.0;
    double beta = 0.0;
    double mass = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Total mass of (1-x)^alpha (1+x)^beta on [-1, 1] by graded dense quadrature (Legendre: exactly 2).
inline double jacobi_mass(double alpha, double beta)
{
    if (alpha == 0.0 && beta == 0.0)
        return 2.0;
    const auto w = WeightSpec::jacobi(alpha, beta);
    return w.integral(-1.0, 0.0) + w.integral(0.0, 1.0);
}

/// n-point Gauss-Jacobi rule: nodes are the eigenvalues of the Jacobi matrix, Christoffel weights
/// mass * (first eigenvector component)^2.
inline GaussRule gauss_jacobi(int n, double alpha, double beta)
{
    require(n >= 1, "gauss_jacobi: n must be at least 1");
    require(alpha > -1.0 && beta > -1.0, "gauss_jacobi: alpha, beta must exceed -1");
    GaussRule g;
    g.alpha = alpha;
    g.beta = beta;
    g.mass = jacobi_mass(alpha, beta);
    auto raw = detail::golub_welsch(detail::jacobi_recurrence(n, alpha, beta), g.mass);
    g.nodes = std::move(raw.nodes);
    g.weights = std::move(raw.weights);
    return g;
}

/// Orthonormal Jacobi polynomials psi_0..psi_degree at x (unit norm against the weight).
inline std::vector<double> orthonormal_jacobi(int degree, double alpha, double beta, double x, double mass)
{
    require(degree >= 0, "orthonormal_jacobi: degree must be non-negative");
    const auto rec = detail::jacobi_recurrence(degree + 1, alpha, beta);
    std::vector<double> psi(static_cast<std::size_t>(degree) + 1);
    psi[0] = 1.0 / std::sqrt(mass);
    if (degree >= 1)
        psi[1] = (x - rec.a[0]) * psi[0] / std::sqrt(rec.b[1]);
    for (int k = 1; k < degree; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        psi[ku + 1] = ((x - rec.a[ku]) * psi[ku] - std::sqrt(rec.b[ku]) * psi[ku - 1]) / std::sqrt(rec.b[ku + 1]);
    }
    return psi;
}

struct CmsCells {
    NodeSystem system;
    std::vector<double> ratios; // mu_k / int_{Omega_k} w
    double max_ratio = 0.0;
    bool valid = false; // max_ratio <= 1 + 1e-10
};

/// Overlapping cells Omega_k = (x_{k-1}, x_{k+1}) with x_0 = -1, x_{n+1} = 1, multiplicity 2,
/// and the separation check mu_k <= int_{Omega_k} w.
inline CmsCells cms_cells(const GaussRule& rule, const WeightSpec& weight)
{
    require(weight.kind == WeightKind::Jacobi || (weight.kind == WeightKind::Const && rule.alpha == 0.0 && rule.beta == 0.0),
            "cms_cells: weight must be a Jacobi weight");
    const double wa = weight.kind == WeightKind::Const ? 0.0 : weight.alpha;
    const double wb = weight.kind == WeightKind::Const ? 0.0 : weight.beta;
    require(wa == rule.alpha && wb == rule.beta, "cms_cells: nodes were built for a different weight");
    CmsCells out;
    auto& s = out.system;
    s.domain = Domain::interval(-1.0, 1.0);
    s.nodes = rule.nodes;
    s.weights = rule.weights;
    s.multiplicity = 2;
    s.overlapping = true;
    const std::size_t n = rule.nodes.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double lo = k == 0 ? -1.0 : rule.nodes[k - 1];
        const double hi = k + 1 == n ? 1.0 : rule.nodes[k + 1];
        s.cells.push_back({lo, hi});
        const double mass = weight.integral(lo, hi);
        out.ratios.push_back(rule.weights[k] / mass);
        out.max_ratio = std::max(out.max_ratio, out.ratios.back());
    }
    out.valid = out.max_ratio <= 1.0 + 1e-10;
    return out;
}

// ---------------------------------------------------------------------------------------------
// Chebyshev-like nodes

/// x_j = cos((N - j) pi / N), j = 0..N, with cells between midpoints clipped to [-1, 1].
inline NodeSystem chebyshev_like_nodes(int N)
{
    require(N >= 2, "chebyshev_like_nodes: N must be at least 2");
    std::vector<double> pts;
    for (int j = 0; j <= N; ++j)
        pts.push_back(std::cos((N - j) * kPi / N));
    pts.front() = -1.0;
    pts.back() = 1.0;
    if (N % 2 == 0)
        pts[static_cast<std::size_t>(N) / 2] = 0.0;
    return nodes_from_points(std::move(pts), Domain::interval(-1.0, 1.0));
}

/// phi_n(x) = sqrt(1 - x^2) + 1/n.
inline double phi_n(double x, double n) { return std::sqrt(std::max(0.0, 1.0 - x * x)) + 1.0 / n; }

/// a_j = int_{t_j - 1/N}^{t_j + 1/N} |sin t| dt with t_j = (N - j) pi / N.
inline std::vector<double> chebyshev_like_aj(int N)
{
    const auto w = WeightSpec::sin_power(1.0);
    std::vector<double> a;
    for (int j = 0; j <= N; ++j) {
        const double t = (N - j) * kPi / N;
        a.push_back(w.integral(t - 1.0 / N, t + 1.0 / N));
    }
    return a;
}

// ---------------------------------------------------------------------------------------------
// covering, evaluation, discrete norms, CSV

struct Multiplicity {
    int min = 0;
    int max = 0;
};

/// Counts sum_k chi_{Omega_k} at `probes` interior points (half-open cells; periodic reduction).
inline Multiplicity covering_multiplicity(const NodeSystem& s, std::size_t probes = 10000)
{
    const double lo = s.domain.span.lo;
    const double P = s.domain.measure();
    Multiplicity m{1 << 30, 0};
    for (std::size_t i = 0; i < probes; ++i) {
        const double x = lo + P * (static_cast<double>(i) + 0.5) / static_cast<double>(probes);
        int c = 0;
        for (const auto& cell : s.cells) {
            if (s.domain.periodic) {
                const double r = detail::wrap(x - cell.lo, P);
                if (r < cell.length())
                    ++c;
            } else if (cell.lo <= x && x < cell.hi) {
                ++c;
            }
        }
        m.min = std::min(m.min, c);
        m.max = std::max(m.max, c);
    }
    return m;
}

inline std::vector<Complex> values_at_nodes(const FunctionModel& f, const NodeSystem& s)
{
    if (s.dim == 1)
        return evaluate(f, s.nodes);
    const auto& t = std::get<TrigPoly>(f.repr);
    const std::size_t N = s.nodes.size();
    std::vector<Complex> v(N * N);
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i)
            v[i + N * j] = evaluate2(t, s.nodes[i], s.nodes[j]);
    return v;
}

/// || sum_k |v_k| chi_{Omega_k} ||_X for a node system (overlapping and tensor systems included).
inline double discrete_mz_norm(std::span<const Complex> values, const NodeSystem& s, const NormSpec& spec)
{
    require(values.size() == s.size(), "discrete_mz_norm: one value per node required");
    if (s.dim == 2) {
        const auto v = detail::abs_values(values);
        const std::size_t N = s.cells.size();
        std::vector<double> w(N);
        for (std::size_t i = 0; i < N; ++i)
            w[i] = s.cells[i].length();
        if (const auto* m = std::get_if<MixedLpSpec>(&spec.v))
            return mixed_norm(v, w, w, *m);
        require(!std::holds_alternative<VariableLpSpec>(spec.v) && !std::holds_alternative<WeightedLpSpec>(spec.v),
                "discrete_mz_norm: variable and weighted norms are one-dimensional");
        std::vector<double> ww(N * N), xx(N * N, 0.0);
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t i = 0; i < N; ++i)
                ww[i + N * j] = w[i] * w[j];
        return weighted_norm(v, ww, xx, spec);
    }
    if (s.overlapping)
        return discrete_mz_norm_overlapping(values, s.cells, spec);
    return discrete_mz_norm(values, s.cells, spec, s.domain);
}

/// CSV with columns k, x_k, cell_lo, cell_hi, weight (17 significant digits).
inline std::string to_csv(const NodeSystem& s)
{
    std::string out = "k,x_k,cell_lo,cell_hi,weight\n";
    char buf[160];
    for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        const double w = k < s.weights.size() ? s.weights[k] : s.cells[k].length();
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", k, s.nodes[k], s.cells[k].lo, s.cells[k].hi, w);
        out += buf;
    }
    return out;
}

} // namespace mzlab
