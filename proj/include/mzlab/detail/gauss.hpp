#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "mzlab/core.hpp"

namespace mzlab::detail {

/// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL, together with the
/// first component of each normalized eigenvector. `diag` has n entries, `off[i]` couples
/// rows i and i+1 (n-1 entries). On return `diag` holds eigenvalues (unsorted).
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double> off, std::vector<double>& first_row)
{
    const int n = static_cast<int>(diag.size());
    off.resize(static_cast<std::size_t>(n), 0.0);
    first_row.assign(static_cast<std::size_t>(n), 0.0);
    if (n == 0)
        return;
    first_row[0] = 1.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= eps * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 100)
                    throw NumericalError("tridiagonal QL iteration did not converge");
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * off[i];
                    const double b = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        off[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    f = first_row[i + 1];
                    first_row[i + 1] = s * first_row[i] + c * f;
                    first_row[i] = c * first_row[i] - s * f;
                }
                if (r == 0.0 && i >= l)
                    continue;
                diag[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }
}

/// Three-term recurrence of the monic Jacobi polynomials for (1-x)^alpha (1+x)^beta:
/// p_{k+1} = (x - a_k) p_k - b_k p_{k-1}.
struct JacobiRecurrence {
    std::vector<double> a; // a_0 .. a_{n-1}
    std::vector<double> b; // b_0 unused (0), b_1 .. b_{n-1}
};

inline JacobiRecurrence jacobi_recurrence(int n, double alpha, double beta)
{
    JacobiRecurrence rec;
    rec.a.resize(static_cast<std::size_t>(n));
    rec.b.assign(static_cast<std::size_t>(n), 0.0);
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        if (k == 0)
            rec.a[0] = (beta - alpha) / (ab + 2.0);
        else
            rec.a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        if (k == 1)
            rec.b[1] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            rec.b[k] = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    return rec;
}

struct RawGaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights mass * (first component)^2.
inline RawGaussRule golub_welsch(const JacobiRecurrence& rec, double mass)
{
    const std::size_t n = rec.a.size();
    std::vector<double> diag = rec.a;
    std::vector<double> off(n > 0 ? n - 1 : 0);
    for (std::size_t k = 1; k < n; ++k)
        off[k - 1] = std::sqrt(rec.b[k]);
    std::vector<double> first;
    tridiagonal_ql(diag, off, first);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return diag[i] < diag[j]; });
    RawGaussRule rule;
    for (auto i : order) {
        rule.nodes.push_back(diag[i]);
        rule.weights.push_back(mass * first[i] * first[i]);
    }
    return rule;
}

/// k-point Gauss-Legendre rule on [-1, 1]; cached per k.
inline const RawGaussRule& gauss_legendre(int k)
{
    static thread_local std::vector<RawGaussRule> cache;
    if (cache.size() <= static_cast<std::size_t>(k))
        cache.resize(static_cast<std::size_t>(k) + 1);
    auto& rule = cache[static_cast<std::size_t>(k)];
    if (rule.nodes.empty())
        rule = golub_welsch(jacobi_recurrence(k, 0.0, 0.0), 2.0);
    return rule;
}

inline constexpr int kPanelOrder = 16;
inline constexpr double kGradingRatio = 0.15;

/// Geometric grading depth for an endpoint behaving like t^a: enough levels that the
/// innermost untreated panel carries a relative share below 1e-16.
inline int grading_levels(double a)
{
    const double decay = (1.0 + std::min(a, 0.0)) * -std::log(kGradingRatio);
    return std::clamp(static_cast<int>(std::ceil(-std::log(1e-16) / decay)), 20, 600);
}

struct CompositeRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> gap_lo; // x - lo, computed without cancellation
    std::vector<double> gap_hi; // hi - x, computed without cancellation
};

/// Composite Gauss-Legendre rule on [lo, hi] with `panels` uniform panels. An end with a grading
/// exponent a (behaviour t^a, a > -1) has its outer panel replaced by geometrically shrinking
/// panels. Panels near an end are laid out in distance-to-endpoint coordinates so that nodes
/// extremely close to the endpoint keep their exact distance in gap_lo / gap_hi.
inline CompositeRule composite_rule(double lo, double hi, int panels, std::optional<double> grade_lo,
                                    std::optional<double> grade_hi, int order = kPanelOrder)
{
    require(hi > lo && panels >= 1, "composite_rule: need hi > lo and at least one panel");
    const double L = hi - lo;
    if (panels == 1 && grade_lo && grade_hi)
        panels = 2;
    const double h = L / panels;
    struct Panel {
        double a, b;   // offsets from the anchor
        bool from_hi;  // anchor is hi (offsets measured leftwards)
    };
    std::vector<Panel> list;
    const int first = grade_lo ? 1 : 0;
    const int last = grade_hi ? panels - 1 : panels;
    if (grade_lo) {
        const int levels = grading_levels(*grade_lo);
        double inner = 0.0;
        for (int j = levels; j >= 1; --j) {
            const double outer = h * std::pow(kGradingRatio, j);
            list.push_back({inner, outer, false});
            inner = outer;
        }
        list.push_back({inner, h, false});
    }
    for (int p = first; p < last; ++p) {
        // interior panels: anchor to the nearer end
        const double a = h * p, b = h * (p + 1);
        if (a + b <= L)
            list.push_back({a, b, false});
        else
            list.push_back({L - b, L - a, true});
    }
    if (grade_hi) {
        const int levels = grading_levels(*grade_hi);
        double inner = 0.0;
        for (int j = levels; j >= 1; --j) {
            const double outer = h * std::pow(kGradingRatio, j);
            list.push_back({inner, outer, true});
            inner = outer;
        }
        list.push_back({inner, h, true});
    }

    const auto& ref = gauss_legendre(order);
    CompositeRule out;
    std::vector<std::size_t> idx;
    for (const auto& pn : list) {
        const double half = 0.5 * (pn.b - pn.a);
        const double mid = 0.5 * (pn.a + pn.b);
        for (std::size_t q = 0; q < ref.nodes.size(); ++q) {
            const double off = mid + half * ref.nodes[q];
            const double glo = pn.from_hi ? L - off : off;
            const double ghi = pn.from_hi ? off : L - off;
            out.gap_lo.push_back(glo);
            out.gap_hi.push_back(ghi);
            out.nodes.push_back(pn.from_hi ? hi - off : lo + off);
            out.weights.push_back(half * ref.weights[q]);
        }
    }
    // sort by position (panels anchored at hi were emitted right to left within a panel)
    std::vector<std::size_t> order_idx(out.nodes.size());
    std::iota(order_idx.begin(), order_idx.end(), 0);
    std::sort(order_idx.begin(), order_idx.end(), [&](auto i, auto j) {
        return out.gap_lo[i] < out.gap_lo[j] || (out.gap_lo[i] == out.gap_lo[j] && out.gap_hi[i] > out.gap_hi[j]);
    });
    CompositeRule sorted;
    for (auto i : order_idx) {
        sorted.nodes.push_back(out.nodes[i]);
        sorted.weights.push_back(out.weights[i]);
        sorted.gap_lo.push_back(out.gap_lo[i]);
        sorted.gap_hi.push_back(out.gap_hi[i]);
    }
    return sorted;
}

} // namespace mzlab::detail
