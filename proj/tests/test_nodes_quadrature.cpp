#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "mzlab/detail/rng.hpp"
#include "mzlab/nodes_quadrature.hpp"

using namespace mzlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// int_{-1}^{1} (1-x)^a (1+x)^b x^j dx: m_0 from the Beta function, then the moment recurrence
// (a + b + 2 + j) m_{j+1} = (b - a) m_j + j m_{j-1} obtained by integrating
// d/dx[(1-x)^{a+1} (1+x)^{b+1} x^j] = 0
double jacobi_moment(double a, double b, int j)
{
    double prev = 0.0;
    double cur = std::pow(2.0, a + b + 1.0) * std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
    for (int k = 0; k < j; ++k) {
        const double next = ((b - a) * cur + k * prev) / (a + b + 2.0 + k);
        prev = cur;
        cur = next;
    }
    return cur;
}

// classical P_n^{(a,b)} by the standard (non-monic) three-term recurrence
double jacobi_p(int n, double a, double b, double x)
{
    double p0 = 1.0;
    if (n == 0)
        return p0;
    double p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        const double p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<double> sign_change_roots(int n, double a, double b)
{
    std::vector<double> roots;
    const int scan = 200000;
    double xl = -1.0, fl = jacobi_p(n, a, b, xl);
    for (int i = 1; i <= scan; ++i) {
        const double xr = -1.0 + 2.0 * i / scan;
        const double fr = jacobi_p(n, a, b, xr);
        if (fl == 0.0) {
            roots.push_back(xl);
        } else if (fl * fr < 0.0) {
            double lo = xl, hi = xr;
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = jacobi_p(n, a, b, mid);
                if ((fm < 0.0) == (fl < 0.0))
                    lo = mid;
                else
                    hi = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        xl = xr;
        fl = fr;
    }
    return roots;
}

void check_covering(const NodeSystem& s)
{
    const auto m = covering_multiplicity(s);
    CHECK(m.min >= 1);
    CHECK(m.max <= s.multiplicity);
    for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        if (s.external_nodes)
            continue;
        CHECK(s.nodes[k] >= s.cells[k].lo - 1e-15);
        CHECK(s.nodes[k] <= s.cells[k].hi + 1e-15);
    }
}

} // namespace

TEST_CASE("equispaced and minimal trig systems", "[nodes_quadrature]")
{
    const auto s = minimal_trig_nodes(1);
    REQUIRE(s.size() == 3);
    CHECK(s.nodes[0] == 0.0);
    CHECK_THAT(s.nodes[1], WithinRel(kTwoPi / 3.0, 1e-15));
    CHECK_THAT(s.nodes[2], WithinRel(2.0 * kTwoPi / 3.0, 1e-15));
    for (const auto& c : s.cells)
        CHECK_THAT(c.length(), WithinRel(kTwoPi / 3.0, 1e-14));
    check_covering(s);

    const auto four = equispaced_nodes(4);
    const auto g = mesh_gauges(four.nodes, true);
    CHECK_THAT(g.delta, WithinRel(kPi / 2.0, 1e-14));
    CHECK_THAT(g.lambda_gap, WithinRel(kPi / 2.0, 1e-14));

    const auto t = equispaced_nodes(3, Domain::torus(), 2);
    CHECK(t.size() == 9);
    const std::vector<Complex> ones(9, Complex(1.0));
    // nine disjoint boxes of area (2 pi/3)^2 cover the square exactly once
    CHECK_THAT(discrete_mz_norm(ones, t, NormSpec::lp(1.0)), WithinRel(kTwoPi * kTwoPi, 1e-13));
    check_covering(t);

    const auto shifted = equispaced_nodes(5, Domain::torus(), 1, 0.5);
    for (std::size_t k = 0; k < 5; ++k)
        CHECK_THAT(shifted.nodes[k], WithinRel(0.5 * (shifted.cells[k].lo + shifted.cells[k].hi), 1e-14));
    CHECK_THROWS_AS(equispaced_nodes(0), ValidationError);
    CHECK_THROWS_AS(equispaced_nodes(4, Domain::torus(), 1, 1.0), ValidationError);
}

TEST_CASE("mesh gauges", "[nodes_quadrature]")
{
    auto g = mesh_gauges({0.0, kPi / 2, kPi, 3 * kPi / 2}, true);
    CHECK_THAT(g.delta, WithinRel(kPi / 2, 1e-15));
    CHECK_THAT(g.lambda_gap, WithinRel(kPi / 2, 1e-15));
    g = mesh_gauges({0.0, 1.0, 3.0}, true);
    CHECK(g.delta == 1.0);
    CHECK_THAT(g.lambda_gap, WithinRel(kTwoPi - 3.0, 1e-15));
    for (std::size_t N : {5u, 17u, 64u}) {
        const auto e = equispaced_nodes(N);
        const auto h = mesh_gauges(e.nodes, true);
        CHECK_THAT(h.delta, WithinRel(kTwoPi / N, 1e-12));
        CHECK_THAT(h.lambda_gap, WithinRel(kTwoPi / N, 1e-12));
    }
    CHECK_THROWS_AS(mesh_gauges({0.0, 1.0, 1.0}, true), ValidationError);
    CHECK_THROWS_AS(mesh_gauges({0.0}, true), ValidationError);
}

TEST_CASE("perturbed nodes", "[nodes_quadrature]")
{
    const int n = 8;
    const double sigma = 0.2;
    const auto s = perturbed_nodes(n, sigma, 3);
    const auto g = mesh_gauges(s.nodes, true);
    CHECK(g.delta >= kTwoPi * (1.0 - 2.0 * sigma) / (2 * n + 1) - 1e-14);
    CHECK(g.delta >= kPi / (2 * n + 1));
    CHECK(g.delta <= g.lambda_gap);
    check_covering(s);

    const auto again = perturbed_nodes(n, sigma, 3);
    CHECK(again.nodes == s.nodes);
    CHECK(perturbed_nodes(n, sigma, 4).nodes != s.nodes);

    const auto tiny = perturbed_nodes(n, 1e-12, 9);
    const auto eq = minimal_trig_nodes(n);
    for (std::size_t k = 0; k < eq.nodes.size(); ++k)
        CHECK_THAT(tiny.nodes[k], WithinAbs(eq.nodes[k], 1e-11));

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto p = perturbed_nodes(5, 0.249, seed);
        CHECK(mesh_gauges(p.nodes, true).delta >= kPi / 11.0);
    }
    CHECK_THROWS_AS(perturbed_nodes(n, 0.25, 1), ValidationError);
    CHECK_THROWS_AS(perturbed_nodes(n, 0.0, 1), ValidationError);
}

TEST_CASE("random nodes cover the circle", "[nodes_quadrature]")
{
    const auto s = random_nodes(40, 11);
    CHECK(s.size() == 40);
    check_covering(s);
    CHECK(std::is_sorted(s.nodes.begin(), s.nodes.end()));
}

TEST_CASE("gauss-jacobi closed forms", "[nodes_quadrature]")
{
    const auto c = gauss_jacobi(3, -0.5, -0.5);
    REQUIRE(c.nodes.size() == 3);
    CHECK_THAT(c.nodes[0], WithinAbs(-std::sqrt(3.0) / 2.0, 1e-14));
    CHECK_THAT(c.nodes[1], WithinAbs(0.0, 1e-14));
    CHECK_THAT(c.nodes[2], WithinAbs(std::sqrt(3.0) / 2.0, 1e-14));
    for (double w : c.weights)
        CHECK_THAT(w, WithinRel(kPi / 3.0, 1e-10));

    const auto l = gauss_jacobi(2, 0.0, 0.0);
    CHECK_THAT(l.nodes[0], WithinRel(-1.0 / std::sqrt(3.0), 1e-14));
    CHECK_THAT(l.nodes[1], WithinRel(1.0 / std::sqrt(3.0), 1e-14));
    CHECK_THAT(l.weights[0], WithinRel(1.0, 1e-14));
    CHECK_THAT(l.weights[1], WithinRel(1.0, 1e-14));

    const auto l3 = gauss_jacobi(3, 0.0, 0.0);
    double s = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
        s += l3.weights[k] * std::pow(l3.nodes[k], 4);
    CHECK_THAT(s, WithinAbs(0.4, 1e-12));

    CHECK_THROWS_AS(gauss_jacobi(0, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(gauss_jacobi(3, -1.0, 0.0), ValidationError);
}

TEST_CASE("gauss-jacobi mass, positivity and exactness", "[nodes_quadrature]")
{
    const std::vector<std::pair<double, double>> params{{0, 0}, {-0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.0},
                                                        {1.5, -0.3}, {2.0, 3.0}, {-0.7, 0.4}};
    for (auto [a, b] : params) {
        const double mass = jacobi_moment(a, b, 0);
        CHECK_THAT(jacobi_mass(a, b), WithinRel(mass, 1e-10));
        for (int n : {1, 2, 5, 12, 30}) {
            const auto g = gauss_jacobi(n, a, b);
            double total = 0.0;
            for (double w : g.weights) {
                CHECK(w > 0.0);
                total += w;
            }
            CHECK_THAT(total, WithinRel(mass, 1e-10));
            // monomials up to degree 2n - 1 against Beta-function moments
            for (int j = 0; j <= std::min(2 * n - 1, 20); ++j) {
                double q = 0.0;
                for (std::size_t k = 0; k < g.nodes.size(); ++k)
                    q += g.weights[k] * std::pow(g.nodes[k], j);
                CHECK_THAT(q, WithinAbs(jacobi_moment(a, b, j), 1e-10 * mass));
            }
        }
    }
}

TEST_CASE("gauss quadrature reproduces products of degree n-1 polynomials", "[nodes_quadrature]")
{
    CounterRng rng(21);
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0, 0}, {-0.5, -0.5}, {1.0, 0.5}}) {
        for (int n : {3, 8, 16}) {
            const auto g = gauss_jacobi(n, a, b);
            std::vector<double> p(static_cast<std::size_t>(n)), q(p.size());
            for (auto& c : p)
                c = rng.normal();
            for (auto& c : q)
                c = rng.normal();
            // exact integral from monomial moments
            double exact = 0.0, scale = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double t = p[i] * q[j] * jacobi_moment(a, b, i + j);
                    exact += t;
                    scale += std::abs(t);
                }
            double sum = 0.0;
            for (std::size_t k = 0; k < g.nodes.size(); ++k) {
                double pv = 0.0, qv = 0.0;
                for (int i = n - 1; i >= 0; --i) {
                    pv = pv * g.nodes[k] + p[i];
                    qv = qv * g.nodes[k] + q[i];
                }
                sum += g.weights[k] * pv * qv;
            }
            CHECK_THAT(sum, WithinAbs(exact, 1e-9 * scale));
        }
    }
}

TEST_CASE("gauss nodes agree with sign-change roots", "[nodes_quadrature]")
{
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0, 0}, {-0.5, -0.5}, {1.5, -0.3}, {2.0, 0.0}}) {
        for (int n : {1, 4, 9, 20}) {
            const auto g = gauss_jacobi(n, a, b);
            const auto r = sign_change_roots(n, a, b);
            REQUIRE(r.size() == static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k)
                CHECK_THAT(g.nodes[k], WithinAbs(r[k], 1e-10));
        }
    }
}

TEST_CASE("orthonormal jacobi basis is orthonormal under the rule", "[nodes_quadrature]")
{
    const double a = 0.5, b = -0.5;
    const int n = 10;
    const auto g = gauss_jacobi(n, a, b);
    std::vector<std::vector<double>> psi;
    for (double x : g.nodes)
        psi.push_back(orthonormal_jacobi(n - 1, a, b, x, g.mass));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < g.nodes.size(); ++k)
                s += g.weights[k] * psi[k][i] * psi[k][j];
            CHECK_THAT(s, WithinAbs(i == j ? 1.0 : 0.0, 1e-11));
        }
}

TEST_CASE("chebyshev-markov-stieltjes cells", "[nodes_quadrature]")
{
    const auto rule = gauss_jacobi(3, -0.5, -0.5);
    const auto c = cms_cells(rule, WeightSpec::jacobi(-0.5, -0.5));
    CHECK(c.valid);
    CHECK(c.system.multiplicity == 2);
    // arcsine antiderivative oracle
    const auto& cells = c.system.cells;
    for (std::size_t k = 0; k < 3; ++k) {
        const double w = std::asin(cells[k].hi) - std::asin(cells[k].lo);
        CHECK_THAT(c.ratios[k], WithinRel(rule.weights[k] / w, 1e-9));
    }
    CHECK_THAT(c.ratios[1], WithinRel(0.5, 1e-9));
    check_covering(c.system);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(cells[k].lo < rule.nodes[k]);
        CHECK(rule.nodes[k] < cells[k].hi);
        // each open cell holds only its own node; consecutive cells share (x_k, x_{k+1})
        for (std::size_t j = 0; j < 3; ++j) {
            const bool inside = cells[j].lo < rule.nodes[k] && rule.nodes[k] < cells[j].hi;
            CHECK(inside == (j == k));
        }
        if (k + 1 < 3) {
            CHECK(cells[k + 1].lo == rule.nodes[k]);
            CHECK(cells[k].hi == rule.nodes[k + 1]);
        }
    }

    const auto leg = gauss_jacobi(4, 0.0, 0.0);
    const auto lc = cms_cells(leg, WeightSpec::constant());
    REQUIRE(lc.ratios.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(lc.ratios[k] <= 1.0);
        CHECK_THAT(lc.ratios[k], WithinRel(leg.weights[k] / lc.system.cells[k].length(), 1e-12));
    }
    for (auto [a, b] : std::vector<std::pair<double, double>>{{1.5, -0.3}, {-0.5, 0.0}, {2.0, 2.0}})
        for (int n : {2, 7, 25})
            CHECK(cms_cells(gauss_jacobi(n, a, b), WeightSpec::jacobi(a, b)).valid);

    CHECK_THROWS_AS(cms_cells(rule, WeightSpec::jacobi(0.0, 0.0)), ValidationError);
    CHECK_THROWS_AS(cms_cells(rule, WeightSpec::sin_power(1.0)), ValidationError);
}

TEST_CASE("chebyshev-like nodes", "[nodes_quadrature]")
{
    const auto two = chebyshev_like_nodes(2);
    REQUIRE(two.nodes.size() == 3);
    CHECK(two.nodes[0] == -1.0);
    CHECK(two.nodes[1] == 0.0);
    CHECK(two.nodes[2] == 1.0);

    for (int N : {2, 5, 16, 101}) {
        const auto s = chebyshev_like_nodes(N);
        check_covering(s);
        for (std::size_t k = 0; k + 1 < s.nodes.size(); ++k) {
            const double gap = s.nodes[k + 1] - s.nodes[k];
            CHECK(gap > 0.0);
            CHECK(gap <= kPi / N * (phi_n(s.nodes[k], N) + phi_n(s.nodes[k + 1], N)));
        }
        const auto a = chebyshev_like_aj(N);
        for (int j = 0; j <= N; ++j) {
            const double model = 1.0 / (double(N) * N) + std::sin(j * kPi / N) / N;
            CHECK(a[j] <= 4.0 * model);
            CHECK(a[j] >= model / 4.0);
            const double t = (N - j) * kPi / N;
            // antiderivative of sin where the window stays inside [0, pi]
            if (t - 1.0 / N >= 0.0 && t + 1.0 / N <= kPi)
                CHECK_THAT(a[j], WithinRel(std::cos(t - 1.0 / N) - std::cos(t + 1.0 / N), 1e-11));
        }
    }
    CHECK_THROWS_AS(chebyshev_like_nodes(1), ValidationError);
}

TEST_CASE("node csv", "[nodes_quadrature]")
{
    const auto s = minimal_trig_nodes(1);
    const auto csv = to_csv(s);
    CHECK(csv.rfind("k,x_k,cell_lo,cell_hi,weight\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.find("\n0,0,0,2.0943951023931953,2.0943951023931953\n") != std::string::npos);
}

