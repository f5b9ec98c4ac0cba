#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mzlab/approx_smoothness.hpp"
#include "mzlab/detail/rng.hpp"
#include "mzlab/detail/simplex.hpp"
#include "test_support.hpp"

using namespace mzlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RealFn as_fn(const TrigPoly& t)
{
    return [t](double x) { return evaluate(t, x).real(); };
}

// aliasing formula for ||f - L_n f||_2 from exact coefficients
double lagrange_l2_oracle(const TargetFunction& f, int n, int K = 400000)
{
    const int N = 2 * n + 1;
    double s = 0.0;
    for (int k = -n; k <= n; ++k) {
        Complex alias{};
        for (int m = 1; std::abs(k) + m * N <= K; ++m)
            alias += f.coeff(k + m * N) + f.coeff(k - m * N);
        s += std::norm(alias);
    }
    for (int k = n + 1; k <= K; ++k)
        s += 2.0 * std::norm(f.coeff(k));
    return std::sqrt(kTwoPi * s);
}

} // namespace

TEST_CASE("target catalog coefficients", "[approx_smoothness]")
{
    const auto grid = periodic_grid(1 << 14);
    for (const char* id : {"abs_cos", "power_cusp:0.5", "power_cusp:1.5", "lacunary:5", "smooth_test"}) {
        const auto t = make_target(id);
        const auto dft = partial_sum(sample_fn([&](double x) { return Complex(t(x)); }, grid), 12);
        for (int k = 0; k <= 12; ++k)
            CHECK(std::abs(dft.coeff(k) - t.coeff(k)) <= 2e-6);
    }
    // |sin x| has the same coefficients as |cos x| up to sign at odd halves
    const auto cusp1 = target_power_cusp(1.0);
    for (int k = 0; k <= 20; k += 2)
        CHECK_THAT(std::abs(cusp1.coeff(k)), WithinAbs(std::abs(target_abs_cos().coeff(k)), 1e-14));
    CHECK_THROWS_AS(make_target("lacunary"), ValidationError);
    CHECK_THROWS_AS(make_target("power_cusp:3"), ValidationError);
    CHECK_THROWS_AS(make_target("sawtooth"), ValidationError);

    // exact L2 tails against the closed-form decay bound
    const auto ac = target_abs_cos();
    const auto e = ac.l2_best_errors(64);
    for (int nu = 1; nu <= 64; ++nu) {
        CHECK_THAT(e[nu], WithinRel(ac.l2_best_error(nu), 1e-9));
        CHECK(e[nu] <= ac.decay->K * std::pow(nu, -ac.decay->s));
    }
    const auto lac = target_lacunary(6);
    for (int nu = 1; nu <= 70; ++nu)
        CHECK(lac.l2_best_error(nu) <= lac.decay->K / nu + 1e-15);
    const auto sm = target_smooth();
    for (int nu = 1; nu <= 20; ++nu)
        CHECK(sm.l2_best_error(nu) <= sm.decay->K * std::pow(nu, -sm.decay->s));
}

TEST_CASE("finite differences", "[approx_smoothness]")
{
    const auto grid = periodic_grid(256);
    const double step = kTwoPi / 256;
    const auto c = sample_fn([](double) { return Complex(3.0); }, grid);
    for (double v : detail::abs_values(difference(c, 5 * step, 1).values))
        CHECK(v == 0.0);

    const auto e = sample_fn([](double x) { return std::polar(1.0, x); }, grid);
    for (int m : {1, 7, 40}) {
        const double h = m * step;
        double mx = 0.0;
        for (double v : detail::abs_values(difference(e, h, 2).values))
            mx = std::max(mx, v);
        CHECK_THAT(mx, WithinAbs(std::pow(2 * std::sin(h / 2), 2), 1e-13));
    }

    // per-frequency multiplier (e^{ikh} - 1)^r
    const auto t = test::random_trig(6, 3, false);
    const auto ts = sample(FunctionModel(t), grid);
    const double h = 9 * step;
    for (int r : {1, 3}) {
        const auto dt = partial_sum(difference(ts, h, r), 20);
        for (int k = -20; k <= 20; ++k) {
            const Complex m = std::pow(std::polar(1.0, k * h) - 1.0, r);
            CHECK(std::abs(dt.coeff(k) - m * t.coeff(k)) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(difference(ts, 0.3 * step, 1), ValidationError);
}

TEST_CASE("moduli of smoothness", "[approx_smoothness]")
{
    const NormSpec sup = NormSpec::lp(kInf);
    const NormSpec l2 = NormSpec::lp(2.0);
    auto s = [](double x) { return std::sin(x); };
    CHECK_THAT(modulus(s, kPi, 1, sup), WithinAbs(2.0, 1e-9));
    // 2 sin(delta/2) below pi
    CHECK_THAT(modulus(s, 1.0, 1, sup), WithinAbs(2 * std::sin(0.5), 1e-9));
    auto one = [](double) { return 1.0; };
    for (int r : {1, 2, 3})
        CHECK(modulus(one, 0.5, r, l2) == 0.0);

    for (const char* id : {"abs_cos", "power_cusp:0.5", "lacunary:6", "smooth_test"}) {
        const auto t = make_target(id);
        const double norm = continuous_norm(sample_fn([&](double x) { return Complex(t(x)); }, periodic_grid(4096)), l2);
        double prev = 0.0;
        for (double d : {0.05, 0.2, 0.8}) {
            const double w = modulus(t.f, d, 1, l2, 1024);
            CHECK(w >= prev - 1e-12);
            prev = w;
        }
        for (int r : {1, 2, 3})
            CHECK(modulus(t.f, 1.0, r, l2, 1024) <= std::pow(2.0, r) * norm * (1 + 1e-12));
    }
}

TEST_CASE("tau moduli", "[approx_smoothness]")
{
    const NormSpec l2 = NormSpec::lp(2.0);
    CHECK(tau_modulus([](double) { return 2.0; }, 0.3, 1, l2).value == 0.0);

    const auto ac = target_abs_cos();
    // brute local modulus at a few points, n = 8
    const double delta = 1.0 / 8;
    const auto tau = tau_modulus(ac.f, delta, 1, l2);
    CHECK(tau.value > 0.0);
    const auto& pts = tau.local.grid->points;
    for (std::size_t i = 0; i < pts.size(); i += pts.size() / 7) {
        const double x = pts[i];
        double best = 0.0;
        const int S = 400;
        for (int a = 0; a <= S; ++a)
            for (int b = a + 1; b <= S; ++b) {
                const double t1 = x - delta / 2 + delta * a / S, t2 = x - delta / 2 + delta * b / S;
                best = std::max(best, std::abs(ac(t2) - ac(t1)));
            }
        const double got = tau.local.values[i].real();
        CHECK(got <= best + 1e-12);
        CHECK(got >= best - 0.05 * best - 1e-12);
    }

    std::vector<double> ns, vals;
    for (int n : {8, 16, 32, 64, 128}) {
        ns.push_back(n);
        vals.push_back(tau_modulus(ac.f, 1.0 / n, 1, l2).value);
        CHECK(vals.back() >= 0.0);
    }
    const double slope = detail::loglog_slope(ns, vals);
    CHECK(slope >= -1.3);
    CHECK(slope <= -0.7);
}

TEST_CASE("best approximation", "[approx_smoothness]")
{
    const NormSpec l2 = NormSpec::lp(2.0);
    for (int n : {0, 3, 9}) {
        const int m = n + 1;
        const auto r = best_approx([m](double x) { return std::cos(m * x); }, n, l2);
        CHECK_THAT(r.value, WithinAbs(std::sqrt(kPi), 1e-12));
        const auto rs = best_approx([m](double x) { return std::cos(m * x); }, n, NormSpec::lp(kInf));
        CHECK(rs.value >= 1.0 - 1e-12);
        CHECK(rs.lower_bound <= 1.0 + 1e-12);
        CHECK(rs.value - rs.lower_bound <= 1e-3);
    }
    const auto t = test::random_trig(5, 8);
    const auto r = best_approx(as_fn(t), 5, l2);
    CHECK(r.value <= 1e-12);
    for (int k = -5; k <= 5; ++k)
        CHECK(std::abs(r.poly.coeff(k) - t.coeff(k)) <= 1e-12);
    CHECK(best_approx(as_fn(t), 5, NormSpec::lp(kInf)).value <= 1e-9);

    const auto ac = target_abs_cos();
    // tail of the explicit series 2/pi (-1)^{k+1} 2/(4k^2-1) cos 2kx, frequencies 2k > 4
    double tail = 0.0;
    for (int k = 200000; k >= 3; --k)
        tail += std::pow(4.0 / kPi / (4.0 * k * k - 1.0), 2);
    const double oracle = std::sqrt(kPi * tail);
    CHECK_THAT(best_approx(ac, 4, l2).value, WithinRel(oracle, 1e-12));
    const auto b4 = best_approx(ac.f, 4, l2);
    CHECK_THAT(b4.value, WithinRel(oracle, 1e-6));
    // L2 minimiser is the partial sum
    const auto ps = partial_sum(sample_fn([&](double x) { return Complex(ac(x)); }, periodic_grid(65536)), 4);
    const auto b4t = best_approx(ac, 4, l2);
    for (int k = -4; k <= 4; ++k) {
        CHECK(std::abs(b4.poly.coeff(k) - ps.coeff(k)) <= 1e-10);
        CHECK(std::abs(b4t.poly.coeff(k) - ac.coeff(k)) <= 1e-10);
        CHECK(std::abs(b4.poly.coeff(k) - ac.coeff(k)) <= 1e-9);
    }

    // L1 and sup minimisers improve on the projection in their own norms
    for (const auto& spec : {NormSpec::lp(1.0), NormSpec::lp(kInf), NormSpec::lp(4.0)}) {
        const auto b = best_approx(ac.f, 3, spec, 1024);
        const auto p = best_approx(ac.f, 3, l2, 1024).poly;
        const double proj = continuous_norm(
            sample_fn([&](double x) { return Complex(ac(x)) - evaluate(p, x); }, periodic_grid(1024)), spec);
        CHECK(b.value <= proj * (1 + 1e-9));
        CHECK(b.value > 0.0);
    }
    CHECK(best_approx(ac.f, 2, NormSpec::lp(0.5), 512).local_only);

    // Jackson-type consistency in L2
    for (const char* id : {"abs_cos", "power_cusp:0.5", "lacunary:8", "smooth_test"}) {
        const auto tf = make_target(id);
        for (int n : {2, 8, 32, 128}) {
            const double e = tf.l2_best_error(n);
            const double w = modulus(tf.f, 1.0 / n, 1, l2, 2048);
            CHECK(e <= 10.0 * w + 1e-14);
        }
    }
}

TEST_CASE("linear programming kernel", "[approx_smoothness]")
{
    // max x + y s.t. x + 2y <= 4, 3x + y <= 6
    const std::vector<double> A{1, 2, 1, 0, 3, 1, 0, 1};
    const auto r = detail::simplex_solve(A, {4, 6}, {-1, -1, 0, 0});
    REQUIRE(r.status == detail::LpStatus::Optimal);
    CHECK_THAT(r.x[0], WithinAbs(1.6, 1e-12));
    CHECK_THAT(r.x[1], WithinAbs(1.2, 1e-12));
    CHECK_THAT(r.objective, WithinAbs(-2.8, 1e-12));
    CHECK_THAT(r.dual[0], WithinAbs(-0.4, 1e-12));
    CHECK_THAT(r.dual[1], WithinAbs(-0.2, 1e-12));

    const auto inf = detail::simplex_solve({1, 1}, {-1}, {1, 1});
    CHECK(inf.status == detail::LpStatus::Infeasible);
    const auto unb = detail::simplex_solve({1, -1}, {1}, {0, -1});
    CHECK(unb.status == detail::LpStatus::Unbounded);
}

TEST_CASE("one-sided approximation", "[approx_smoothness]")
{
    const NormSpec l1 = NormSpec::lp(1.0);
    const auto t = test::random_trig(2, 4);
    const auto r = one_sided_approx(as_fn(t), 2, l1);
    CHECK(r.value <= 1e-9);
    CHECK(r.certified <= 1e-9);

    const auto ac = target_abs_cos();
    const auto o1 = one_sided_approx(ac.f, 1, l1);
    const auto e1 = best_approx(ac.f, 1, l1, 1024);
    CHECK(o1.value >= e1.value - 1e-6);
    CHECK(o1.certified >= o1.value - 1e-12);

    const auto g32 = one_sided_approx(ac.f, 2, l1, 32);
    const auto g128 = one_sided_approx(ac.f, 2, l1, 128);
    CHECK_THAT(g32.value, WithinRel(g128.value, 0.05));
    for (int j = 0; j < 128; ++j) {
        const double x = kTwoPi * j / 128;
        CHECK(evaluate(g128.lower, x).real() <= ac(x) + 1e-9);
        CHECK(evaluate(g128.upper, x).real() >= ac(x) - 1e-9);
    }

    const NormSpec l2 = NormSpec::lp(2.0);
    const auto o2 = one_sided_approx(ac.f, 2, l2, 128);
    CHECK(o2.value >= best_approx(ac.f, 2, l2).value - 1e-6);
    CHECK(o2.certified >= o2.value - 1e-12);
}

TEST_CASE("lagrange error tables", "[approx_smoothness]")
{
    const NormSpec l2 = NormSpec::lp(2.0);
    const auto t = test::random_trig(4, 12);
    const auto tab0 = lagrange_error_check(as_fn(t), {4, 6}, l2);
    for (const auto& row : tab0.rows)
        CHECK(row.error <= 1e-12);

    const auto ac = target_abs_cos();
    const auto tab = lagrange_error_check(ac.f, {8, 16, 32, 64, 128}, l2);
    for (const auto& row : tab.rows)
        CHECK_THAT(row.error, WithinRel(lagrange_l2_oracle(ac, row.n), 1e-5));
    CHECK(tab.spread <= 4.0);
    CHECK(tab.slope < -1.3);
    CHECK(tab.slope > -1.6);
}

TEST_CASE("stechkin-nikolskii-boas ratio", "[approx_smoothness]")
{
    for (int n : {1, 5, 16})
        for (int r : {1, 2, 3})
            for (double frac : {0.1, 0.5, 0.999}) {
                const double h = frac * kPi / n;
                auto e = TrigPoly::zero(n);
                e.at(n) = 1.0;
                const double expect = std::pow(n * h / (2 * std::sin(n * h / 2)), r);
                CHECK_THAT(*stechkin_boas_check(e, h, r), WithinRel(expect, 1e-12));
            }
    auto e1 = TrigPoly::zero(1);
    e1.at(1) = 1.0;
    CHECK_THAT(*stechkin_boas_check(e1, 1e-6, 1), WithinAbs(1.0, 1e-12));

    int bad = 0;
    for (std::uint64_t i = 0; i < 500; ++i) {
        const auto T = test::random_trig(16, derive_seed(77, i));
        CounterRng rng(derive_seed(78, i));
        const double h = rng.uniform(0.0, kPi / 16);
        for (int r : {1, 2, 3}) {
            const double v = *stechkin_boas_check(T, h, r);
            if (v < 1 - 1e-9 || v > std::pow(kPi / 2, r) * (1 + 1e-9))
                ++bad;
        }
    }
    CHECK(bad == 0);
    CHECK_FALSE(stechkin_boas_check(TrigPoly::zero(3), 0.1, 1).has_value());
    CHECK_THROWS_AS(stechkin_boas_check(e1, 4.0, 1), ValidationError);
}

TEST_CASE("ulyanov-type inequality", "[approx_smoothness]")
{
    const NormSpec l2 = NormSpec::lp(2.0), sup = NormSpec::lp(kInf);
    CHECK_THAT(1.0 / indicator_norm(l2, kTwoPi / 12, Domain::torus()), WithinRel(std::sqrt(12 / kTwoPi), 1e-12));

    const auto lac = target_lacunary(3);
    const auto z = ulyanov_check(lac, 8, l2, sup, 32);
    CHECK(z.lhs <= 1e-9);
    CHECK(z.rhs >= 0.0);

    const auto ac = target_abs_cos();
    double lo = kInf, hi = 0.0;
    for (int n : {4, 8, 16, 32, 64}) {
        const auto u = ulyanov_check(ac, n, l2, sup, 4 * n);
        CHECK(u.lhs > 0.0);
        CHECK(u.tail > 0.0);
        lo = std::min(lo, u.implied_constant);
        hi = std::max(hi, u.implied_constant);
    }
    CHECK(hi / lo <= 5.0);
    CHECK_THROWS_AS(ulyanov_check(target_power_cusp(0.5), 4, l2, sup, 16), UnsupportedError);
    CHECK_THROWS_AS(ulyanov_check(ac, 4, NormSpec::lp(1.0), sup, 16), UnsupportedError);
    CHECK_THROWS_AS(ulyanov_check(ac, 4, l2, sup, 8), ValidationError);
}
