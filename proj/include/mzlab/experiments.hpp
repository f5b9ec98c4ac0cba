#pragma once

#include <fnmatch.h>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mzlab/approx_smoothness.hpp"
#include "mzlab/mz_lab.hpp"

namespace mzlab {

// ---------------------------------------------------------------------------------------------
// config file: "key = value" lines, [section] headers, '#' comments

class ConfigError : public Error {
public:
    ConfigError(int line, int col, const std::string& msg)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg), line(line), col(col),
          message(msg)
    {
    }
    int line;
    int col;
    std::string message;
};

struct ConfigEntry {
    std::string value;
    int line = 0;
    int key_col = 0;
    int value_col = 0;
};

struct ConfigSection {
    std::string name;
    int line = 0;
    std::map<std::string, ConfigEntry> entries;
};

struct ConfigFile {
    std::map<std::string, ConfigEntry> globals; // keys before the first section
    std::vector<ConfigSection> sections;
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

inline bool is_identifier(const std::string& s, bool allow_punct)
{
    if (s.empty())
        return false;
    for (char c : s) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                        (allow_punct && (c == '-' || c == '.'));
        if (!ok)
            return false;
    }
    return true;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(trim(item));
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

} // namespace detail

inline ConfigFile parse_config_text(const std::string& text)
{
    ConfigFile cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::set<std::string> names;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        const std::string s = raw.substr(0, raw.find('#'));
        const auto first = s.find_first_not_of(" \t");
        if (first == std::string::npos)
            continue;
        const auto last = s.find_last_not_of(" \t");
        const int col = static_cast<int>(first) + 1;
        if (s[first] == '[') {
            if (s[last] != ']')
                throw ConfigError(line, static_cast<int>(last) + 1, "section header must end with ']'");
            const std::string name = detail::trim(s.substr(first + 1, last - first - 1));
            if (!detail::is_identifier(name, true))
                throw ConfigError(line, col + 1, "invalid section name '" + name + "'");
            if (!names.insert(name).second)
                throw ConfigError(line, col + 1, "duplicate section '" + name + "'");
            cfg.sections.push_back({name, line, {}});
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, col, "expected 'key = value'");
        const std::string key = detail::trim(s.substr(first, eq - first));
        if (!detail::is_identifier(key, false))
            throw ConfigError(line, col, "invalid key '" + key + "'");
        const auto vstart = s.find_first_not_of(" \t", eq + 1);
        if (vstart == std::string::npos)
            throw ConfigError(line, static_cast<int>(eq) + 2, "missing value for '" + key + "'");
        ConfigEntry e{s.substr(vstart, last + 1 - vstart), line, col, static_cast<int>(vstart) + 1};
        auto& target = cfg.sections.empty() ? cfg.globals : cfg.sections.back().entries;
        if (!target.emplace(key, e).second)
            throw ConfigError(line, col, "duplicate key '" + key + "'");
    }
    return cfg;
}

inline ConfigFile load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(0, 0, "cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------------------------
// typed settings

/// N as a function of n: "a n + b" ("10n", "2n+1", "n") or an absolute count ("40").
struct NRule {
    long a = 2;
    long b = 1;
    bool absolute = false;

    [[nodiscard]] long value(int n) const { return absolute ? b : a * n + b; }

    static std::optional<NRule> parse(const std::string& text)
    {
        static const std::regex abs_re(R"(\d+)");
        static const std::regex lin_re(R"((\d*)\s*n\s*(([+-])\s*(\d+))?)");
        std::smatch m;
        if (std::regex_match(text, abs_re))
            return NRule{0, std::stol(text), true};
        if (std::regex_match(text, m, lin_re)) {
            NRule r;
            r.a = m[1].length() ? std::stol(m[1].str()) : 1;
            r.b = m[2].matched ? std::stol(m[4].str()) * (m[3].str() == "-" ? -1 : 1) : 0;
            return r;
        }
        return std::nullopt;
    }
};

/// Node families for experiments with free node sets.
struct NodeRule {
    std::string kind = "equispaced"; // equispaced | perturbed | random
    double sigma = 0.0;
};

struct Settings {
    std::string label;
    std::string id;
    int line = 0;
    std::vector<int> n;
    NRule N;
    std::vector<std::string> spec; // canonical spec strings
    int trials = 1;
    std::uint64_t seed = 1;
    double tolerance = 0.0;
    std::vector<int> r;
    int d = 1;
    double A = 0.2;
    double gamma = 2.0;
    NodeRule nodes;
    int node_sets = 1;
    int m_max = 1;
    std::vector<std::pair<double, double>> jacobi;
    std::string target = "abs_cos";
    Interval slope{-1.3, -0.8};
    double spread = 4.0;
    Interval interval{-1.0, 1.0};
    double tolerance_markov = 0.0;
    double drift = 0.25;
    int ascent = 50;
    std::map<std::string, std::pair<int, int>> where; // key -> (line, column) of its value

    [[nodiscard]] std::vector<NormSpec> specs() const
    {
        std::vector<NormSpec> out;
        for (const auto& s : spec)
            out.push_back(NormSpec::parse(s));
        return out;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const
    {
        auto it = where.find(key);
        if (it != where.end() && it->second.first > 0)
            throw ConfigError(it->second.first, it->second.second, label + ": " + msg);
        throw ConfigError(line, 1, label + ": " + msg);
    }
};

namespace detail {

inline std::optional<long> parse_long(const std::string& s)
{
    long v = 0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end)
        return std::nullopt;
    return v;
}

inline std::optional<double> parse_double(const std::string& s)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v))
        return std::nullopt;
    return v;
}

using KeyParser = std::function<void(Settings&, const ConfigEntry&)>;

inline const std::map<std::string, KeyParser>& key_parsers()
{
    auto bad = [](const ConfigEntry& e, const std::string& msg) { return ConfigError(e.line, e.value_col, msg); };
    auto int_list = [bad](const ConfigEntry& e, long lo) {
        std::vector<int> out;
        for (const auto& tok : split(e.value, ',')) {
            const auto dots = tok.find("..");
            if (dots != std::string::npos) {
                const auto a = parse_long(trim(tok.substr(0, dots)));
                const auto b = parse_long(trim(tok.substr(dots + 2)));
                if (!a || !b || *a > *b || *a < lo || *b > 1'000'000)
                    throw bad(e, "bad range '" + tok + "'");
                for (long v = *a; v <= *b; ++v)
                    out.push_back(static_cast<int>(v));
            } else {
                const auto v = parse_long(tok);
                if (!v || *v < lo || *v > 1'000'000)
                    throw bad(e, "expected an integer >= " + std::to_string(lo) + ", got '" + tok + "'");
                out.push_back(static_cast<int>(*v));
            }
        }
        if (out.empty())
            throw bad(e, "empty list");
        return out;
    };
    auto integer = [bad](const ConfigEntry& e, long lo, long hi) {
        const auto v = parse_long(e.value);
        if (!v || *v < lo || *v > hi)
            throw bad(e, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got '" +
                             e.value + "'");
        return static_cast<int>(*v);
    };
    auto real = [bad](const ConfigEntry& e, double lo, bool strict) {
        const auto v = parse_double(e.value);
        if (!v || (strict ? !(*v > lo) : !(*v >= lo)))
            throw bad(e, std::string("expected a number ") + (strict ? "> " : ">= ") + format_number(lo) + ", got '" +
                             e.value + "'");
        return *v;
    };
    auto pair = [bad](const ConfigEntry& e, const std::string& tok) {
        const auto parts = split(tok, ':');
        std::optional<double> a, b;
        if (parts.size() == 2) {
            a = parse_double(parts[0]);
            b = parse_double(parts[1]);
        }
        if (!a || !b)
            throw bad(e, "expected 'a:b', got '" + tok + "'");
        return std::make_pair(*a, *b);
    };
    static const std::map<std::string, KeyParser> table{
        {"n", [=](Settings& s, const ConfigEntry& e) { s.n = int_list(e, 1); }},
        {"r", [=](Settings& s, const ConfigEntry& e) { s.r = int_list(e, 1); }},
        {"N",
         [=](Settings& s, const ConfigEntry& e) {
             const auto r = NRule::parse(e.value);
             if (!r)
                 throw bad(e, "bad node-count rule '" + e.value + "' (expected e.g. 10n, 2n+1 or 40)");
             s.N = *r;
         }},
        {"spec",
         [=](Settings& s, const ConfigEntry& e) {
             s.spec.clear();
             for (const auto& tok : split(e.value, ',')) {
                 try {
                     s.spec.push_back(NormSpec::parse(tok).to_string());
                 } catch (const ValidationError& ex) {
                     throw bad(e, ex.what());
                 }
             }
         }},
        {"trials", [=](Settings& s, const ConfigEntry& e) { s.trials = integer(e, 1, 10'000'000); }},
        {"seed",
         [=](Settings& s, const ConfigEntry& e) {
             std::uint64_t v = 0;
             const auto* end = e.value.data() + e.value.size();
             const auto [p, ec] = std::from_chars(e.value.data(), end, v);
             if (ec != std::errc() || p != end)
                 throw bad(e, "expected an unsigned integer seed, got '" + e.value + "'");
             s.seed = v;
         }},
        {"tolerance", [=](Settings& s, const ConfigEntry& e) { s.tolerance = real(e, 0.0, false); }},
        {"tolerance_markov", [=](Settings& s, const ConfigEntry& e) { s.tolerance_markov = real(e, 0.0, false); }},
        {"d", [=](Settings& s, const ConfigEntry& e) { s.d = integer(e, 1, 2); }},
        {"A", [=](Settings& s, const ConfigEntry& e) { s.A = real(e, 0.0, true); }},
        {"gamma", [=](Settings& s, const ConfigEntry& e) { s.gamma = real(e, 0.0, true); }},
        {"nodes",
         [=](Settings& s, const ConfigEntry& e) {
             const auto parts = split(e.value, ':');
             NodeRule r;
             r.kind = parts[0];
             if ((r.kind == "equispaced" || r.kind == "random") && parts.size() == 1) {
                 s.nodes = r;
                 return;
             }
             if (r.kind == "perturbed" && parts.size() == 2) {
                 const auto sg = parse_double(parts[1]);
                 if (!sg || !(*sg > 0.0 && *sg < 0.25))
                     throw bad(e, "perturbation sigma must lie in (0, 1/4)");
                 r.sigma = *sg;
                 s.nodes = r;
                 return;
             }
             throw bad(e, "unknown node rule '" + e.value + "' (equispaced, random, perturbed:sigma)");
         }},
        {"node_sets", [=](Settings& s, const ConfigEntry& e) { s.node_sets = integer(e, 1, 100'000); }},
        {"m_max", [=](Settings& s, const ConfigEntry& e) { s.m_max = integer(e, 1, 100'000); }},
        {"jacobi",
         [=](Settings& s, const ConfigEntry& e) {
             s.jacobi.clear();
             for (const auto& tok : split(e.value, ',')) {
                 const auto p = pair(e, tok);
                 if (!(p.first > -1.0 && p.second > -1.0))
                     throw bad(e, "Jacobi parameters must exceed -1");
                 s.jacobi.push_back(p);
             }
         }},
        {"target",
         [=](Settings& s, const ConfigEntry& e) {
             try {
                 (void)make_target(e.value);
             } catch (const ValidationError& ex) {
                 throw bad(e, ex.what());
             }
             s.target = e.value;
         }},
        {"slope",
         [=](Settings& s, const ConfigEntry& e) {
             const auto p = pair(e, e.value);
             if (!(p.first <= p.second))
                 throw bad(e, "slope range must satisfy lo <= hi");
             s.slope = {p.first, p.second};
         }},
        {"spread", [=](Settings& s, const ConfigEntry& e) { s.spread = real(e, 1.0, false); }},
        {"interval",
         [=](Settings& s, const ConfigEntry& e) {
             const auto p = pair(e, e.value);
             if (!(p.second > p.first))
                 throw bad(e, "interval needs b > a");
             s.interval = {p.first, p.second};
         }},
        {"drift", [=](Settings& s, const ConfigEntry& e) { s.drift = real(e, 0.0, false); }},
        {"ascent", [=](Settings& s, const ConfigEntry& e) { s.ascent = integer(e, 0, 100'000); }},
    };
    return table;
}

} // namespace detail

// ---------------------------------------------------------------------------------------------
// reports

struct ReportRow {
    std::string experiment;
    std::string family;
    std::string spec;
    int n = 0;
    long N = 0;
    double lower_ratio = 0.0;
    double upper_ratio = 0.0;
    std::optional<double> bound_low;
    std::optional<double> bound_high;
    std::size_t violations = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};

struct ExperimentReport {
    std::string label;
    std::string id;
    std::vector<ReportRow> rows;
    bool pass = true;
    std::string detail;

    [[nodiscard]] std::size_t violations() const
    {
        std::size_t v = 0;
        for (const auto& r : rows)
            v += r.violations;
        return v;
    }
};

inline std::string format_csv_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline const char* kCsvHeader =
    "experiment,family,spec,n,N,lower_ratio,upper_ratio,bound_low,bound_high,violations,trials,seed,wall_ms\n";

inline std::string to_csv(const ExperimentReport& rep)
{
    std::string out = kCsvHeader;
    for (const auto& r : rep.rows) {
        out += r.experiment + ',' + r.family + ',' + r.spec + ',' + std::to_string(r.n) + ',' + std::to_string(r.N) + ',' +
               format_csv_number(r.lower_ratio) + ',' + format_csv_number(r.upper_ratio) + ',' +
               (r.bound_low ? format_csv_number(*r.bound_low) : "") + ',' +
               (r.bound_high ? format_csv_number(*r.bound_high) : "") + ',' + std::to_string(r.violations) + ',' +
               std::to_string(r.trials) + ',' + std::to_string(r.seed) + ',' + format_csv_number(r.wall_ms) + '\n';
    }
    return out;
}

struct RunContext {
    int jobs = 1;
    bool timing = false;
};

namespace detail {

/// Running min/max with a violation count.
struct Envelope {
    double lo = kInf;
    double hi = -kInf;
    std::size_t violations = 0;
    std::size_t trials = 0;

    void add(double v, bool bad)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        violations += bad ? 1 : 0;
        ++trials;
    }
};

class RowClock {
public:
    explicit RowClock(bool on) : on_(on), t0_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double ms() const
    {
        if (!on_)
            return 0.0;
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    bool on_;
    std::chrono::steady_clock::time_point t0_;
};

inline ReportRow make_row(const Settings& s, const std::string& family, const std::string& spec, int n, long N,
                          const Envelope& env, std::uint64_t seed, const RowClock& clock)
{
    ReportRow r;
    r.experiment = s.label;
    r.family = family;
    r.spec = spec;
    r.n = n;
    r.N = N;
    r.lower_ratio = env.trials ? env.lo : std::nan("");
    r.upper_ratio = env.trials ? env.hi : std::nan("");
    r.violations = env.violations;
    r.trials = env.trials;
    r.seed = seed;
    r.wall_ms = clock.ms();
    return r;
}

inline TrigPoly random_trig_poly(int n, std::uint64_t seed, int dim = 1, bool real = false)
{
    return std::get<TrigPoly>(random_model({Family::Trig, n, seed, real, 3, dim}).repr);
}

inline NodeSystem make_nodes(const NodeRule& rule, long N, std::uint64_t seed)
{
    if (rule.kind == "perturbed")
        return perturbed_nodes(static_cast<int>((N - 1) / 2), rule.sigma, seed);
    if (rule.kind == "random")
        return random_nodes(static_cast<std::size_t>(N), seed);
    return equispaced_nodes(static_cast<std::size_t>(N));
}

/// min and max of |T| over [lo, hi]: sampled, then golden-polished around the best samples.
inline std::pair<double, double> cell_extrema(const TrigPoly& T, double lo, double hi)
{
    const int K = 16 + 8 * static_cast<int>(std::ceil(std::max(1, T.n) * (hi - lo)));
    const double h = (hi - lo) / K;
    auto f = [&](double x) { return std::abs(evaluate(T, x)); };
    int imin = 0, imax = 0;
    std::vector<double> v(static_cast<std::size_t>(K) + 1);
    for (int j = 0; j <= K; ++j) {
        v[j] = f(lo + h * j);
        if (v[j] < v[imin])
            imin = j;
        if (v[j] > v[imax])
            imax = j;
    }
    const double tol = 1e-14 * std::max(1.0, hi);
    const double xmin = lo + h * imin, xmax = lo + h * imax;
    const auto mn = golden_minimize(f, std::max(lo, xmin - h), std::min(hi, xmin + h), tol);
    const auto mx = golden_maximize(f, std::max(lo, xmax - h), std::min(hi, xmax + h), tol);
    return {std::min(v[imin], mn.value), std::max(v[imax], mx.value)};
}

inline std::uint64_t row_seed(const Settings& s, std::uint64_t n) { return derive_seed(s.seed, n); }

} // namespace detail

// ---------------------------------------------------------------------------------------------
// experiments

namespace experiments {

using detail::Envelope;
using detail::make_row;
using detail::RowClock;

inline ExperimentReport quad_exactness(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    for (int n : s.n) {
        RowClock clock(ctx.timing);
        const long N = s.N.value(n);
        const auto rs = detail::row_seed(s, n);
        const auto nodes = equispaced_nodes(static_cast<std::size_t>(N)).nodes;
        const auto errs = detail::parallel_map<double>(static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) {
            const auto T = detail::random_trig_poly(n, derive_seed(rs, 2 * i));
            const auto Q = detail::random_trig_poly(n, derive_seed(rs, 2 * i + 1));
            Complex exact{};
            for (int k = -n; k <= n; ++k)
                exact += T.coeff(k) * std::conj(Q.coeff(k));
            exact *= kTwoPi;
            Complex disc{};
            for (double x : nodes)
                disc += evaluate(T, x) * std::conj(evaluate(Q, x));
            disc *= kTwoPi / static_cast<double>(N);
            return std::abs(exact - disc) / (l2_norm_exact(T) * l2_norm_exact(Q));
        });
        Envelope env;
        for (double e : errs)
            env.add(e, e > s.tolerance);
        auto row = make_row(s, "trig", "lp:2", n, N, env, rs, clock);
        row.bound_high = s.tolerance;
        rep.rows.push_back(row);
    }
    return rep;
}

inline ExperimentReport mz_l2_exact(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    const auto l2 = NormSpec::lp(2.0);
    for (int n : s.n) {
        RowClock clock(ctx.timing);
        const long N = s.N.value(n);
        const auto rs = detail::row_seed(s, n);
        const auto sys = equispaced_nodes(static_cast<std::size_t>(N));
        const auto rho = detail::parallel_map<double>(static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) {
            const auto T = detail::random_trig_poly(n, derive_seed(rs, i));
            return discrete_mz_norm(values_at_nodes(T, sys), sys, l2) / l2_norm_exact(T);
        });
        Envelope env;
        for (double v : rho)
            env.add(v, std::abs(v - 1.0) > s.tolerance);
        auto row = make_row(s, "trig", "lp:2", n, N, env, rs, clock);
        row.bound_low = row.bound_high = 1.0;
        rep.rows.push_back(row);
    }
    return rep;
}

inline ExperimentReport mz_orlicz_3d(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    const double bound = *paper_constant_bounds("th1", {{"d", static_cast<double>(s.d)}}).high;
    const auto specs = s.specs();
    for (std::size_t si = 0; si < specs.size(); ++si) {
        for (int n : s.n) {
            RowClock clock(ctx.timing);
            const long N = 2L * n + 1;
            const auto rs = detail::row_seed(s, n);
            const auto sys = equispaced_nodes(static_cast<std::size_t>(N), Domain::torus(), s.d);
            const auto rho = detail::parallel_map<std::optional<double>>(
                static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) {
                    return mz_two_sided_ratio(detail::random_trig_poly(n, derive_seed(rs, i), s.d), sys, specs[si]);
                });
            Envelope env;
            for (const auto& v : rho)
                if (v)
                    env.add(*v, *v > bound * (1.0 + s.tolerance));
            auto row = make_row(s, "trig", s.spec[si], n, N, env, rs, clock);
            row.bound_high = bound;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

inline ExperimentReport zygmund_discrete(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    const auto specs = s.specs();
    for (std::size_t si = 0; si < specs.size(); ++si) {
        const auto phi = std::get<OrliczSpec>(specs[si].v).phi;
        for (int n : s.n) {
            RowClock clock(ctx.timing);
            const auto rs = detail::row_seed(s, n);
            std::vector<std::vector<double>> sets;
            for (int j = 0; j < s.node_sets; ++j) {
                CounterRng g(derive_seed(rs, 1'000'000 + static_cast<std::uint64_t>(j)));
                const auto m = 2 + g.next_u64() % static_cast<std::uint64_t>(s.m_max - 1);
                sets.push_back(random_nodes(m, derive_seed(rs, 2'000'000 + static_cast<std::uint64_t>(j))).nodes);
            }
            const auto ratios = detail::parallel_map<std::vector<double>>(
                static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) {
                    const auto T = detail::random_trig_poly(n, derive_seed(rs, i), 1, true);
                    const double integral = zygmund_integral(T, phi);
                    std::vector<double> out;
                    for (const auto& nodes : sets) {
                        const auto m = zygmund_discrete_bound_check(T, nodes, phi, integral);
                        if (m.rhs > 0.0)
                            out.push_back(m.lhs / m.rhs);
                    }
                    return out;
                });
            Envelope env;
            for (const auto& v : ratios)
                for (double x : v)
                    env.add(x, x > 1.0 + s.tolerance);
            auto row = make_row(s, "trig", s.spec[si], n, s.m_max, env, rs, clock);
            row.bound_high = 1.0;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

inline ExperimentReport sharp_orlicz_upper(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    const auto specs = s.specs();
    for (std::size_t si = 0; si < specs.size(); ++si) {
        const auto phi = std::get<OrliczSpec>(specs[si].v).phi;
        for (int n : s.n) {
            RowClock clock(ctx.timing);
            const long N = s.N.value(n);
            const auto rs = detail::row_seed(s, n);
            const auto rho = detail::parallel_map<std::optional<double>>(
                static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) -> std::optional<double> {
                    const auto T = detail::random_trig_poly(n, derive_seed(rs, 2 * i));
                    const auto sys = detail::make_nodes(s.nodes, N, derive_seed(rs, 2 * i + 1));
                    const double delta = mesh_gauges(sys.nodes, true).delta;
                    const double bound = *paper_constant_bounds(
                                              "th3_upper", {{"n", double(n)}, {"N", double(sys.nodes.size())}, {"delta", delta}})
                                              .high;
                    const double cont = model_norm(FunctionModel(T), specs[si]);
                    if (cont == 0.0)
                        return std::nullopt;
                    return discrete_orlicz_sharp_norm(evaluate(FunctionModel(T), sys.nodes), phi).value / cont / bound;
                });
            Envelope env;
            for (const auto& v : rho)
                if (v)
                    env.add(*v, *v > 1.0 + s.tolerance);
            auto row = make_row(s, "trig", s.spec[si], n, N, env, rs, clock);
            row.bound_high = 1.0;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

inline ExperimentReport extremal_bernstein(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    const auto sup = NormSpec::lp(kInf);
    for (int n : s.n) {
        RowClock clock(ctx.timing);
        Envelope env;
        const double raw = bernstein_raw_ratio(FunctionModel(trig_sin(n, n)), sup, 1);
        const double bound = n;
        env.add(raw, std::abs(raw / bound - 1.0) > s.tolerance);
        auto row = make_row(s, "trig", "lp:inf", n, 0, env, 0, clock);
        row.bound_low = row.bound_high = bound;
        rep.rows.push_back(row);
    }
    for (int n : s.n) {
        RowClock clock(ctx.timing);
        Envelope env;
        const double raw = bernstein_raw_ratio(FunctionModel(AlgPoly::chebyshev(n, s.interval)), sup, 1);
        const double bound =
            *paper_constant_bounds("markov", {{"n", double(n)}, {"a", s.interval.lo}, {"b", s.interval.hi}}).high;
        env.add(raw, std::abs(raw / bound - 1.0) > s.tolerance_markov);
        auto row = make_row(s, "alg", "lp:inf", n, 0, env, 0, clock);
        row.bound_low = row.bound_high = bound;
        rep.rows.push_back(row);
    }
    return rep;
}

inline ExperimentReport maxmin_sandwich(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    const double eta = eta_banach(s.A, 1.0, 1).value;
    const auto specs = s.specs();
    for (std::size_t si = 0; si < specs.size(); ++si) {
        for (int n : s.n) {
            RowClock clock(ctx.timing);
            const auto rs = detail::row_seed(s, n);
            struct Out {
                double lower = 0.0, upper = 0.0;
                bool bad = false, zero = true;
            };
            const auto res = detail::parallel_map<Out>(static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) {
                const auto mm = max_min_function(FunctionModel(detail::random_trig_poly(n, derive_seed(rs, i))), s.A);
                const double nt = continuous_norm(mm.function(), specs[si]);
                if (nt == 0.0)
                    return Out{};
                const double nmax = continuous_norm(mm.max_function(), specs[si]);
                const double nmin = continuous_norm(mm.min_function(), specs[si]);
                const bool bad = nmax > (1.0 + eta) * nt + s.tolerance || nt > nmin / (1.0 - eta) + s.tolerance;
                return Out{nmin / nt, nmax / nt, bad, false};
            });
            Envelope env;
            for (const auto& o : res) {
                if (o.zero)
                    continue;
                env.add(o.lower, o.bad);
                env.hi = std::max(env.hi, o.upper);
            }
            auto row = make_row(s, "trig", s.spec[si], n, 0, env, rs, clock);
            row.bound_low = 1.0 - eta;
            row.bound_high = 1.0 + eta;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

inline ExperimentReport grid_mz(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    const auto specs = s.specs();
    for (std::size_t si = 0; si < specs.size(); ++si) {
        for (int n : s.n) {
            RowClock clock(ctx.timing);
            const long N = s.N.value(n);
            const auto rs = detail::row_seed(s, n);
            const double A = kTwoPi * n / static_cast<double>(N);
            const auto b = paper_constant_bounds("grid_mz", {{"A", A}});
            const auto sys = equispaced_nodes(static_cast<std::size_t>(N));
            struct Out {
                double lower = 0.0, upper = 0.0;
                bool ok = false;
            };
            const auto res = detail::parallel_map<Out>(static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) {
                const auto T = detail::random_trig_poly(n, derive_seed(rs, i));
                const double nt = model_norm(FunctionModel(T), specs[si]);
                if (nt == 0.0)
                    return Out{};
                std::vector<Complex> mins, maxs;
                for (const auto& c : sys.cells) {
                    const auto [mn, mx] = detail::cell_extrema(T, c.lo, c.hi);
                    mins.emplace_back(mn);
                    maxs.emplace_back(mx);
                }
                return Out{discrete_mz_norm(mins, sys, specs[si]) / nt, discrete_mz_norm(maxs, sys, specs[si]) / nt, true};
            });
            Envelope env;
            for (const auto& o : res) {
                if (!o.ok)
                    continue;
                const bool bad = (b.low && o.lower < *b.low * (1.0 - s.tolerance)) || o.upper > *b.high * (1.0 + s.tolerance);
                env.add(o.lower, bad);
                env.hi = std::max(env.hi, o.upper);
            }
            auto row = make_row(s, "trig", s.spec[si], n, N, env, rs, clock);
            row.bound_low = b.low;
            row.bound_high = b.high;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

inline ExperimentReport gauss_jacobi_cms(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    std::ostringstream detail;
    for (const auto& [alpha, beta] : s.jacobi) {
        const std::string spec = NormSpec{WeightedLpSpec{2.0, WeightSpec::jacobi(alpha, beta)}}.to_string();
        double up_lo = kInf, up_hi = 0.0, lo_lo = kInf, lo_hi = 0.0;
        for (int n : s.n) {
            RowClock clock(ctx.timing);
            const auto rs = detail::row_seed(s, n);
            const auto rule = gauss_jacobi(n, alpha, beta);
            const auto cms = cms_cells(rule, WeightSpec::jacobi(alpha, beta));
            std::size_t structural = 0;
            for (double w : rule.weights)
                structural += w > 0.0 ? 0 : 1;
            for (double r : cms.ratios)
                structural += r <= 1.0 + 1e-10 ? 0 : 1;
            // exactness on psi_i psi_j, i + j <= 2n - 1
            double exact_err = 0.0;
            std::vector<std::vector<double>> psi;
            for (double x : rule.nodes)
                psi.push_back(orthonormal_jacobi(n, alpha, beta, x, rule.mass));
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= std::min(i, n - 1) && i + j <= 2 * n - 1; ++j) {
                    double q = 0.0;
                    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
                        q += rule.weights[k] * psi[k][i] * psi[k][j];
                    exact_err = std::max(exact_err, std::abs(q - (i == j ? 1.0 : 0.0)));
                }
            structural += exact_err <= 1e-9 ? 0 : 1;

            const auto q = quadrature_mz_experiment({n, alpha, beta, 2.0, s.trials, rs, ctx.jobs});
            Envelope cells;
            cells.lo = q.cells.lower_ratio;
            cells.hi = q.cells.upper_ratio;
            cells.trials = q.cells.trials;
            cells.violations = structural;
            rep.rows.push_back(make_row(s, "alg-cells", spec, n, n, cells, rs, clock));
            Envelope chr;
            chr.lo = q.christoffel.lower_ratio;
            chr.hi = q.christoffel.upper_ratio;
            chr.trials = q.christoffel.trials;
            chr.violations = (std::abs(chr.lo - 1.0) > s.tolerance || std::abs(chr.hi - 1.0) > s.tolerance) ? 1 : 0;
            auto row = make_row(s, "alg-christoffel", spec, n, n, chr, rs, clock);
            row.bound_low = row.bound_high = 1.0;
            rep.rows.push_back(row);
            up_lo = std::min(up_lo, cells.hi);
            up_hi = std::max(up_hi, cells.hi);
            lo_lo = std::min(lo_lo, cells.lo);
            lo_hi = std::max(lo_hi, cells.lo);
        }
        const double drift = std::max(up_hi / up_lo, lo_hi / lo_lo) - 1.0;
        if (drift > s.drift)
            rep.pass = false;
        detail << (detail.tellp() > 0 ? " " : "") << "drift[" << format_number(alpha) << ":" << format_number(beta)
               << "]=" << format_csv_number(drift);
    }
    rep.detail = detail.str();
    return rep;
}

inline ExperimentReport stechkin_boas(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    for (int r : s.r) {
        const double top = std::pow(kPi / 2.0, r);
        for (int n : s.n) {
            RowClock clock(ctx.timing);
            const auto rs = detail::row_seed(s, n);
            const auto rho = detail::parallel_map<std::optional<double>>(
                static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) {
                    CounterRng g(derive_seed(rs, 2 * i + 1));
                    double u = 0.0;
                    while (u == 0.0)
                        u = g.uniform();
                    const double h = kPi / n * u;
                    return stechkin_boas_check(detail::random_trig_poly(n, derive_seed(rs, 2 * i)), h, r);
                });
            Envelope env;
            for (const auto& v : rho)
                if (v)
                    env.add(*v, *v < 1.0 - s.tolerance || *v > top * (1.0 + s.tolerance));
            auto row = make_row(s, "trig", "lp:2", n, 0, env, rs, clock);
            row.family = "trig-r" + std::to_string(r);
            row.bound_low = 1.0;
            row.bound_high = top;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

inline ExperimentReport nikolskii(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    const auto specs = s.specs();
    for (std::size_t si = 0; si < specs.size(); ++si) {
        for (int n : s.n) {
            RowClock clock(ctx.timing);
            const long N = s.N.value(n);
            const auto rs = detail::row_seed(s, n);
            const auto rho = detail::parallel_map<std::optional<double>>(
                static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) -> std::optional<double> {
                    const auto res = nikolskii_check(detail::random_trig_poly(n, derive_seed(rs, i), s.d), specs[si],
                                                     static_cast<int>(N), s.gamma);
                    if (res.bound == 0.0)
                        return std::nullopt;
                    return res.sup / res.bound;
                });
            Envelope env;
            for (const auto& v : rho)
                if (v)
                    env.add(*v, *v > 1.0 + s.tolerance);
            auto row = make_row(s, "trig", s.spec[si], n, N, env, rs, clock);
            row.bound_high = 1.0;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

inline ExperimentReport spline_bernstein(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    const auto sup = NormSpec::lp(kInf);
    for (int r : s.r) {
        for (int n : s.n) {
            RowClock clock(ctx.timing);
            const auto rs = detail::row_seed(s, n);
            const double bound = *paper_constant_bounds("spline", {{"r", double(r)}, {"n", double(n)}}).high;
            const auto raw = detail::parallel_map<double>(static_cast<std::size_t>(s.trials), ctx.jobs, [&](std::size_t i) {
                ModelRequest q{Family::Spline, n, derive_seed(rs, i), true, r};
                return bernstein_raw_ratio(random_model(q), sup, 1);
            });
            Envelope env;
            for (double v : raw)
                env.add(v, v > bound * (1.0 + s.tolerance));
            auto row = make_row(s, "spline-r" + std::to_string(r), "lp:inf", n, 0, env, rs, clock);
            row.bound_high = bound;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

inline ExperimentReport lagrange_error(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    RowClock clock(ctx.timing);
    const auto f = make_target(s.target);
    const auto table = lagrange_error_check(f.f, s.n, s.specs().front(), 1);
    for (const auto& lr : table.rows) {
        Envelope env;
        env.add(lr.error, false);
        auto row = make_row(s, s.target, s.spec.front(), lr.n, 2L * lr.n + 1, env, 0, clock);
        rep.rows.push_back(row);
    }
    const bool slope_ok = table.slope >= s.slope.lo && table.slope <= s.slope.hi;
    const bool spread_ok = table.spread <= s.spread;
    rep.pass = slope_ok && spread_ok;
    rep.detail = "slope=" + format_csv_number(table.slope) + " spread=" + format_csv_number(table.spread) +
                 " constant=" + format_csv_number(table.constant);
    return rep;
}

inline ExperimentReport exp_bernstein(const Settings& s, const RunContext& ctx)
{
    ExperimentReport rep;
    double lo = kInf, hi = 0.0;
    for (int n : s.n) {
        RowClock clock(ctx.timing);
        const auto rs = detail::row_seed(s, n);
        BernsteinRequest q;
        q.family = Family::Exp;
        q.n = n;
        q.spec = NormSpec::lp(kInf);
        q.trials = s.trials;
        q.seed = rs;
        q.ascent_steps = s.ascent;
        q.span = s.interval;
        q.jobs = ctx.jobs;
        const auto b = bernstein_estimate(q);
        const double c = b.raw_ratio / b.gamma_lambda;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        Envelope env;
        env.add(c, false);
        env.trials = static_cast<std::size_t>(s.trials);
        rep.rows.push_back(make_row(s, "exp", "lp:inf", n, 0, env, rs, clock));
    }
    rep.pass = hi / lo <= s.spread;
    rep.detail = "c_min=" + format_csv_number(lo) + " c_max=" + format_csv_number(hi) +
                 " spread=" + format_csv_number(hi / lo);
    return rep;
}

} // namespace experiments

// ---------------------------------------------------------------------------------------------
// catalog

using Validator = std::function<void(const Settings&)>;

struct ExperimentDef {
    std::string id;
    std::string theorem;
    std::string description;
    std::string defaults;
    std::vector<std::string> keys; // accepted in a section besides "experiment"
    std::function<ExperimentReport(const Settings&, const RunContext&)> run;
    Validator validate;
};

namespace detail {

inline void need_N_at_least(const Settings& s, long (*min_n)(int), const std::string& what)
{
    for (int n : s.n)
        if (s.N.value(n) < min_n(n))
            s.fail("N", "need N >= " + what + " (n = " + std::to_string(n) + ")");
}

inline void need_specs(const Settings& s, bool (*ok)(const NormSpec&), const std::string& what)
{
    for (const auto& sp : s.specs())
        if (!ok(sp))
            s.fail("spec", "spec '" + sp.to_string() + "' not supported here: " + what);
}

inline bool is_orlicz_lux(const NormSpec& s)
{
    const auto* o = std::get_if<OrliczSpec>(&s.v);
    return o && o->mode == OrliczMode::Luxemburg;
}

} // namespace detail

inline const std::vector<ExperimentDef>& experiment_catalog()
{
    using namespace experiments;
    static const std::vector<ExperimentDef> defs{
        {"quad_exactness", "Thm 3.1", "discrete orthogonality of the 2n+1 point rule on T_n x T_n",
         "n = 1, 2, 4, 8, 16, 32, 64\nN = 2n+1\ntrials = 100\ntolerance = 1e-10", {"n", "N", "trials", "seed", "tolerance"},
         quad_exactness, [](const Settings& s) {
             detail::need_N_at_least(s, [](int n) { return 2L * n + 1; }, "2n+1");
         }},
        {"mz_l2_exact", "Thm 4.1", "L_2 MZ equality at equispaced nodes (discrete Parseval)",
         "n = 1, 2, 4, 8, 16, 32, 64\nN = 2n+1\ntrials = 72\ntolerance = 1e-10", {"n", "N", "trials", "seed", "tolerance"},
         mz_l2_exact, [](const Settings& s) {
             detail::need_N_at_least(s, [](int n) { return 2L * n + 1; }, "2n+1");
         }},
        {"mz_orlicz_3d", "Thm 4.2", "Orlicz MZ upper bound 3^d at the 2n+1 nodes",
         "n = 1, 2, 4, 8, 16, 32\nspec = orlicz:power:1.5, orlicz:power:2, orlicz:power:4\nd = 1\ntrials = 84\n"
         "tolerance = 1e-8",
         {"n", "spec", "d", "trials", "seed", "tolerance"}, mz_orlicz_3d,
         [](const Settings& s) { detail::need_specs(s, detail::is_orlicz_lux, "Luxemburg Orlicz norm expected"); }},
        {"zygmund_discrete", "Lemma 4.4", "sum Phi(T(tau_k)) <= ((n+1)/2pi + 1/delta) int Phi(eT) on random node sets",
         "n = 8\nspec = orlicz:power:1, orlicz:power:2\ntrials = 200\nnode_sets = 50\nm_max = 40\ntolerance = 1e-9",
         {"n", "spec", "trials", "node_sets", "m_max", "seed", "tolerance"}, zygmund_discrete,
         [](const Settings& s) {
             detail::need_specs(s, [](const NormSpec& x) { return std::holds_alternative<OrliczSpec>(x.v); },
                                "Orlicz function expected");
             if (s.m_max < 2)
                 s.fail("m_max", "node sets need at least two points");
         }},
        {"sharp_orlicz_upper", "Thm 4.5", "sharp Orlicz discrete norm <= e(n+1+2pi/delta)/N times the sharp norm",
         "n = 1, 2, 4, 8, 16\nN = 2n+1\nnodes = perturbed:0.2\nspec = orlicz:power:2:sharp, orlicz:power:1.5:sharp, "
         "orlicz:exp:sharp\ntrials = 100\ntolerance = 1e-6",
         {"n", "N", "nodes", "spec", "trials", "seed", "tolerance"}, sharp_orlicz_upper,
         [](const Settings& s) {
             detail::need_specs(
                 s,
                 [](const NormSpec& x) {
                     const auto* o = std::get_if<OrliczSpec>(&x.v);
                     return o && o->mode == OrliczMode::Sharp;
                 },
                 "sharp Orlicz norm expected");
             for (int n : s.n) {
                 const long N = s.N.value(n);
                 if (N < 1)
                     s.fail("N", "need N >= 1");
                 if (s.nodes.kind == "perturbed" && N % 2 == 0)
                     s.fail("N", "perturbed nodes need an odd N");
             }
         }},
        {"extremal_bernstein", "Eq. (Mark)", "sin(nx) and Chebyshev T_n attain the Bernstein and Markov constants",
         "n = 1..10\ninterval = -1:1\ntolerance = 1e-9\ntolerance_markov = 1e-6",
         {"n", "interval", "tolerance", "tolerance_markov"}, extremal_bernstein, [](const Settings&) {}},
        {"maxmin_sandwich", "Thm 2.1", "max/min function norms within (1 +- eta) ||T||",
         "n = 1, 2, 4, 8, 16, 32\nspec = lp:2\nA = 0.2\ntrials = 34\ntolerance = 1e-6",
         {"n", "spec", "A", "trials", "seed", "tolerance"}, maxmin_sandwich,
         [](const Settings& s) {
             if (!(eta_banach(s.A, 1.0, 1).value < 1.0))
                 s.fail("A", "need eta = 2A < 1");
             detail::need_specs(
                 s,
                 [](const NormSpec& x) {
                     return (x.is_lp() && std::get<LpSpec>(x.v).p >= 1.0) || detail::is_orlicz_lux(x);
                 },
                 "translation invariant Banach lattice (lp with p >= 1 or Luxemburg Orlicz) expected");
         }},
        {"grid_mz", "Thm 4.3", "cell-min and cell-max step norms on N = 10n grids within [2 - e^A, e^A]",
         "n = 1, 2, 4, 8, 16, 32\nN = 10n\nspec = lp:2\ntrials = 84\ntolerance = 1e-9",
         {"n", "N", "spec", "trials", "seed", "tolerance"}, grid_mz,
         [](const Settings& s) {
             detail::need_N_at_least(s, [](int n) { return static_cast<long>(n) + 1; }, "n+1");
             detail::need_specs(
                 s,
                 [](const NormSpec& x) {
                     return !std::holds_alternative<WeightedLpSpec>(x.v) && !std::holds_alternative<MixedLpSpec>(x.v);
                 },
                 "one-dimensional unweighted spec expected");
         }},
        {"gauss_jacobi_cms", "Thm 5.4", "Gauss-Jacobi weights, CMS separation and weighted L_2 MZ ratios",
         "n = 8, 12, 16, 20, 24\njacobi = -0.5:-0.5, 0:0, 0.5:0.5\ntrials = 100\ntolerance = 1e-10\ndrift = 0.25",
         {"n", "jacobi", "trials", "seed", "tolerance", "drift"}, gauss_jacobi_cms, [](const Settings&) {}},
        {"stechkin_boas", "Eq. (ns)", "h^r ||T^(r)||_2 / ||Delta_h^r T||_2 within [1, (pi/2)^r] for h < pi/n",
         "n = 16\nr = 1, 2, 3\ntrials = 500\ntolerance = 1e-9", {"n", "r", "trials", "seed", "tolerance"}, stechkin_boas,
         [](const Settings&) {}},
        {"nikolskii", "Thm 7.3", "||T||_inf <= e^{2 pi d/gamma} ||T||_X / ||chi||_X with N >= gamma n",
         "n = 1, 2, 4, 8, 16, 32, 64\nN = 2n\ngamma = 2\nspec = lp:2\nd = 1\ntrials = 150\ntolerance = 0",
         {"n", "N", "gamma", "spec", "d", "trials", "seed", "tolerance"}, nikolskii,
         [](const Settings& s) {
             for (int n : s.n)
                 if (static_cast<double>(s.N.value(n)) < s.gamma * n)
                     s.fail("N", "need N >= gamma n (n = " + std::to_string(n) + ")");
             if (s.d == 2)
                 detail::need_specs(
                     s,
                     [](const NormSpec& x) {
                         return !std::holds_alternative<WeightedLpSpec>(x.v) &&
                                !std::holds_alternative<VariableLpSpec>(x.v) && !std::holds_alternative<MixedLpSpec>(x.v);
                     },
                     "rearrangement invariant spec expected for d = 2");
         }},
        {"spline_bernstein", "Sec. 6.2", "periodic splines of order r: ||S'||_inf <= 2 r^2 n ||S||_inf",
         "n = 4, 8, 16, 32, 64\nr = 2, 3, 4\ntrials = 100\ntolerance = 1e-12", {"n", "r", "trials", "seed", "tolerance"},
         spline_bernstein,
         [](const Settings& s) {
             for (int r : s.r)
                 if (r < 2)
                     s.fail("r", "spline order must be at least 2");
         }},
        {"lagrange_error", "Thm 7.1", "||f - L_n f||_X decay against tau_1(f, 1/n)_X",
         "n = 8, 16, 32, 64, 128\ntarget = abs_cos\nspec = lp:2\nslope = -1.3:-0.8\nspread = 4",
         {"n", "target", "spec", "slope", "spread"}, lagrange_error,
         [](const Settings& s) {
             if (s.spec.size() != 1)
                 s.fail("spec", "exactly one spec expected");
         }},
        {"exp_bernstein", "Thm 6.3", "exponential sums on [0,1]: Bernstein ratio over gamma(Lambda_n) stable in n",
         "n = 1..8\ninterval = 0:1\ntrials = 20\nascent = 50\nspread = 3", {"n", "interval", "trials", "ascent", "seed", "spread"},
         exp_bernstein, [](const Settings&) {}},
    };
    return defs;
}

inline const ExperimentDef& find_experiment(const std::string& id)
{
    for (const auto& d : experiment_catalog())
        if (d.id == id)
            return d;
    throw ValidationError("unknown experiment '" + id + "'");
}

inline std::string list_experiments()
{
    std::string out;
    for (const auto& d : experiment_catalog()) {
        std::string head = d.id + " → " + d.theorem;
        // pad by code points ("→" is three bytes)
        const std::size_t width = head.size() - 2;
        out += head + std::string(width < 34 ? 34 - width : 1, ' ') + d.description + '\n';
    }
    return out;
}

/// Defaults, then global keys, then the section's own keys; all values are validated here so a
/// bad config fails before any experiment runs.
inline Settings resolve(const ConfigSection& sec, const std::map<std::string, ConfigEntry>& globals = {})
{
    std::string id = sec.name;
    if (auto it = sec.entries.find("experiment"); it != sec.entries.end())
        id = it->second.value;
    const ExperimentDef* def = nullptr;
    for (const auto& d : experiment_catalog())
        if (d.id == id)
            def = &d;
    if (!def) {
        auto it = sec.entries.find("experiment");
        if (it != sec.entries.end())
            throw ConfigError(it->second.line, it->second.value_col, "unknown experiment '" + id + "'");
        throw ConfigError(sec.line, 2, "unknown experiment '" + id + "' (set 'experiment = <id>' or use a catalog id)");
    }
    Settings s;
    s.label = sec.name;
    s.id = id;
    s.line = sec.line;
    const auto& parsers = detail::key_parsers();
    const auto defaults = parse_config_text(def->defaults);
    for (const auto& [k, e] : defaults.globals) {
        ConfigEntry pos = e;
        pos.line = 0; // defaults have no position in the user's file
        parsers.at(k)(s, pos);
        s.where[k] = {0, 0};
    }
    auto apply = [&](const std::string& k, const ConfigEntry& e) {
        auto p = parsers.find(k);
        if (p == parsers.end() || std::find(def->keys.begin(), def->keys.end(), k) == def->keys.end())
            throw ConfigError(e.line, e.key_col, "unknown key '" + k + "' for experiment '" + id + "'");
        p->second(s, e);
        s.where[k] = {e.line, e.value_col};
    };
    for (const auto& [k, e] : globals) {
        if (k != "seed")
            throw ConfigError(e.line, e.key_col, "only 'seed' may appear before the first section");
        if (std::find(def->keys.begin(), def->keys.end(), k) != def->keys.end())
            apply(k, e);
    }
    for (const auto& [k, e] : sec.entries)
        if (k != "experiment")
            apply(k, e);
    def->validate(s);
    return s;
}

/// Settings for a catalog id with its defaults only.
inline Settings default_settings(const std::string& id)
{
    return resolve(ConfigSection{id, 0, {}});
}

inline ExperimentReport run_experiment(const Settings& s, const RunContext& ctx)
{
    auto rep = find_experiment(s.id).run(s, ctx);
    rep.label = s.label;
    rep.id = s.id;
    if (rep.violations() > 0)
        rep.pass = false;
    return rep;
}

// ---------------------------------------------------------------------------------------------
// run driver

struct RunOptions {
    std::filesystem::path out = ".";
    int jobs = 1;
    std::optional<std::uint64_t> seed; // overrides every section
    std::string filter;                // glob on section names
    bool timing = false;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the selected sections in file order, writes <section>.csv and summary.csv into opt.out,
/// and returns the exit code. Configuration errors propagate as ConfigError.
inline int run_config(const ConfigFile& cfg, const RunOptions& opt, std::ostream& log, std::ostream& err)
{
    std::vector<Settings> plan;
    for (const auto& sec : cfg.sections) {
        auto s = resolve(sec, cfg.globals);
        if (opt.seed)
            s.seed = *opt.seed;
        if (!opt.filter.empty() && fnmatch(opt.filter.c_str(), s.label.c_str(), 0) != 0 &&
            fnmatch(opt.filter.c_str(), s.id.c_str(), 0) != 0)
            continue;
        plan.push_back(std::move(s));
    }
    std::filesystem::create_directories(opt.out);
    std::string summary = "experiment,id,status,rows,violations,detail\n";
    auto flush_summary = [&] {
        std::ofstream(opt.out / "summary.csv", std::ios::binary) << summary;
    };
    bool all = true;
    const RunContext ctx{std::max(1, opt.jobs), opt.timing};
    for (const auto& s : plan) {
        ExperimentReport rep;
        try {
            rep = run_experiment(s, ctx);
        } catch (const std::exception& e) {
            summary += s.label + ',' + s.id + ",error,0,0," + '"' + e.what() + "\"\n";
            flush_summary();
            err << "experiment '" << s.label << "' failed: " << e.what() << '\n';
            return kExitNumerical;
        }
        std::ofstream(opt.out / (s.label + ".csv"), std::ios::binary) << to_csv(rep);
        summary += s.label + ',' + s.id + ',' + (rep.pass ? "pass" : "fail") + ',' + std::to_string(rep.rows.size()) + ',' +
                   std::to_string(rep.violations()) + ',' + rep.detail + '\n';
        log << (rep.pass ? "PASS " : "FAIL ") << s.label << " (" << rep.rows.size() << " rows, " << rep.violations()
            << " violations)" << (rep.detail.empty() ? "" : " " + rep.detail) << '\n';
        all = all && rep.pass;
    }
    flush_summary();
    return all ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------------------------
// helpers for the constants and nodes subcommands

inline std::string constants_text(const std::string& id, const ConstantParams& p)
{
    const auto b = paper_constant_bounds(id, p);
    std::string out = "id," + id + "\n";
    out += "low," + (b.low ? format_csv_number(*b.low) : std::string()) + "\n";
    out += "high," + (b.high ? format_csv_number(*b.high) : std::string()) + "\n";
    out += std::string("applicable,") + (b.applicable ? "true" : "false") + "\n";
    if (!b.note.empty())
        out += "note," + b.note + "\n";
    return out;
}

struct NodesRequest {
    std::string kind = "trig"; // trig | equispaced | perturbed | random | gauss | chebyshev
    int n = 4;
    long N = 0;
    double sigma = 0.1;
    std::uint64_t seed = 1;
    double alpha = 0.0;
    double beta = 0.0;
};

inline NodeSystem make_node_system(const NodesRequest& q)
{
    if (q.kind == "trig")
        return minimal_trig_nodes(q.n);
    if (q.kind == "equispaced")
        return equispaced_nodes(static_cast<std::size_t>(q.N > 0 ? q.N : 2L * q.n + 1));
    if (q.kind == "perturbed")
        return perturbed_nodes(q.n, q.sigma, q.seed);
    if (q.kind == "random")
        return random_nodes(static_cast<std::size_t>(q.N > 0 ? q.N : 2L * q.n + 1), q.seed);
    if (q.kind == "gauss") {
        const auto rule = gauss_jacobi(q.n, q.alpha, q.beta);
        return cms_cells(rule, WeightSpec::jacobi(q.alpha, q.beta)).system;
    }
    if (q.kind == "chebyshev")
        return chebyshev_like_nodes(static_cast<int>(q.N > 0 ? q.N : q.n));
    throw ValidationError("unknown node kind '" + q.kind + "'");
}

} // namespace mzlab
