#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "mzlab/experiments.hpp"

using namespace mzlab;
using Catch::Matchers::ContainsSubstring;

namespace {

ConfigError config_error(const std::string& text)
{
    try {
        const auto cfg = parse_config_text(text);
        for (const auto& sec : cfg.sections)
            (void)resolve(sec, cfg.globals);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError for:\n" << text);
    return ConfigError(0, 0, "");
}

std::filesystem::path scratch(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("mzlab_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int shell(const std::string& cmd)
{
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string cli() { return std::string("\"") + MZLAB_BINARY + "\""; }

} // namespace

TEST_CASE("config syntax errors carry line and column", "[experiments]")
{
    SECTION("missing '='")
    {
        const auto e = config_error("[mz_l2_exact]\n  trials 5\n");
        CHECK(e.line == 2);
        CHECK(e.col == 3);
    }
    SECTION("unterminated header")
    {
        const auto e = config_error("# c\n[mz_l2_exact\n");
        CHECK(e.line == 2);
        CHECK(e.col == 12);
    }
    SECTION("duplicate key and section")
    {
        CHECK(config_error("[grid_mz]\ntrials = 1\ntrials = 2\n").line == 3);
        CHECK(config_error("[grid_mz]\n[grid_mz]\n").line == 2);
    }
    SECTION("missing value")
    {
        const auto e = config_error("[grid_mz]\ntrials =\n");
        CHECK(e.line == 2);
        CHECK(e.col == 9);
    }
}

TEST_CASE("config semantic errors point at the offending value", "[experiments]")
{
    SECTION("negative exponent in an lp spec")
    {
        const auto e = config_error("seed = 3\n\n[mz_orlicz_3d]\nspec = lp:-1\n");
        CHECK(e.line == 4);
        CHECK(e.col == 8);
    }
    SECTION("unknown key")
    {
        const auto e = config_error("[quad_exactness]\n trial = 4\n");
        CHECK(e.line == 2);
        CHECK(e.col == 2);
        CHECK_THAT(e.message, ContainsSubstring("trial"));
    }
    SECTION("unknown experiment")
    {
        CHECK(config_error("[whatever]\n").line == 1);
        const auto e = config_error("[a]\nexperiment = nope\n");
        CHECK(e.line == 2);
        CHECK(e.col == 14);
    }
    SECTION("only seed is global")
    {
        CHECK(config_error("trials = 3\n[grid_mz]\n").line == 1);
    }
    SECTION("Nikolskii needs N >= gamma n")
    {
        const auto e = config_error("[nikolskii]\nn = 4, 8\nN = 15\n");
        CHECK(e.line == 3);
        CHECK_THAT(e.message, ContainsSubstring("gamma"));
    }
    SECTION("bad ranges and numbers")
    {
        CHECK(config_error("[grid_mz]\nn = 5..2\n").line == 2);
        CHECK(config_error("[grid_mz]\nn = 0\n").line == 2);
        CHECK(config_error("[grid_mz]\ntrials = 1.5\n").line == 2);
        CHECK(config_error("[grid_mz]\nN = n^2\n").line == 2);
        CHECK(config_error("[maxmin_sandwich]\nA = 0.6\n").line == 2);
        CHECK(config_error("[zygmund_discrete]\nm_max = 1\n").line == 2);
        CHECK(config_error("[spline_bernstein]\nr = 1, 2\n").line == 2);
    }
}

TEST_CASE("settings parsing", "[experiments]")
{
    SECTION("node count rules")
    {
        const auto a = NRule::parse("10n");
        REQUIRE(a);
        CHECK(a->value(3) == 30);
        const auto b = NRule::parse("2n+1");
        REQUIRE(b);
        CHECK(b->value(4) == 9);
        const auto c = NRule::parse("n - 1");
        REQUIRE(c);
        CHECK(c->value(4) == 3);
        const auto d = NRule::parse("40");
        REQUIRE(d);
        CHECK(d->value(7) == 40);
        CHECK_FALSE(NRule::parse("2x"));
    }
    SECTION("integer lists with ranges")
    {
        const auto cfg = parse_config_text("[exp_bernstein]\nn = 1..3, 7\n");
        const auto s = resolve(cfg.sections.at(0));
        CHECK(s.n == std::vector<int>{1, 2, 3, 7});
    }
    SECTION("defaults come from the catalog and globals fill only accepted keys")
    {
        const auto cfg = parse_config_text("seed = 99\n[extremal_bernstein]\n[x]\nexperiment = grid_mz\n");
        const auto a = resolve(cfg.sections.at(0), cfg.globals);
        const auto b = resolve(cfg.sections.at(1), cfg.globals);
        CHECK(a.n.size() == 10);
        CHECK(a.seed == 1);
        CHECK(b.id == "grid_mz");
        CHECK(b.label == "x");
        CHECK(b.seed == 99);
        CHECK(b.N.value(3) == 30);
    }
    SECTION("every catalog entry resolves with its defaults")
    {
        for (const auto& d : experiment_catalog())
            CHECK_NOTHROW(default_settings(d.id));
    }
}

TEST_CASE("list output names ids and theorem labels", "[experiments]")
{
    const auto text = list_experiments();
    CHECK_THAT(text, ContainsSubstring("mz_orlicz_3d → Thm 4.2"));
    CHECK_THAT(text, ContainsSubstring("nikolskii → Thm 7.3"));
    for (const auto& d : experiment_catalog())
        CHECK_THAT(text, ContainsSubstring(d.id));
}

TEST_CASE("csv formatting", "[experiments]")
{
    CHECK(format_csv_number(0.1) == "0.10000000000000001");
    CHECK(format_csv_number(3.0) == "3");
    ExperimentReport rep;
    rep.rows.push_back({"e", "trig", "lp:2", 4, 9, 1.0, 1.0, std::nullopt, 1.0, 0, 10, 7, 0.0});
    const auto csv = to_csv(rep);
    CHECK(csv.rfind(kCsvHeader, 0) == 0);
    CHECK_THAT(csv, ContainsSubstring("e,trig,lp:2,4,9,1,1,,1,0,10,7,0\n"));
}

TEST_CASE("L2 MZ experiment is exact at 2n+1 nodes", "[experiments]")
{
    auto s = default_settings("mz_l2_exact");
    s.trials = 10;
    const auto rep = run_experiment(s, RunContext{1, false});
    REQUIRE(rep.rows.size() == 7);
    CHECK(rep.pass);
    for (const auto& row : rep.rows) {
        CHECK(row.N == 2L * row.n + 1);
        CHECK(std::abs(row.lower_ratio - 1.0) <= 1e-10);
        CHECK(std::abs(row.upper_ratio - 1.0) <= 1e-10);
    }
}

TEST_CASE("reports are deterministic across runs and thread counts", "[experiments]")
{
    for (const char* id : {"mz_orlicz_3d", "zygmund_discrete", "grid_mz", "sharp_orlicz_upper"}) {
        auto s = default_settings(id);
        s.trials = 6;
        s.node_sets = std::min(s.node_sets, 4);
        s.n = {2, 5};
        s.seed = 4242;
        const auto a = to_csv(run_experiment(s, RunContext{1, false}));
        const auto b = to_csv(run_experiment(s, RunContext{1, false}));
        const auto c = to_csv(run_experiment(s, RunContext{4, false}));
        INFO(id);
        CHECK(a == b);
        CHECK(a == c);
        s.seed = 4243;
        CHECK(a != to_csv(run_experiment(s, RunContext{1, false})));
    }
}

TEST_CASE("wall_ms stays zero unless timing is requested", "[experiments]")
{
    auto s = default_settings("nikolskii");
    s.trials = 3;
    s.n = {4};
    for (const auto& row : run_experiment(s, RunContext{1, false}).rows)
        CHECK(row.wall_ms == 0.0);
    for (const auto& row : run_experiment(s, RunContext{1, true}).rows)
        CHECK(row.wall_ms >= 0.0);
}

TEST_CASE("run driver writes per-experiment csv and a summary", "[experiments]")
{
    const auto dir = scratch("driver");
    const auto cfg = parse_config_text("seed = 5\n[small]\nexperiment = mz_l2_exact\nn = 1, 2\ntrials = 3\n"
                                       "[other]\nexperiment = stechkin_boas\ntrials = 4\n");
    RunOptions opt;
    opt.out = dir;
    opt.filter = "sm*";
    std::ostringstream log, err;
    CHECK(run_config(cfg, opt, log, err) == kExitPass);
    CHECK(std::filesystem::exists(dir / "small.csv"));
    CHECK_FALSE(std::filesystem::exists(dir / "other.csv"));
    const auto summary = slurp(dir / "summary.csv");
    CHECK(summary.rfind("experiment,id,status,rows,violations,detail\n", 0) == 0);
    CHECK_THAT(summary, ContainsSubstring("small,mz_l2_exact,pass,2,0,"));
    const auto first = slurp(dir / "small.csv");
    CHECK(run_config(cfg, opt, log, err) == kExitPass);
    CHECK(slurp(dir / "small.csv") == first);
}

TEST_CASE("failing criteria give exit code 1", "[experiments]")
{
    const auto dir = scratch("fail");
    // slope window that no decay rate can satisfy
    const auto cfg = parse_config_text("[lagrange_error]\nn = 8, 16\nslope = 5:6\n");
    RunOptions opt;
    opt.out = dir;
    std::ostringstream log, err;
    CHECK(run_config(cfg, opt, log, err) == kExitFail);
    CHECK_THAT(slurp(dir / "summary.csv"), ContainsSubstring("lagrange_error,lagrange_error,fail"));
}

TEST_CASE("command line exit codes", "[experiments]")
{
    const auto dir = scratch("cli");
    const auto good = dir / "good.cfg";
    const auto bad = dir / "bad.cfg";
    std::ofstream(good) << "seed = 11\n[mz_l2_exact]\nn = 1, 3\ntrials = 2\n";
    std::ofstream(bad) << "[mz_orlicz_3d]\nspec = lp:-1\n";
    const auto out = (dir / "out").string();
    const auto log = (dir / "log.txt").string();

    CHECK(shell(cli() + " run --config " + good.string() + " --out " + out + " > " + log + " 2>&1") == 0);
    CHECK(std::filesystem::exists(dir / "out" / "mz_l2_exact.csv"));

    CHECK(shell(cli() + " run --config " + bad.string() + " --out " + out + " > " + log + " 2>&1") == 2);
    CHECK_THAT(slurp(log), ContainsSubstring("bad.cfg:2:8:"));

    CHECK(shell(cli() + " run --config " + (dir / "missing.cfg").string() + " > " + log + " 2>&1") == 2);
    CHECK(shell(cli() + " run --bogus > " + log + " 2>&1") == 2);

    CHECK(shell(cli() + " list > " + log + " 2>&1") == 0);
    CHECK_THAT(slurp(log), ContainsSubstring("nikolskii → Thm 7.3"));

    CHECK(shell(cli() + " constants grid_mz A=0.5 > " + log + " 2>&1") == 0);
    const auto consts = slurp(log);
    CHECK_THAT(consts, ContainsSubstring("id,grid_mz"));
    CHECK_THAT(consts, ContainsSubstring("high,"));

    CHECK(shell(cli() + " nodes trig --n 3 > " + log + " 2>&1") == 0);
    CHECK(shell(cli() + " nodes nope > " + log + " 2>&1") == 2);
}
