#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "mzlab/experiments.hpp"

namespace {

int cmd_constants(const std::string& id, const std::vector<std::string>& params)
{
    mzlab::ConstantParams p;
    for (const auto& kv : params) {
        const auto eq = kv.find('=');
        const auto v = eq == std::string::npos ? std::nullopt : mzlab::detail::parse_double(kv.substr(eq + 1));
        if (!v) {
            std::cerr << "constants: expected key=value, got '" << kv << "'\n";
            return mzlab::kExitParse;
        }
        p[kv.substr(0, eq)] = *v;
    }
    try {
        std::cout << mzlab::constants_text(id, p);
    } catch (const mzlab::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return mzlab::kExitParse;
    }
    return mzlab::kExitPass;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mzlab: Marcinkiewicz-Zygmund inequality lab"};
    app.fallthrough();

    std::string config;
    mzlab::RunOptions opt;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "run the experiments of a config file");
    run->add_option("--config", config, "config file")->required();
    run->add_option("--out", out_dir, "output directory for CSV files");
    run->add_option("--jobs", opt.jobs, "worker threads per experiment")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "master seed overriding the config");
    run->add_option("--filter", opt.filter, "glob on section names or experiment ids");
    run->add_flag("--timing", opt.timing, "fill the wall_ms column (breaks byte-identical output)");

    app.add_subcommand("list", "list experiment ids");

    std::string const_id;
    std::vector<std::string> const_params;
    auto* constants = app.add_subcommand("constants", "print closed-form bounds, e.g. constants grid_mz A=0.6");
    constants->add_option("id", const_id, "theorem id")->required();
    constants->add_option("params", const_params, "key=value parameters");

    mzlab::NodesRequest nq;
    auto* nodes = app.add_subcommand("nodes", "dump a node system as CSV");
    nodes->add_option("kind", nq.kind, "trig | equispaced | perturbed | random | gauss | chebyshev")->required();
    nodes->add_option("--n", nq.n, "degree");
    nodes->add_option("--N", nq.N, "node count (equispaced, random, chebyshev)");
    nodes->add_option("--sigma", nq.sigma, "perturbation (perturbed)");
    nodes->add_option("--seed", nq.seed, "seed (perturbed, random)");
    nodes->add_option("--alpha", nq.alpha, "Jacobi alpha (gauss)");
    nodes->add_option("--beta", nq.beta, "Jacobi beta (gauss)");

    app.require_subcommand(1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return mzlab::kExitParse;
    }

    if (app.got_subcommand("list")) {
        std::cout << mzlab::list_experiments();
        return mzlab::kExitPass;
    }
    if (app.got_subcommand("constants"))
        return cmd_constants(const_id, const_params);
    if (app.got_subcommand("nodes")) {
        try {
            std::cout << mzlab::to_csv(mzlab::make_node_system(nq));
        } catch (const mzlab::ValidationError& e) {
            std::cerr << e.what() << '\n';
            return mzlab::kExitParse;
        }
        return mzlab::kExitPass;
    }

    opt.out = out_dir;
    if (*seed_opt)
        opt.seed = seed;
    try {
        const auto cfg = mzlab::load_config(config);
        return mzlab::run_config(cfg, opt, std::cout, std::cerr);
    } catch (const mzlab::ConfigError& e) {
        std::cerr << config << ':' << e.line << ':' << e.col << ": " << e.message << '\n';
        return mzlab::kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mzlab::kExitNumerical;
    }
}
