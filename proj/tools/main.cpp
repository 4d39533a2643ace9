#include <iostream>

#include <CLI11.hpp>

#include "cellhom/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cellhom: periodic cell-problem homogenization experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int jobs = 0;
    bool no_cache = false;

    app.add_option("--config", config_path, "experiment config file");
    app.add_option("--out", out_dir, "results directory (overrides config)");
    auto* seed_opt = app.add_option("--seed", seed, "rng seed (overrides config)");
    auto* jobs_opt = app.add_option("--jobs", jobs, "parallel jobs (overrides config)");
    app.add_flag("--no-cache", no_cache, "recompute even on a cache hit");

    const char* commands[] = {"eval",  "cell",   "homogenize", "radial",
                              "delta", "verify", "gamma",      "qcx"};
    const char* help[] = {
        "pointwise W/G/g values on the xi list",
        "one cell problem per xi",
        "multi-cell homogenized density over the xi set",
        "radial boundary-extension sweep",
        "ru-usc modulus suite",
        "domain and integrand structure suite",
        "Gamma-convergence diagnostics",
        "pointwise quasiconvexification"};
    for (int i = 0; i < 8; ++i) app.add_subcommand(commands[i], help[i]);

    CLI11_PARSE(app, argc, argv);

    cellhom::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = cellhom::load_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    cellhom::RunFlags flags;
    if (!out_dir.empty()) flags.out = out_dir;
    if (seed_opt->count() > 0) flags.seed = seed;
    if (jobs_opt->count() > 0) flags.jobs = jobs;
    flags.no_cache = no_cache;

    const std::string command = app.get_subcommands().front()->get_name();
    return cellhom::run_command(command, cfg, flags, std::cout);
}
