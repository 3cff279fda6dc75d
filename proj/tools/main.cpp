#include <iostream>

#include "CLI11.hpp"

#include "cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cutofflab: exact analysis of finite Markov chains"};
    app.require_subcommand(1);

    std::string config, out = "-", family, sizes;
    double t0 = 0.0, t1 = 10.0, epsilon = 0.25;
    int steps = 101;

    auto* analyze = app.add_subcommand("analyze", "full JSON report for one model");
    analyze->add_option("config", config, "JSON config")->required();
    analyze->add_option("-o,--out", out, "output path, '-' for stdout");

    auto* profile = app.add_subcommand("profile", "CSV of distance, entropy and varentropy on a time grid");
    profile->add_option("config", config, "JSON config")->required();
    profile->add_option("--t0", t0, "first time");
    profile->add_option("--t1", t1, "last time");
    profile->add_option("--steps", steps, "grid points");
    profile->add_option("-o,--out", out, "output path, '-' for stdout");

    auto* sweep = app.add_subcommand("sweep", "mixing-time trend table over a model family");
    sweep->add_option("family", family, "cube, cycle, rank_one, random_cayley or exclusion")->required();
    sweep->add_option("sizes", sizes, "comma-separated sizes")->required();
    sweep->add_option("--epsilon", epsilon, "precision in (0, 1/2)");
    sweep->add_option("-o,--out", out, "output path, '-' for stdout");

    auto* verify = app.add_subcommand("verify", "run the inequality battery, one line per check");
    verify->add_option("config", config, "JSON config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    using namespace cutofflab::cli;
    if (*analyze) return cmd_analyze(config, out);
    if (*profile) return cmd_profile(config, t0, t1, steps, out);
    if (*sweep) return cmd_sweep(family, sizes, epsilon, out);
    return cmd_verify(config, std::cout);
}
