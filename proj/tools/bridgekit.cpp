// bridgekit bridge|verify|limits --config <path> [--out <dir>] [--suite <name>] [--eps <list>]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bridgekit/cli/commands.hpp"
#include "bridgekit/cli/config.hpp"

int main(int argc, char** argv) {
    using namespace bridgekit::cli;

    CLI::App app{"Entropic interpolations between Gaussians: figures, verification suites, small-noise limits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string suite = "all";
    std::string eps = "1,0.5,0.2,0.1,0.05";

    auto* bridge = app.add_subcommand("bridge", "closed-form moments and densities (moments.csv, density_t*.csv, bridge.svg)");
    auto* verify = app.add_subcommand("verify", "run a verification suite and write report.csv");
    auto* limits = app.add_subcommand("limits", "scaled entropic cost against W2^2/2 over an eps sweep");
    for (auto* sub : {bridge, verify, limits}) {
        sub->add_option("--config", config_path, "key = value problem file")->required();
        sub->add_option("--out", out_dir, "output directory");
    }
    verify->add_option("--suite", suite, "duality, decomposition, contraction or all");
    limits->add_option("--eps", eps, "comma separated, strictly descending");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    return run_guarded([&] {
        const ProblemConfig config = load_config(config_path);
        if (bridge->parsed()) return cmd_bridge(config, out_dir);
        if (verify->parsed()) return cmd_verify(config, parse_suite(suite), out_dir);
        return cmd_limits(config, parse_epsilon_list(eps), out_dir);
    });
}
