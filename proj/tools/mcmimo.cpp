// mcmimo: batch front-end for the absorbing-receiver channel solvers.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcmimo/cli/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Molecular-communication MIMO channels with absorbing receivers"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::vector<std::string> methods;
    std::uint64_t seed = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"asymptotic", "absorbed counts as t -> infinity"},
        {"transient", "time-domain absorbed counts from the coupled solver"},
        {"simulate", "particle-based Monte Carlo estimate"},
        {"sweep", "omega x d_c1c2 sweep over the requested methods"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "scenario config (JSON)")->required();
        sub->add_option("--out", out, "output directory (overrides output.directory)");
        sub->add_option("--methods", methods, "asymptotic,volterra,series,montecarlo")->delimiter(',');
        sub->add_option("--seed", seed, "Monte Carlo seed (overrides montecarlo.seed)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e);
        return status == 0 ? 0 : mcmimo::cli::kExitUsage;
    }

    const auto* sub = app.get_subcommands().front();
    mcmimo::cli::Overrides overrides;
    if (sub->count("--out")) overrides.out = out;
    if (sub->count("--methods")) overrides.methods = methods;
    if (sub->count("--seed")) overrides.seed = seed;
    return mcmimo::cli::run(sub->get_name(), config, overrides, std::cerr);
}
