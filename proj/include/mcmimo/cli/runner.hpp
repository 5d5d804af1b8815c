#pragma once
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcmimo/cli/config.hpp"
#include "mcmimo/cli/csv.hpp"

namespace mcmimo::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,    // I/O and anything unexpected
    kExitUsage = 2,      // bad command line or config
    kExitData = 3,       // topology failed validation
    kExitNumerical = 4,  // solver failure
};

struct Overrides {
    std::optional<std::filesystem::path> out;
    std::optional<std::vector<std::string>> methods;
    std::optional<std::uint64_t> seed;
};

void apply(ScenarioConfig& config, const Overrides& overrides);

/// Rows for every (omega, d_c1c2) point x method x receiver x report time.
/// Points run on up to `workers` threads (0: hardware concurrency); the
/// returned rows are sorted. Warnings are collected per point in point order.
[[nodiscard]] std::vector<SweepRow> run_sweep(const ScenarioConfig& config,
                                              std::vector<std::string>& warnings,
                                              unsigned workers = 0);

/// Runs one subcommand end to end, writing results, config.echo.json and
/// run.log into the output directory. Diagnostics go to `err`.
[[nodiscard]] int run(const std::string& subcommand, const std::filesystem::path& config_path,
                      const Overrides& overrides, std::ostream& err);

}  // namespace mcmimo::cli
