#pragma once
// Scenario configuration files (JSON). See docs/config.md for the schema.
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mcmimo/geometry.hpp"
#include "mcmimo/volterra.hpp"

namespace mcmimo::cli {

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExplicitTopology {
    std::vector<Point3> transmitters;
    std::vector<Receiver> receivers;
    bool operator==(const ExplicitTopology&) const = default;
};

/// Transmitter at the origin, R1 at (d1, 0, 0), R2 at distance d_c1c2 from
/// C1 and angle omega from the C1 -> T direction; optional second transmitter.
struct ParametricTopology {
    double d1 = 6.0;
    std::vector<double> d_c1c2{4.0, 8.0, 12.0};
    std::vector<double> omega_deg;  // filled with the default grid when absent
    std::optional<Point3> t2;
    double radius = 1.0;
    bool operator==(const ParametricTopology&) const = default;
};

/// 13 points, 0 to 180 degrees.
[[nodiscard]] std::vector<double> default_omega_grid();

struct SolverSettings {
    double dt = 0.01;
    double t_max = 300.0;
    volterra::Quadrature scheme = volterra::Quadrature::kProductIntegration;
    std::vector<double> report_times;  // defaults to {t_max}
    bool operator==(const SolverSettings&) const = default;
};

struct MonteCarloSettings {
    double dt_sim = 1e-4;
    double record_dt = 1.0;
    std::optional<double> t_max;  // defaults to the solver horizon
    std::uint64_t particles = 10000;
    std::uint64_t seed = 1;
    bool boundary_correction = true;
    bool operator==(const MonteCarloSettings&) const = default;
};

struct ScenarioConfig {
    double diffusion_coefficient = 79.4;
    double molecules_per_release = 1e4;
    std::variant<ExplicitTopology, ParametricTopology> topology;
    SolverSettings solver;
    MonteCarloSettings montecarlo;
    std::vector<std::string> methods{"asymptotic", "volterra"};
    std::string output_directory = "out";
    bool operator==(const ScenarioConfig&) const = default;

    [[nodiscard]] double mc_t_max() const { return montecarlo.t_max.value_or(solver.t_max); }
};

/// Method tags accepted by the sweep; "transient" is an alias of "volterra".
[[nodiscard]] std::string canonical_method(const std::string& name);

[[nodiscard]] ScenarioConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);
/// Fully resolved form; parse_config(to_json(c)) == c.
[[nodiscard]] nlohmann::json to_json(const ScenarioConfig& config);

/// Checks ranges and cross-field constraints. Geometry feasibility is left to
/// topology validation.
void check(const ScenarioConfig& config);

struct ScenarioPoint {
    double omega_deg = 0.0;  // NaN-free; 0 for explicit topologies
    double d_c1c2 = 0.0;
    Topology topology;
};

/// One point per (omega, d_c1c2) in that order, or the single explicit topology.
[[nodiscard]] std::vector<ScenarioPoint> expand(const ScenarioConfig& config);

}  // namespace mcmimo::cli
