#pragma once

// Brownian-dynamics simulation of molecules released at the transmitters and
// trapped by fully-absorbing spherical receivers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcmimo/geometry.hpp"
#include "mcmimo/philox.hpp"
#include "mcmimo/time_grid.hpp"

namespace mcmimo::montecarlo {

struct McConfig {
    double dt_sim = 1e-4;        // s
    double t_max = 100.0;        // s
    double record_dt = 1.0;      // s, must be a whole multiple of dt_sim
    std::uint64_t particles_per_transmitter = 10000;
    std::uint64_t seed = 1;
    bool boundary_correction = true;
    /// Move particles that are far from every receiver with one exact
    /// Gaussian displacement spanning many dt_sim steps. The leap is only
    /// taken while every receiver surface is at least kLeapSafety leap
    /// standard deviations away.
    bool far_field_leap = true;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
};

inline constexpr double kLeapSafety = 10.0;

/// Throws std::invalid_argument if the configuration is unusable.
void check(const McConfig& cfg);

struct McEstimate {
    TimeGrid grid;  // recording grid
    /// absorbed[i][k]: molecules trapped by receiver i up to grid.time(k)
    std::vector<std::vector<std::uint64_t>> absorbed;
    std::uint64_t total_particles = 0;
    McConfig config;
    std::vector<std::string> warnings;
};

/// Topology geometry must validate; D may be zero (nothing moves).
[[nodiscard]] McEstimate simulate(const Topology& topology, const McConfig& cfg);

/// Source of the uniform draw used by the boundary-crossing test.
struct StepDraw {
    double uniform = 0.5;
};

/// Decides which receiver, if any, traps a particle moving from `start` to
/// `end` during one step of length dt. Receivers containing `end` win first
/// (ties go to the surface closest to `start`); otherwise, with the
/// correction on, the receiver nearest to `start` traps it with probability
/// exp(-a b / (D dt)), a and b being the start and end distances to its surface.
[[nodiscard]] std::optional<std::size_t> assign_absorption(const Point3& start, const Point3& end,
                                                           const Topology& topology, double dt,
                                                           bool boundary_correction,
                                                           StepDraw draw);

/// The crossing probability used by assign_absorption.
[[nodiscard]] double crossing_probability(double start_gap, double end_gap, double diffusion,
                                          double dt);

}  // namespace mcmimo::montecarlo
