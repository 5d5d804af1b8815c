#pragma once

#include <cstddef>

namespace mcmimo {

/// Uniform grid t_k = k * dt, k = 0 .. n_steps.
struct TimeGrid {
    double dt = 0.0;
    std::size_t n_steps = 0;

    [[nodiscard]] double time(std::size_t k) const { return static_cast<double>(k) * dt; }
    [[nodiscard]] double end() const { return time(n_steps); }
    [[nodiscard]] std::size_t size() const { return n_steps + 1; }

    /// Grid with the given step covering [0, t_max]; t_max is rounded to the
    /// nearest whole number of steps.
    [[nodiscard]] static TimeGrid covering(double t_max, double dt);

    bool operator==(const TimeGrid&) const = default;
};

/// Throws std::invalid_argument unless dt > 0 and n_steps >= 1.
void check(const TimeGrid& grid);

}  // namespace mcmimo
