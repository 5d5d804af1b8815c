#pragma once

// Time-domain solution of the coupled absorption-rate system
//
//   n_i(t) = N_T sum_m f(d_{m,i}, t) - sum_{j != i} (n_j * f_{i,j})(t)
//
// for p receivers and q transmitters, where f_{i,j} is the hitting kernel of
// receiver i (its own radius) seen from the center of receiver j.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcmimo/analytic.hpp"
#include "mcmimo/geometry.hpp"
#include "mcmimo/matrix.hpp"
#include "mcmimo/time_grid.hpp"

namespace mcmimo::volterra {

using mcmimo::TimeGrid;

enum class Quadrature {
    /// Kernels sampled at grid points, trapezoidal convolution, explicit
    /// marching. Second order when every kernel is resolved by dt.
    kTrapezoid,
    /// Cumulative form with piecewise-constant rates and exact cell averages
    /// of the cumulative kernel. Conserves kernel mass for any dt, so it stays
    /// accurate when dt is far coarser than the kernel peaks. One small
    /// linear solve per step.
    kProductIntegration,
};

[[nodiscard]] const char* to_string(Quadrature q);
[[nodiscard]] Quadrature quadrature_from_string(const std::string& name);

struct TransientOptions {
    Quadrature quadrature = Quadrature::kProductIntegration;
    /// Product integration recovers rates with a second O(K^2) pass; skip it
    /// when only cumulative counts are needed.
    bool compute_rates = true;
};

/// Raised when dt is coarser than (gap^2)/(60 D) for some kernel pair.
struct ResolutionWarning {
    std::size_t receiver = 0;
    std::size_t source = 0;          // transmitter or receiver index
    bool source_is_transmitter = true;
    double recommended_dt = 0.0;
    double dt = 0.0;

    [[nodiscard]] std::string message() const;
};

struct AbsorptionSeries {
    TimeGrid grid;
    Matrix rates;       // p x (n_steps + 1), molecules per second
    Matrix cumulative;  // p x (n_steps + 1), expected counts
    std::vector<ResolutionWarning> warnings;

    [[nodiscard]] std::size_t num_receivers() const { return cumulative.rows(); }
};

class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}
    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Largest dt recommended for resolving the sharpest kernel, and the pair
/// that sets it.
[[nodiscard]] ResolutionWarning recommended_step(const Topology& topology);

/// Throws TopologyError for an invalid topology, std::invalid_argument for a
/// bad grid or a negative N_T, NumericalError on a non-finite value.
[[nodiscard]] AbsorptionSeries solve_transient(const Topology& topology, const TimeGrid& grid,
                                               const TransientOptions& options = {});

/// Trapezoidal approximation of int_0^{t_k} n_j(u) f(t_k - u) du from grid
/// samples. kernel_samples[l] = f(l dt); kernel_samples[0] must be zero, so
/// rates_j[k] carries no weight and only samples 0..k-1 are read.
[[nodiscard]] double convolve_step(std::span<const double> rates_j,
                                   std::span<const double> kernel_samples, double dt,
                                   std::size_t k);

/// As above, sampling the kernel on the fly.
[[nodiscard]] double convolve_step(std::span<const double> rates_j,
                                   const analytic::HittingKernel& kernel, const TimeGrid& grid,
                                   std::size_t k);

}  // namespace mcmimo::volterra
