#pragma once

// Closed-form results for a point release near fully-absorbing spheres:
// the single-receiver hitting rate and its time integral, the kernel's
// Laplace transform, the two-receiver image series and the t -> infinity
// limits.

#include <cstddef>

namespace mcmimo::analytic {

/// Parameters of f(d, t): release at distance d from the center of a
/// sphere of radius R in a medium with diffusion coefficient D.
/// Requires d > R > 0 and D > 0.
struct HittingKernel {
    double distance = 0.0;
    double radius = 0.0;
    double diffusion = 0.0;
};

/// Throws std::invalid_argument if the kernel invariants do not hold.
void check(const HittingKernel& k);

/// Probability density (1/s) that a molecule released at t = 0 is absorbed
/// at time t. Zero for t <= 0 (continuous extension).
[[nodiscard]] double hitting_rate(const HittingKernel& k, double t);

/// Fraction of released molecules absorbed by time t: (R/d) erfc((d-R)/(2 sqrt(D t))).
[[nodiscard]] double hit_probability(const HittingKernel& k, double t);

/// Time integral of hit_probability over [0, t]. Used for exact cell
/// averages of the cumulative kernel.
[[nodiscard]] double hit_probability_integral(const HittingKernel& k, double t);

/// Expected number of molecules absorbed by time t out of n_released.
[[nodiscard]] double cumulative_siso(const HittingKernel& k, double n_released, double t);

/// Laplace transform of the hitting rate on the real axis, s >= 0.
[[nodiscard]] double kernel_laplace(const HittingKernel& k, double s);

/// n_released * R / d.
[[nodiscard]] double siso_asymptote(const HittingKernel& k, double n_released);

/// Two equal receivers and one transmitter. d12 and d21 coincide under the
/// center approximation but are carried separately.
struct SitoGeometry {
    double d1 = 0.0;   // transmitter to C1
    double d2 = 0.0;   // transmitter to C2
    double d12 = 0.0;  // C1 to (negative source of) R2
    double d21 = 0.0;  // C2 to (negative source of) R1
    double radius = 0.0;

    /// The same geometry seen from receiver 2.
    [[nodiscard]] SitoGeometry swapped() const { return {d2, d1, d21, d12, radius}; }
};

/// R^2 / (d12 d21); the image series converges iff this is below one.
[[nodiscard]] double series_ratio(const SitoGeometry& g);

struct SeriesOptions {
    double tolerance = 1e-10;        // tail bound, relative to the leading term
    std::size_t max_terms = 200;
};

struct SeriesResult {
    double value = 0.0;
    std::size_t terms = 0;   // n = 0 .. terms-1 were summed
    double tail_bound = 0.0; // absolute bound on the omitted remainder
    bool capped = false;     // max_terms was reached before the tolerance
};

/// Expected cumulative count at receiver 1 at time t from the image series.
/// Throws std::domain_error when series_ratio(g) >= 1.
[[nodiscard]] SeriesResult sito_series(const SitoGeometry& g, double n_released,
                                       double diffusion, double t,
                                       const SeriesOptions& options = {});

/// Fixed number of terms, no tolerance test.
[[nodiscard]] SeriesResult sito_series_terms(const SitoGeometry& g, double n_released,
                                             double diffusion, double t, std::size_t n_terms);

/// Limit of sito_series as t -> infinity. Throws std::domain_error when
/// series_ratio(g) >= 1.
[[nodiscard]] double sito_asymptote(const SitoGeometry& g, double n_released);

}  // namespace mcmimo::analytic
