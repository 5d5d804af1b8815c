#include "mcmimo/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mcmimo::analytic {

namespace {

// (d - R) / (2 sqrt(D)), so the erfc argument is this over sqrt(t).
double scaled_gap(const HittingKernel& k) {
    return (k.distance - k.radius) / (2.0 * std::sqrt(k.diffusion));
}

void check_series_geometry(const SitoGeometry& g) {
    if (!(g.d1 > 0.0 && g.d2 > 0.0 && g.d12 > 0.0 && g.d21 > 0.0 && g.radius > 0.0))
        throw std::invalid_argument("SitoGeometry distances and radius must be positive");
    if (!(series_ratio(g) < 1.0))
        throw std::domain_error("image series diverges: R^2/(d12 d21) >= 1");
}

}  // namespace

void check(const HittingKernel& k) {
    if (!(k.radius > 0.0 && k.distance > k.radius && k.diffusion > 0.0))
        throw std::invalid_argument("HittingKernel requires d > R > 0 and D > 0");
}

double hitting_rate(const HittingKernel& k, double t) {
    if (!(t > 0.0)) return 0.0;
    const double gap = k.distance - k.radius;
    const double prefactor =
        k.radius * gap / (k.distance * std::sqrt(4.0 * std::numbers::pi * k.diffusion));
    // t^{-3/2} folded into the exponent so tiny t cannot produce inf * 0
    return prefactor * std::exp(-gap * gap / (4.0 * k.diffusion * t) - 1.5 * std::log(t));
}

double hit_probability(const HittingKernel& k, double t) {
    if (!(t > 0.0)) return 0.0;
    return k.radius / k.distance * std::erfc(scaled_gap(k) / std::sqrt(t));
}

double hit_probability_integral(const HittingKernel& k, double t) {
    if (!(t > 0.0)) return 0.0;
    // d/dt [(t + 2c^2) erfc(c/sqrt t) - 2c sqrt(t/pi) exp(-c^2/t)] = erfc(c/sqrt t)
    const double c = scaled_gap(k);
    const double x = c / std::sqrt(t);
    const double value = (t + 2.0 * c * c) * std::erfc(x) -
                         2.0 * c * std::sqrt(t / std::numbers::pi) * std::exp(-x * x);
    return k.radius / k.distance * value;
}

double cumulative_siso(const HittingKernel& k, double n_released, double t) {
    return n_released * hit_probability(k, t);
}

double kernel_laplace(const HittingKernel& k, double s) {
    if (s < 0.0) throw std::domain_error("kernel_laplace is defined for s >= 0 only");
    const double ratio = k.radius / k.distance;
    if (s == 0.0) return ratio;
    return ratio * std::exp(-(k.distance - k.radius) / std::sqrt(k.diffusion) * std::sqrt(s));
}

double siso_asymptote(const HittingKernel& k, double n_released) {
    return n_released * k.radius / k.distance;
}

double series_ratio(const SitoGeometry& g) { return g.radius * g.radius / (g.d12 * g.d21); }

SeriesResult sito_series_terms(const SitoGeometry& g, double n_released, double diffusion,
                               double t, std::size_t n_terms) {
    check_series_geometry(g);
    const double ratio = series_ratio(g);
    const double r = g.radius;
    const double direct = n_released * r / g.d1;
    const double relayed = n_released * r * r / (g.d12 * g.d2);
    const double lag = g.d12 + g.d21 - 2.0 * r;
    const double scale = t > 0.0 ? 2.0 * std::sqrt(diffusion * t) : 0.0;

    auto erfc_at = [&](double gap) { return scale > 0.0 ? std::erfc(gap / scale) : 0.0; };

    SeriesResult out;
    double weight = 1.0;
    for (std::size_t n = 0; n < n_terms; ++n) {
        const double shift = static_cast<double>(n) * lag;
        out.value += weight * (direct * erfc_at((g.d1 - r) + shift) -
                               relayed * erfc_at((g.d12 + g.d2 - 2.0 * r) + shift));
        weight *= ratio;
    }
    out.terms = n_terms;
    // Every erfc factor is at most one, so the remainder is bounded by a geometric tail.
    out.tail_bound = weight / (1.0 - ratio) * (direct + relayed);
    return out;
}

SeriesResult sito_series(const SitoGeometry& g, double n_released, double diffusion, double t,
                         const SeriesOptions& options) {
    check_series_geometry(g);
    const double ratio = series_ratio(g);
    const double leading = n_released * g.radius / g.d1 +
                           n_released * g.radius * g.radius / (g.d12 * g.d2);
    const double target = options.tolerance * leading;

    std::size_t n = 1;
    double weight = ratio;
    while (n < options.max_terms && weight / (1.0 - ratio) * leading > target) {
        weight *= ratio;
        ++n;
    }
    SeriesResult out = sito_series_terms(g, n_released, diffusion, t, n);
    out.capped = out.tail_bound > target;
    return out;
}

double sito_asymptote(const SitoGeometry& g, double n_released) {
    check_series_geometry(g);
    const double r = g.radius;
    const double coupling = g.d12 * g.d21;
    return n_released * r * (g.d12 * g.d2 - r * g.d1) / (g.d1 * g.d2 * g.d12) *
           (coupling / (coupling - r * r));
}

}  // namespace mcmimo::analytic
