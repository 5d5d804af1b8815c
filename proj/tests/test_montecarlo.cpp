#include "doctest.h"

#include <cmath>
#include <random>

#include "mcmimo/analytic.hpp"
#include "mcmimo/montecarlo.hpp"
#include "mcmimo/philox.hpp"

using namespace mcmimo;
using namespace mcmimo::montecarlo;

namespace {

Topology siso() {
    Topology t;
    t.transmitters = {{0, 0, 0}};
    t.receivers = {{{6, 0, 0}, 1.0}};
    return t;
}

McConfig quick(double t_max, double dt, std::uint64_t particles, std::uint64_t seed = 1) {
    McConfig cfg;
    cfg.t_max = t_max;
    cfg.dt_sim = dt;
    cfg.record_dt = t_max / 10.0;
    cfg.particles_per_transmitter = particles;
    cfg.seed = seed;
    cfg.workers = 1;
    return cfg;
}

double final_count(const McEstimate& e, std::size_t receiver) {
    return static_cast<double>(e.absorbed[receiver].back());
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using rng::philox4x32_10;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
          rng::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                        {0xffffffffu, 0xffffffffu}) ==
          rng::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                        {0xa4093822u, 0x299f31d0u}) ==
          rng::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("particle streams are reproducible and roughly normal") {
    rng::ParticleStream a(42, 0, 7), b(42, 0, 7), c(42, 1, 7);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        differs = differs || x != c.normal();
    }
    CHECK(differs);

    rng::ParticleStream s(1, 0, 0);
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        sum += x;
        sq += x * x;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.01);
    rng::ParticleStream u(9, 0, 0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK(x > 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("assign_absorption") {
    Topology t;
    t.transmitters = {{0, 0, 0}};
    t.receivers = {{{6, 0, 0}, 1.0}, {{0, 20, 0}, 1.0}};
    t.diffusion_coefficient = 79.4;
    const double dt = 1e-4;
    const double sigma = std::sqrt(2 * 79.4 * dt);

    CHECK(assign_absorption({4.9, 0, 0}, {5.5, 0, 0}, t, dt, false, {0.5}) == std::size_t{0});
    CHECK(assign_absorption({4.9, 0, 0}, {4.95, 0, 0}, t, dt, false, {0.0}) == std::nullopt);

    // far from every surface: the crossing probability underflows
    const Point3 far_start{0, 0, 0}, far_end{0.1, 0, 0};
    CHECK(6 * sigma < 4.9);
    CHECK(assign_absorption(far_start, far_end, t, dt, true, {1e-9}) == std::nullopt);
    CHECK(crossing_probability(6 * sigma, 6 * sigma, 79.4, dt) < 1e-9);

    // straddling step with equal start and end gaps
    const double a = 0.1;
    const double expected = std::exp(-a * a / (79.4 * dt));
    CHECK(crossing_probability(a, a, 79.4, dt) == doctest::Approx(expected));
    const Point3 s{5.0 - a, 0, 0}, e{6.0, 1.0 + a, 0};
    CHECK(distance(e, t.receivers[0].center) - 1.0 == doctest::Approx(a));
    CHECK(assign_absorption(s, e, t, dt, true, {expected * 0.999}) == std::size_t{0});
    CHECK(assign_absorption(s, e, t, dt, true, {expected * 1.001}) == std::nullopt);

    // containment beats the crossing test on a nearer sphere
    Topology two;
    two.receivers = {{{0, 0, 0}, 1.0}, {{2.5, 0, 0}, 1.0}};
    two.transmitters = {{10, 0, 0}};
    two.diffusion_coefficient = 79.4;
    CHECK(assign_absorption({1.2, 0, 0}, {1.55, 0, 0}, two, dt, true, {0.0}) == std::size_t{1});
    CHECK(assign_absorption({1.2, 0, 0}, {1.4, 0, 0}, two, dt, true, {0.0}) == std::size_t{0});
}

TEST_CASE("bridge crossing probability matches a densely stepped bridge") {
    // 1D Brownian bridge from a to b (both above a wall at 0) over one step
    // with D = 1, dt = 1, sampled on a fine sub-grid.
    const double a = 0.5, b = 0.5, dt = 1.0, diffusion = 1.0;
    const int paths = 4000, sub = 10000;
    std::mt19937_64 gen(17);
    std::normal_distribution<double> normal;
    const double h = dt / sub;
    int crossed = 0;
    for (int n = 0; n < paths; ++n) {
        double w = 0.0;
        bool hit = false;
        std::vector<double> walk(sub + 1, 0.0);
        for (int k = 1; k <= sub; ++k) walk[k] = walk[k - 1] + std::sqrt(2 * diffusion * h) * normal(gen);
        for (int k = 0; k <= sub && !hit; ++k) {
            const double frac = static_cast<double>(k) / sub;
            w = a + (b - a) * frac + walk[k] - frac * walk[sub];
            hit = w <= 0.0;
        }
        crossed += hit;
    }
    const double estimate = static_cast<double>(crossed) / paths;
    CHECK(estimate == doctest::Approx(crossing_probability(a, b, diffusion, dt)).epsilon(0.03 / 0.78));
}

TEST_CASE("no motion means no absorption") {
    Topology t = siso();
    t.diffusion_coefficient = 0.0;
    const auto est = simulate(t, quick(1.0, 1e-3, 100));
    CHECK(final_count(est, 0) == 0.0);
}

TEST_CASE("simulated single-receiver counts agree with the closed form") {
    const auto cfg = quick(10.0, 1e-4, 4000, 5);
    const auto est = simulate(siso(), cfg);
    const double p = analytic::hit_probability({6.0, 1.0, 79.4}, 10.0);
    const double n = 4000.0;
    const double band = 3.0 * std::sqrt(n * p * (1 - p)) + 0.02 * n * p;
    CHECK(std::abs(final_count(est, 0) - n * p) <= band);
    CHECK(est.grid.n_steps == 10);
    CHECK(est.warnings.empty());
}

TEST_CASE("counts are deterministic and independent of the worker count") {
    Topology t = build_sito_scenario(6.0, 4.0, 0.3);
    auto cfg = quick(2.0, 1e-3, 500, 77);
    const auto one = simulate(t, cfg);
    cfg.workers = 3;
    const auto three = simulate(t, cfg);
    CHECK(one.absorbed == three.absorbed);
    cfg.seed = 78;
    CHECK(simulate(t, cfg).absorbed != one.absorbed);
}

TEST_CASE("absorbed counts are monotone and bounded") {
    Topology t = build_mimo_scenario(6.0, 4.0, 0.0, {6, 6, 0});
    const auto est = simulate(t, quick(5.0, 1e-3, 1000, 3));
    std::uint64_t total = 0;
    for (const auto& series : est.absorbed) {
        CHECK(series.front() == 0);
        for (std::size_t k = 1; k < series.size(); ++k) CHECK(series[k] >= series[k - 1]);
        total += series.back();
    }
    CHECK(total <= est.total_particles);
    CHECK(est.total_particles == 2000);
}

TEST_CASE("far-apart subsystems do not interact") {
    Topology joint;
    joint.transmitters = {{0, 0, 0}, {1e4, 0, 0}};
    joint.receivers = {{{4, 0, 0}, 1.0}, {{1e4 + 4, 0, 0}, 1.0}};
    Topology alone;
    alone.transmitters = {{0, 0, 0}};
    alone.receivers = {{{4, 0, 0}, 1.0}};

    const auto cfg = quick(5.0, 1e-3, 3000, 11);
    const auto j = simulate(joint, cfg);
    auto separate_cfg = cfg;
    separate_cfg.seed = 12;
    const auto s = simulate(alone, separate_cfg);

    // two-sample proportion test at alpha = 0.01 per receiver
    const double n = 3000.0;
    for (std::size_t i = 0; i < 2; ++i) {
        const double p1 = final_count(j, i) / n, p2 = final_count(s, 0) / n;
        const double pooled = (p1 + p2) / 2.0;
        const double z = (p1 - p2) / std::sqrt(pooled * (1 - pooled) * 2.0 / n);
        CHECK(std::abs(z) < 2.576);
    }
}

TEST_CASE("absorbed counts follow the binomial law across seeds") {
    const double t_end = 5.0, n = 2000.0;
    const double p = analytic::hit_probability({6.0, 1.0, 79.4}, t_end);
    double chi2 = 0.0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const auto est = simulate(siso(), quick(t_end, 1e-4, 2000, seed));
        const double x = final_count(est, 0);
        chi2 += (x - n * p) * (x - n * p) / (n * p * (1 - p));
    }
    CHECK(chi2 < 37.566);  // chi-square, 20 dof, alpha = 0.01
}

TEST_CASE("without the crossing correction the step-size bias shrinks with dt") {
    const double t_end = 10.0, n = 4000.0;
    const double expected = n * analytic::hit_probability({6.0, 1.0, 79.4}, t_end);
    double previous_deficit = 1e300;
    for (double dt : {1e-2, 1e-3, 1e-4}) {
        auto cfg = quick(t_end, dt, 4000, 31);
        cfg.boundary_correction = false;
        const double deficit = expected - final_count(simulate(siso(), cfg), 0);
        CHECK(deficit > -3.0 * std::sqrt(expected));
        CHECK(deficit < previous_deficit + 2.0 * std::sqrt(expected));
        previous_deficit = deficit;
    }
}

TEST_CASE("leaping does not change the statistics") {
    auto cfg = quick(2.0, 1e-4, 3000, 8);
    const auto leap = simulate(siso(), cfg);
    cfg.far_field_leap = false;
    cfg.seed = 9;
    const auto plain = simulate(siso(), cfg);
    const double n = 3000.0;
    const double p1 = final_count(leap, 0) / n, p2 = final_count(plain, 0) / n;
    const double pooled = (p1 + p2) / 2.0;
    CHECK(std::abs(p1 - p2) / std::sqrt(pooled * (1 - pooled) * 2.0 / n) < 2.576);
}

TEST_CASE("configuration errors") {
    McConfig cfg;
    cfg.dt_sim = 0.0;
    CHECK_THROWS_AS(check(cfg), std::invalid_argument);
    cfg = McConfig{};
    cfg.record_dt = 1.5e-4;
    CHECK_THROWS_AS(check(cfg), std::invalid_argument);
    cfg = McConfig{};
    cfg.particles_per_transmitter = 0;
    CHECK_THROWS_AS(check(cfg), std::invalid_argument);
    Topology bad = siso();
    bad.receivers[0].center = {0.2, 0, 0};
    CHECK_THROWS_AS((void)simulate(bad, quick(1.0, 1e-3, 10)), TopologyError);
}

TEST_CASE("coarse simulation steps raise a warning") {
    const auto est = simulate(build_sito_scenario(6.0, 4.0, 0.0), quick(1.0, 1e-2, 10));
    CHECK_FALSE(est.warnings.empty());
}
