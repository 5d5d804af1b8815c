// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero
// if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcmimo/analytic.hpp"
#include "mcmimo/asymptotic.hpp"
#include "mcmimo/geometry.hpp"
#include "mcmimo/montecarlo.hpp"
#include "mcmimo/volterra.hpp"

using namespace mcmimo;

namespace {

constexpr double kD = 79.4;
constexpr double kNT = 1e4;
constexpr double kR = 1.0;
constexpr double kD1 = 6.0;
const double kDistances[] = {4.0, 8.0, 12.0};

std::vector<double> omega_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 12; ++k) g.push_back(std::min(k * std::numbers::pi / 12.0, std::numbers::pi));
    return g;
}

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Topology siso() {
    Topology t;
    t.transmitters = {{0, 0, 0}};
    t.receivers = {{{kD1, 0, 0}, kR}};
    return t;
}

analytic::SitoGeometry sito_geometry(const Topology& t) {
    const auto d = pair_distances(t);
    return {d.transmitter_receiver(0, 0), d.transmitter_receiver(0, 1), d.receiver_receiver(0, 1),
            d.receiver_receiver(1, 0), t.receivers[0].radius};
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s | %s | %.2f s\n", o.pass ? "PASS" : "FAIL", id, title,
                o.detail.c_str(), secs);
    std::fflush(stdout);
}

/// Max relative error of the trapezoid solution against the closed form on [0.1, 100] s.
double siso_error(double dt) {
    const Topology t = siso();
    volterra::TransientOptions opt;
    opt.quadrature = volterra::Quadrature::kTrapezoid;
    const auto out = volterra::solve_transient(t, TimeGrid::covering(100.0, dt), opt);
    const analytic::HittingKernel k{kD1, kR, kD};
    double worst = 0.0;
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
        const double time = out.grid.time(i);
        if (time < 0.1 - 1e-12) continue;
        worst = std::max(worst, rel(out.cumulative(0, i), analytic::cumulative_siso(k, kNT, time)));
    }
    return worst;
}

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

}  // namespace

int main() {
    report(1, "SISO transient vs closed form, dt = 5 ms, max rel err <= 1e-3 on [0.1, 100] s", [] {
        const auto start = std::chrono::steady_clock::now();
        const double err = siso_error(5e-3);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return Outcome{err <= 1e-3 && secs <= 60.0, "max rel err " + fmt(err)};
    });

    report(2, "halving dt reduces the SISO max error by a factor in [3.5, 4.5]", [] {
        const double coarse = siso_error(5e-3);
        const double fine = siso_error(2.5e-3);
        const double ratio = coarse / fine;
        return Outcome{ratio >= 3.5 && ratio <= 4.5,
                       "err(5 ms) " + fmt(coarse) + ", err(2.5 ms) " + fmt(fine) + ", ratio " + fmt(ratio)};
    });

    report(3, "asymptotic solve equals the two-receiver closed-form asymptote to 1e-12", [] {
        double worst = 0.0;
        for (double d : kDistances)
            for (double w : omega_grid()) {
                const auto t = build_sito_scenario(kD1, d, w);
                const auto sol = asymptotic::solve(t);
                const auto g = sito_geometry(t);
                worst = std::max(worst, rel(sol.n_infinity[0], analytic::sito_asymptote(g, kNT)));
                worst = std::max(worst, rel(sol.n_infinity[1], analytic::sito_asymptote(g.swapped(), kNT)));
            }
        return Outcome{worst <= 1e-12, "max rel diff " + fmt(worst) + " over 39 points, both receivers"};
    });

    report(4, "transient N1(300 s) within 3% of asymptotic N1 and N1(300) >= N1(100), dt = 10 ms", [] {
        volterra::TransientOptions opt;
        opt.quadrature = volterra::Quadrature::kProductIntegration;
        opt.compute_rates = false;
        const auto grid = TimeGrid::covering(300.0, 0.01);
        double worst = 0.0;
        std::string where, failing;
        bool monotone = true;
        for (double d : kDistances)
            for (double w : omega_grid()) {
                const auto t = build_sito_scenario(kD1, d, w);
                const auto out = volterra::solve_transient(t, grid, opt);
                const double n300 = out.cumulative(0, grid.n_steps);
                const double n100 = out.cumulative(0, 10000);
                const double asym = asymptotic::solve(t).n_infinity[0];
                const double gap = rel(n300, asym);
                const std::string point = "(omega " + fmt(deg(w)) + " deg, d " + fmt(d) + ")";
                if (gap > worst) {
                    worst = gap;
                    where = point;
                }
                if (gap > 0.03) failing += " " + point + " gap " + fmt(gap, 4);
                if (n300 < n100) {
                    monotone = false;
                    failing += " " + point + " not monotone";
                }
            }
        std::string detail = "worst gap " + fmt(worst, 4) + " at " + where;
        if (!failing.empty()) detail += "; out of tolerance:" + failing;
        return Outcome{worst <= 0.03 && monotone, detail};
    });

    report(5, "asymptotic N1(omega): increasing for d = 4, variation < 10% of mean for d = 12", [] {
        std::vector<double> n4, n12;
        for (double w : omega_grid()) {
            n4.push_back(asymptotic::solve(build_sito_scenario(kD1, 4.0, w)).n_infinity[0]);
            n12.push_back(asymptotic::solve(build_sito_scenario(kD1, 12.0, w)).n_infinity[0]);
        }
        bool increasing = true;
        for (std::size_t k = 1; k < n4.size(); ++k) increasing = increasing && n4[k] > n4[k - 1];
        const auto [lo, hi] = std::minmax_element(n12.begin(), n12.end());
        double mean = 0.0;
        for (double v : n12) mean += v / static_cast<double>(n12.size());
        const double variation = (*hi - *lo) / mean;
        return Outcome{increasing && variation < 0.10,
                       std::string("d=4 strictly increasing: ") + (increasing ? "yes" : "no") +
                           " (" + fmt(n4.front()) + " -> " + fmt(n4.back()) + "), d=12 variation " +
                           fmt(100 * variation, 3) + "% of mean"};
    });

    report(6, "MIMO (T2 = (6,6,0), omega = 0, d = 4) matches the hand-solved 2x2 system to 1e-9", [] {
        const auto t = build_mimo_scenario(kD1, 4.0, 0.0, {6.0, 6.0, 0.0});
        const auto sol = asymptotic::solve(t);
        // R1 at (6,0,0), R2 at (2,0,0), T1 at the origin, T2 at (6,6,0)
        const double a = kR / 4.0;
        const double b1 = kNT * (kR / 6.0 + kR / 6.0);
        const double b2 = kNT * (kR / 2.0 + kR / std::sqrt(52.0));
        const double det = 1.0 - a * a;
        const double n1 = (b1 - a * b2) / det;
        const double n2 = (b2 - a * b1) / det;
        const double err = std::max(rel(sol.n_infinity[0], n1), rel(sol.n_infinity[1], n2));
        return Outcome{err <= 1e-9, "N1 " + fmt(sol.n_infinity[0], 15) + " (hand " + fmt(n1, 15) + "), N2 " +
                                        fmt(sol.n_infinity[1], 15) + " (hand " + fmt(n2, 15) +
                                        "), max rel diff " + fmt(err)};
    });

    report(7, "two-transmitter transient equals the sum of one-transmitter solutions to 1e-9", [] {
        const auto both = build_mimo_scenario(kD1, 4.0, 0.0, {6.0, 6.0, 0.0});
        Topology first = both, second = both;
        first.transmitters = {both.transmitters[0]};
        second.transmitters = {both.transmitters[1]};
        const auto grid = TimeGrid::covering(60.0, 0.01);
        double worst = 0.0;
        std::string per_scheme;
        for (auto q : {volterra::Quadrature::kTrapezoid, volterra::Quadrature::kProductIntegration}) {
            volterra::TransientOptions opt;
            opt.quadrature = q;
            const auto s = volterra::solve_transient(both, grid, opt);
            const auto a = volterra::solve_transient(first, grid, opt);
            const auto b = volterra::solve_transient(second, grid, opt);
            double diff = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    diff = std::max(diff, std::abs(s.cumulative(i, k) - a.cumulative(i, k) - b.cumulative(i, k)));
                    scale = std::max(scale, std::abs(s.cumulative(i, k)));
                }
            worst = std::max(worst, diff / scale);
            per_scheme += std::string(per_scheme.empty() ? "" : ", ") + volterra::to_string(q) + " " + fmt(diff / scale);
        }
        return Outcome{worst <= 1e-9, "max |sum - parts| / max |sum|: " + per_scheme};
    });

    report(8, "Monte Carlo: SISO at 100 s within 3 sigma + 2%; two-receiver (omega 0, d 4) at 300 s within 5%", [] {
        montecarlo::McConfig cfg;
        cfg.dt_sim = 1e-4;
        cfg.t_max = 100.0;
        cfg.record_dt = 1.0;
        cfg.particles_per_transmitter = 10000;
        cfg.seed = 2024;
        cfg.boundary_correction = true;
        const auto est = montecarlo::simulate(siso(), cfg);
        const double count = static_cast<double>(est.absorbed[0].back());
        const analytic::HittingKernel k{kD1, kR, kD};
        const double prob = analytic::hit_probability(k, 100.0);
        const double expected = cfg.particles_per_transmitter * prob;
        const double sigma = std::sqrt(cfg.particles_per_transmitter * prob * (1.0 - prob));
        const bool siso_ok = std::abs(count - expected) <= 3.0 * sigma + 0.02 * expected;

        const auto t = build_sito_scenario(kD1, 4.0, 0.0);
        cfg.t_max = 300.0;
        cfg.particles_per_transmitter = 100000;
        const auto est2 = montecarlo::simulate(t, cfg);
        const double mc = static_cast<double>(est2.absorbed[0].back()) * kNT / 100000.0;
        volterra::TransientOptions opt;
        opt.compute_rates = false;
        const auto vol = volterra::solve_transient(t, TimeGrid::covering(300.0, 0.01), opt);
        const double n300 = vol.cumulative(0, vol.grid.n_steps);
        const double gap = rel(mc, n300);
        return Outcome{siso_ok && gap <= 0.05,
                       "SISO " + fmt(count) + " vs " + fmt(expected) + " (band " +
                           fmt(3.0 * sigma + 0.02 * expected) + "); SITO N1 " + fmt(mc) +
                           " (1e5 particles, scaled to N_T) vs transient " + fmt(n300) + ", gap " + fmt(gap, 4)};
    });

    report(9, "two-receiver asymptote with receiver 2 at 1000 um matches N_T R / d1 within 0.2%", [] {
        const double siso_value = kNT * kR / kD1;
        double worst = 0.0;
        for (double w : omega_grid()) {
            const auto t = build_sito_scenario(kD1, 1000.0, w);
            worst = std::max(worst, rel(analytic::sito_asymptote(sito_geometry(t), kNT), siso_value));
            worst = std::max(worst, rel(asymptotic::solve(t).n_infinity[0], siso_value));
        }
        return Outcome{worst <= 2e-3, "max rel diff " + fmt(worst) + " over the omega grid"};
    });

    report(10, "1000 random topologies: sum N_i <= q N_T and N_i >= 0 (counted when diagonally dominant)", [] {
        std::mt19937_64 gen(20240601);
        std::uniform_int_distribution<int> count_rx(1, 6), count_tx(1, 3);
        std::uniform_real_distribution<double> coord(-15.0, 15.0), radius(0.5, 2.0);
        int accepted = 0, sdd = 0, warned = 0, counted = 0;
        while (accepted < 1000) {
            Topology t;
            const int p = count_rx(gen), q = count_tx(gen);
            for (int m = 0; m < q; ++m) t.transmitters.push_back({coord(gen), coord(gen), coord(gen)});
            for (int i = 0; i < p; ++i) t.receivers.push_back({{coord(gen), coord(gen), coord(gen)}, radius(gen)});
            if (!validate(t).ok()) continue;
            ++accepted;
            const auto sol = asymptotic::solve(t);
            double total = 0.0;
            bool negative = false;
            for (double v : sol.n_infinity) {
                total += v;
                negative = negative || v < 0.0;
            }
            const bool violated = negative || total > q * kNT;
            const bool dominant = asymptotic::strictly_diagonally_dominant(sol.interference_matrix);
            sdd += dominant;
            if (violated) {
                ++warned;
                if (dominant) ++counted;
            }
        }
        return Outcome{counted == 0, std::to_string(sdd) + " diagonally dominant, " + std::to_string(warned) +
                                         " with warnings, " + std::to_string(counted) + " counted as failures"};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
