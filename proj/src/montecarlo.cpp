#include "mcmimo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mcmimo::montecarlo {

namespace {

constexpr std::int32_t kNotAbsorbed = -1;

struct Outcome {
    std::int32_t receiver = kNotAbsorbed;
    std::uint64_t step = 0;
};

double surface_gap(const Point3& x, const Receiver& r) {
    return distance(x, r.center) - r.radius;
}

class ParticleWalker {
public:
    ParticleWalker(const Topology& topology, const McConfig& cfg, std::uint64_t total_steps)
        : topology_(topology),
          cfg_(cfg),
          total_steps_(total_steps),
          sigma_(std::sqrt(2.0 * topology.diffusion_coefficient * cfg.dt_sim)) {}

    Outcome run(std::uint32_t transmitter, std::uint64_t particle) const {
        rng::ParticleStream stream(cfg_.seed, transmitter, particle);
        Point3 pos = topology_.transmitters[transmitter];
        std::uint64_t step = 0;
        while (step < total_steps_) {
            if (cfg_.far_field_leap) {
                double nearest = std::numeric_limits<double>::infinity();
                for (const auto& r : topology_.receivers)
                    nearest = std::min(nearest, surface_gap(pos, r));
                const double ratio = nearest / (kLeapSafety * sigma_);
                const double allowed = ratio * ratio;
                if (allowed >= 2.0) {
                    const auto remaining = total_steps_ - step;
                    const auto leap = std::min<std::uint64_t>(
                        remaining, allowed >= 1e18 ? remaining
                                                   : static_cast<std::uint64_t>(allowed));
                    const double s = sigma_ * std::sqrt(static_cast<double>(leap));
                    pos = pos + Point3{s * stream.normal(), s * stream.normal(), s * stream.normal()};
                    step += leap;
                    continue;
                }
            }
            const Point3 end = pos + Point3{sigma_ * stream.normal(), sigma_ * stream.normal(),
                                            sigma_ * stream.normal()};
            ++step;
            const StepDraw draw{cfg_.boundary_correction ? stream.uniform() : 0.5};
            if (auto hit = assign_absorption(pos, end, topology_, cfg_.dt_sim,
                                             cfg_.boundary_correction, draw)) {
                return {static_cast<std::int32_t>(*hit), step};
            }
            pos = end;
        }
        return {};
    }

private:
    const Topology& topology_;
    const McConfig& cfg_;
    std::uint64_t total_steps_;
    double sigma_;
};

std::uint64_t whole_multiple(double value, double unit, const char* what) {
    const double ratio = value / unit;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
        std::ostringstream os;
        os << what << " must be a whole multiple of dt_sim";
        throw std::invalid_argument(os.str());
    }
    return static_cast<std::uint64_t>(rounded);
}

}  // namespace

void check(const McConfig& cfg) {
    if (!(cfg.dt_sim > 0.0) || !std::isfinite(cfg.dt_sim))
        throw std::invalid_argument("dt_sim must be positive");
    if (!(cfg.t_max >= cfg.dt_sim) || !std::isfinite(cfg.t_max))
        throw std::invalid_argument("t_max must be at least dt_sim");
    if (cfg.particles_per_transmitter < 1)
        throw std::invalid_argument("need at least one particle per transmitter");
    whole_multiple(cfg.record_dt, cfg.dt_sim, "record_dt");
    whole_multiple(cfg.t_max, cfg.record_dt, "t_max");
}

double crossing_probability(double start_gap, double end_gap, double diffusion, double dt) {
    if (start_gap <= 0.0 || end_gap <= 0.0) return 1.0;
    if (diffusion <= 0.0) return 0.0;
    return std::exp(-start_gap * end_gap / (diffusion * dt));
}

std::optional<std::size_t> assign_absorption(const Point3& start, const Point3& end,
                                             const Topology& topology, double dt,
                                             bool boundary_correction, StepDraw draw) {
    const auto& receivers = topology.receivers;
    std::optional<std::size_t> inside;
    std::size_t nearest = 0;
    double nearest_gap = std::numeric_limits<double>::infinity();
    double inside_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < receivers.size(); ++i) {
        const double start_gap = surface_gap(start, receivers[i]);
        if (start_gap < nearest_gap) {
            nearest_gap = start_gap;
            nearest = i;
        }
        if (distance(end, receivers[i].center) <= receivers[i].radius && start_gap < inside_gap) {
            inside = i;
            inside_gap = start_gap;
        }
    }
    if (inside || !boundary_correction || receivers.empty()) return inside;

    const double end_gap = surface_gap(end, receivers[nearest]);
    const double p =
        crossing_probability(nearest_gap, end_gap, topology.diffusion_coefficient, dt);
    if (draw.uniform < p) return nearest;
    return std::nullopt;
}

McEstimate simulate(const Topology& topology, const McConfig& cfg) {
    require_valid_geometry(topology);
    if (!(topology.diffusion_coefficient >= 0.0) || !std::isfinite(topology.diffusion_coefficient))
        throw std::invalid_argument("diffusion coefficient must be finite and non-negative");
    check(cfg);

    const std::uint64_t total_steps = whole_multiple(cfg.t_max, cfg.dt_sim, "t_max");
    const std::uint64_t steps_per_record = whole_multiple(cfg.record_dt, cfg.dt_sim, "record_dt");
    const std::size_t p = topology.num_receivers();
    const std::size_t q = topology.num_transmitters();
    const std::uint64_t n = cfg.particles_per_transmitter;

    McEstimate est;
    est.grid = TimeGrid{cfg.record_dt, static_cast<std::size_t>(total_steps / steps_per_record)};
    est.absorbed.assign(p, std::vector<std::uint64_t>(est.grid.size(), 0));
    est.total_particles = n * q;
    est.config = cfg;

    const double sigma = std::sqrt(2.0 * topology.diffusion_coefficient * cfg.dt_sim);
    double min_gap = std::numeric_limits<double>::infinity();
    const auto distances = pair_distances(topology);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t m = 0; m < q; ++m)
            min_gap = std::min(min_gap, distances.transmitter_receiver(m, i) - topology.receivers[i].radius);
        for (std::size_t j = i + 1; j < p; ++j)
            min_gap = std::min(min_gap, distances.receiver_receiver(i, j) -
                                            topology.receivers[i].radius -
                                            topology.receivers[j].radius);
    }
    if (sigma >= min_gap / 4.0) {
        std::ostringstream os;
        os << "step length sqrt(2 D dt_sim) = " << sigma << " um is not below a quarter of the "
           << "smallest gap " << min_gap << " um";
        est.warnings.push_back(os.str());
    }
    if (topology.diffusion_coefficient == 0.0) return est;

    const std::uint64_t total = n * q;
    std::vector<Outcome> outcomes(total);
    const ParticleWalker walker(topology, cfg, total_steps);

    unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                        : cfg.workers;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, total));
    auto work = [&](std::uint64_t begin, std::uint64_t stop) {
        for (std::uint64_t id = begin; id < stop; ++id)
            outcomes[id] = walker.run(static_cast<std::uint32_t>(id / n), id % n);
    };
    if (workers <= 1) {
        work(0, total);
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = std::min<std::uint64_t>(total, w * chunk);
            const std::uint64_t stop = std::min<std::uint64_t>(total, begin + chunk);
            pool.emplace_back(work, begin, stop);
        }
    }

    // Merged in particle order; an absorption at step s is first visible at
    // the recording point ceil(s / steps_per_record).
    for (const auto& outcome : outcomes) {
        if (outcome.receiver == kNotAbsorbed) continue;
        const std::uint64_t slot = (outcome.step + steps_per_record - 1) / steps_per_record;
        ++est.absorbed[static_cast<std::size_t>(outcome.receiver)][slot];
    }
    for (auto& series : est.absorbed)
        for (std::size_t k = 1; k < series.size(); ++k) series[k] += series[k - 1];
    return est;
}

}  // namespace mcmimo::montecarlo
