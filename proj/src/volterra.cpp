#include "mcmimo/volterra.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mcmimo/linalg.hpp"

namespace mcmimo::volterra {

namespace {

using analytic::HittingKernel;

struct Kernels {
    // forcing_kernels[i] lists the kernels from every transmitter to receiver i
    std::vector<std::vector<HittingKernel>> forcing;
    // coupling(i, j) for i != j; diagonal entries unused
    std::vector<std::vector<HittingKernel>> coupling;
};

Kernels build_kernels(const Topology& topology) {
    const auto distances = pair_distances(topology);
    const std::size_t p = topology.num_receivers();
    const std::size_t q = topology.num_transmitters();
    const double diffusion = topology.diffusion_coefficient;
    Kernels k;
    k.forcing.resize(p);
    k.coupling.assign(p, std::vector<HittingKernel>(p));
    for (std::size_t i = 0; i < p; ++i) {
        const double radius = topology.receivers[i].radius;
        for (std::size_t m = 0; m < q; ++m)
            k.forcing[i].push_back({distances.transmitter_receiver(m, i), radius, diffusion});
        for (std::size_t j = 0; j < p; ++j)
            if (j != i) k.coupling[i][j] = {distances.receiver_receiver(i, j), radius, diffusion};
    }
    return k;
}

void check_inputs(const Topology& topology, const TimeGrid& grid) {
    require_valid_geometry(topology);
    if (!(topology.diffusion_coefficient > 0.0))
        throw std::invalid_argument("transient solve needs a positive diffusion coefficient");
    if (!(topology.molecules_per_release >= 0.0) ||
        !std::isfinite(topology.molecules_per_release))
        throw std::invalid_argument("molecules per release must be finite and non-negative");
    check(grid);
}

void require_finite(double value, std::size_t step, std::size_t receiver) {
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "non-finite value for receiver " << receiver << " at step " << step;
        throw NumericalError(os.str(), step);
    }
}

void integrate_rates(AbsorptionSeries& out) {
    const double half_dt = 0.5 * out.grid.dt;
    for (std::size_t i = 0; i < out.rates.rows(); ++i) {
        auto n = out.rates.row(i);
        auto total = out.cumulative.row(i);
        total[0] = 0.0;
        for (std::size_t k = 1; k < n.size(); ++k)
            total[k] = total[k - 1] + half_dt * (n[k - 1] + n[k]);
    }
}

void solve_trapezoid(const Topology& topology, const Kernels& kernels, AbsorptionSeries& out) {
    const std::size_t p = topology.num_receivers();
    const std::size_t steps = out.grid.n_steps;
    const double dt = out.grid.dt;
    const double released = topology.molecules_per_release;

    Matrix forcing(p, steps + 1);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = 1; k <= steps; ++k) {
            double sum = 0.0;
            for (const auto& kernel : kernels.forcing[i])
                sum += analytic::hitting_rate(kernel, out.grid.time(k));
            forcing(i, k) = released * sum;
        }

    // reversed[i][j][steps - l] = f_{i,j}(l dt) so every lag sum is a forward dot product
    std::vector<std::vector<std::vector<double>>> reversed(p, std::vector<std::vector<double>>(p));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            if (i == j) continue;
            auto& rev = reversed[i][j];
            rev.assign(steps + 1, 0.0);
            for (std::size_t l = 1; l <= steps; ++l)
                rev[steps - l] = analytic::hitting_rate(kernels.coupling[i][j], out.grid.time(l));
        }

    for (std::size_t i = 0; i < p; ++i) out.rates(i, 0) = forcing(i, 0);
    for (std::size_t k = 1; k <= steps; ++k) {
        for (std::size_t i = 0; i < p; ++i) {
            double interference = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                if (j == i) continue;
                const double* n_j = out.rates.row(j).data();
                const auto& rev = reversed[i][j];
                // lag k for sample 0 (half weight); the current sample meets f(0) = 0
                double sum = 0.5 * n_j[0] * rev[steps - k];
                sum += dot(n_j + 1, rev.data() + (steps - k + 1), k - 1);
                interference += dt * sum;
            }
            const double value = forcing(i, k) - interference;
            require_finite(value, k, i);
            out.rates(i, k) = value;
        }
    }
    integrate_rates(out);
}

void solve_product(const Topology& topology, const Kernels& kernels, bool compute_rates,
                   AbsorptionSeries& out) {
    const std::size_t p = topology.num_receivers();
    const std::size_t steps = out.grid.n_steps;
    const double dt = out.grid.dt;
    const double released = topology.molecules_per_release;
    const auto& grid = out.grid;

    // Exact cell averages of the cumulative coupling kernel F_{i,j}:
    // cell_avg[l] = (1/dt) int_{l dt}^{(l+1) dt} F, stored reversed.
    std::vector<std::vector<std::vector<double>>> reversed(p, std::vector<std::vector<double>>(p));
    Matrix system(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        system(i, i) = 1.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (i == j) continue;
            const auto& kernel = kernels.coupling[i][j];
            auto& rev = reversed[i][j];
            rev.assign(steps, 0.0);
            double lower = 0.0;
            for (std::size_t l = 0; l < steps; ++l) {
                const double upper = analytic::hit_probability_integral(kernel, grid.time(l + 1));
                rev[steps - 1 - l] = (upper - lower) / dt;
                lower = upper;
            }
            system(i, j) = rev[steps - 1];
        }
    }
    const LuDecomposition lu(system);
    if (lu.singular()) throw NumericalError("singular step matrix", 0);

    Matrix increments(p, steps + 1);  // dN_j[m] = N_j[m] - N_j[m-1], m >= 1
    std::vector<double> rhs(p);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = grid.time(k);
        for (std::size_t i = 0; i < p; ++i) {
            double source = 0.0;
            for (const auto& kernel : kernels.forcing[i])
                source += analytic::hit_probability(kernel, t);
            double value = released * source;
            for (std::size_t j = 0; j < p; ++j) {
                if (j == i) continue;
                const auto& rev = reversed[i][j];
                const double history =
                    dot(increments.row(j).data() + 1, rev.data() + (steps - k), k - 1);
                value -= history - rev[steps - 1] * out.cumulative(j, k - 1);
            }
            rhs[i] = value;
        }
        lu.solve_in_place(rhs);
        for (std::size_t i = 0; i < p; ++i) {
            require_finite(rhs[i], k, i);
            out.cumulative(i, k) = rhs[i];
            increments(i, k) = rhs[i] - out.cumulative(i, k - 1);
        }
    }

    if (!compute_rates) return;

    // Rates consistent with piecewise-constant n_j on each cell:
    // n_i(t_k) = N_T sum f - sum_j sum_{m<=k} dN_j[m]/dt (F((k-m+1)dt) - F((k-m)dt)).
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (j == i) continue;
            std::vector<double> rev(steps, 0.0);
            double lower = 0.0;
            for (std::size_t l = 0; l < steps; ++l) {
                const double upper = analytic::hit_probability(kernels.coupling[i][j], grid.time(l + 1));
                rev[steps - 1 - l] = (upper - lower) / dt;
                lower = upper;
            }
            for (std::size_t k = 1; k <= steps; ++k)
                out.rates(i, k) -= dot(increments.row(j).data() + 1, rev.data() + (steps - k), k);
        }
        for (std::size_t k = 1; k <= steps; ++k) {
            double source = 0.0;
            for (const auto& kernel : kernels.forcing[i])
                source += analytic::hitting_rate(kernel, grid.time(k));
            out.rates(i, k) += released * source;
        }
    }
}

}  // namespace

const char* to_string(Quadrature q) {
    switch (q) {
        case Quadrature::kTrapezoid: return "trapezoid";
        case Quadrature::kProductIntegration: return "product";
    }
    return "unknown";
}

Quadrature quadrature_from_string(const std::string& name) {
    if (name == "trapezoid") return Quadrature::kTrapezoid;
    if (name == "product") return Quadrature::kProductIntegration;
    throw std::invalid_argument("unknown quadrature '" + name + "' (expected trapezoid or product)");
}

std::string ResolutionWarning::message() const {
    std::ostringstream os;
    os << "dt = " << dt << " s exceeds the recommended " << recommended_dt
       << " s for the kernel from " << (source_is_transmitter ? "transmitter " : "receiver ")
       << source << " to receiver " << receiver;
    return os.str();
}

ResolutionWarning recommended_step(const Topology& topology) {
    const auto distances = pair_distances(topology);
    ResolutionWarning worst;
    worst.recommended_dt = std::numeric_limits<double>::infinity();
    auto consider = [&](double gap, std::size_t receiver, std::size_t source, bool from_tx) {
        const double rec = gap * gap / (60.0 * topology.diffusion_coefficient);
        if (rec < worst.recommended_dt) {
            worst.recommended_dt = rec;
            worst.receiver = receiver;
            worst.source = source;
            worst.source_is_transmitter = from_tx;
        }
    };
    for (std::size_t i = 0; i < topology.num_receivers(); ++i) {
        const double radius = topology.receivers[i].radius;
        for (std::size_t m = 0; m < topology.num_transmitters(); ++m)
            consider(distances.transmitter_receiver(m, i) - radius, i, m, true);
        for (std::size_t j = 0; j < topology.num_receivers(); ++j)
            if (j != i) consider(distances.receiver_receiver(i, j) - radius, i, j, false);
    }
    return worst;
}

AbsorptionSeries solve_transient(const Topology& topology, const TimeGrid& grid,
                                 const TransientOptions& options) {
    check_inputs(topology, grid);
    const std::size_t p = topology.num_receivers();

    AbsorptionSeries out;
    out.grid = grid;
    out.rates = Matrix(p, grid.size());
    out.cumulative = Matrix(p, grid.size());

    if (options.quadrature == Quadrature::kTrapezoid) {
        auto worst = recommended_step(topology);
        if (grid.dt > worst.recommended_dt) {
            worst.dt = grid.dt;
            out.warnings.push_back(worst);
        }
    }

    const Kernels kernels = build_kernels(topology);
    switch (options.quadrature) {
        case Quadrature::kTrapezoid:
            solve_trapezoid(topology, kernels, out);
            break;
        case Quadrature::kProductIntegration:
            solve_product(topology, kernels, options.compute_rates, out);
            break;
    }
    return out;
}

double convolve_step(std::span<const double> rates_j, std::span<const double> kernel_samples,
                     double dt, std::size_t k) {
    if (k == 0) return 0.0;
    if (rates_j.size() < k || kernel_samples.size() <= k)
        throw std::invalid_argument("convolve_step: not enough samples");
    double sum = 0.5 * rates_j[0] * kernel_samples[k];
    for (std::size_t m = 1; m < k; ++m) sum += rates_j[m] * kernel_samples[k - m];
    return dt * sum;
}

double convolve_step(std::span<const double> rates_j, const analytic::HittingKernel& kernel,
                     const TimeGrid& grid, std::size_t k) {
    std::vector<double> samples(k + 1);
    for (std::size_t l = 0; l <= k; ++l) samples[l] = analytic::hitting_rate(kernel, grid.time(l));
    return convolve_step(rates_j, samples, grid.dt, k);
}

}  // namespace mcmimo::volterra
