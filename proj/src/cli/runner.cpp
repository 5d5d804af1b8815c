#include "mcmimo/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "mcmimo/analytic.hpp"

namespace mcmimo::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Grid index of t, or a ConfigError if t is not on the grid.
std::size_t index_on(double t, double step, const char* what) {
    const double k = std::round(t / step);
    if (std::abs(k * step - t) > 1e-9 * std::max(1.0, t))
        throw ConfigError("report time " + format_number(t) + " is not a multiple of " + what);
    return static_cast<std::size_t>(k);
}

montecarlo::McConfig mc_config(const ScenarioConfig& c, unsigned workers) {
    montecarlo::McConfig cfg;
    cfg.dt_sim = c.montecarlo.dt_sim;
    cfg.t_max = c.mc_t_max();
    cfg.record_dt = c.montecarlo.record_dt;
    cfg.particles_per_transmitter = c.montecarlo.particles;
    cfg.seed = c.montecarlo.seed;
    cfg.boundary_correction = c.montecarlo.boundary_correction;
    cfg.workers = workers;
    return cfg;
}

/// Image-series value of receiver i, summed over transmitters.
double series_value(const Topology& t, std::size_t i, double time) {
    const auto d = pair_distances(t);
    double total = 0.0;
    for (std::size_t m = 0; m < t.num_transmitters(); ++m) {
        analytic::SitoGeometry g{d.transmitter_receiver(m, 0), d.transmitter_receiver(m, 1),
                                 d.receiver_receiver(0, 1), d.receiver_receiver(1, 0),
                                 t.receivers[0].radius};
        if (i == 1) g = g.swapped();
        total += analytic::sito_series(g, t.molecules_per_release, t.diffusion_coefficient, time).value;
    }
    return total;
}

struct PointResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
};

PointResult run_point(const ScenarioConfig& c, const ScenarioPoint& pt, unsigned mc_workers) {
    PointResult out;
    const std::size_t p = pt.topology.num_receivers();
    const std::string where = "omega=" + format_number(pt.omega_deg) + " d_c1c2=" + format_number(pt.d_c1c2) + ": ";
    auto add = [&](double t, const std::string& method, std::size_t i, double v) {
        out.rows.push_back({pt.omega_deg, pt.d_c1c2, t, method, i + 1, v});
    };
    for (const auto& method : c.methods) {
        if (method == "asymptotic") {
            const auto sol = asymptotic::solve(pt.topology);
            for (const auto& w : sol.warnings) out.warnings.push_back(where + w.message);
            for (std::size_t i = 0; i < p; ++i)
                add(std::numeric_limits<double>::infinity(), method, i, sol.n_infinity[i]);
        } else if (method == "volterra") {
            volterra::TransientOptions opt;
            opt.quadrature = c.solver.scheme;
            opt.compute_rates = false;
            const auto series =
                volterra::solve_transient(pt.topology, TimeGrid::covering(c.solver.t_max, c.solver.dt), opt);
            for (const auto& w : series.warnings) out.warnings.push_back(where + w.message());
            for (double t : c.solver.report_times) {
                const std::size_t k = index_on(t, c.solver.dt, "solver.dt");
                for (std::size_t i = 0; i < p; ++i) add(t, method, i, series.cumulative(i, k));
            }
        } else if (method == "series") {
            if (p != 2 || pt.topology.receivers[0].radius != pt.topology.receivers[1].radius)
                throw ConfigError("the series method needs two receivers of equal radius");
            for (double t : c.solver.report_times)
                for (std::size_t i = 0; i < p; ++i) add(t, method, i, series_value(pt.topology, i, t));
        } else if (method == "montecarlo") {
            const auto est = montecarlo::simulate(pt.topology, mc_config(c, mc_workers));
            for (const auto& w : est.warnings) out.warnings.push_back(where + w);
            for (double t : c.solver.report_times) {
                if (t > c.mc_t_max() * (1.0 + 1e-12))
                    throw ConfigError("report time " + format_number(t) + " exceeds montecarlo.t_max");
                const std::size_t k = index_on(t, c.montecarlo.record_dt, "montecarlo.record_dt");
                for (std::size_t i = 0; i < p; ++i)
                    add(t, method, i, static_cast<double>(est.absorbed[i][k]));
            }
        }
    }
    return out;
}

/// The lone point of a config, for the single-scenario subcommands.
ScenarioPoint single_point(const ScenarioConfig& c) {
    auto points = expand(c);
    if (points.size() != 1)
        throw ConfigError("config describes " + std::to_string(points.size()) +
                          " scenario points; give one d_c1c2 and one omega, or use sweep");
    return std::move(points.front());
}

class RunLog {
public:
    void line(const std::string& s) { text_ << s << "\n"; }
    void warn(const std::string& s, std::ostream& err) {
        line("warning: " + s);
        err << "warning: " << s << "\n";
    }
    [[nodiscard]] std::string str() const { return text_.str(); }

private:
    std::ostringstream text_;
};

}  // namespace

void apply(ScenarioConfig& config, const Overrides& o) {
    if (o.out) config.output_directory = o.out->string();
    if (o.methods) {
        config.methods.clear();
        for (const auto& m : *o.methods) config.methods.push_back(canonical_method(m));
    }
    if (o.seed) config.montecarlo.seed = *o.seed;
    check(config);
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& c, std::vector<std::string>& warnings,
                                unsigned workers) {
    const auto points = expand(c);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, points.size()));
    // With several sweep workers each simulation runs single-threaded.
    const unsigned mc_workers = workers > 1 ? 1 : 0;

    std::vector<PointResult> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t j = next++; j < points.size(); j = next++) {
            try {
                results[j] = run_point(c, points[j], mc_workers);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<SweepRow> rows;
    for (auto& r : results) {
        rows.insert(rows.end(), r.rows.begin(), r.rows.end());
        warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
    }
    sort_rows(rows);
    return rows;
}

int run(const std::string& subcommand, const std::filesystem::path& config_path,
        const Overrides& overrides, std::ostream& err) {
    RunLog log;
    std::filesystem::path out_dir;
    int code = kExitOk;
    std::string failure;
    auto fail = [&](int c, const std::string& msg) {
        code = c;
        failure = msg;
        log.line(msg);
    };
    const auto start = Clock::now();
    try {
        if (subcommand != "asymptotic" && subcommand != "transient" && subcommand != "simulate" &&
            subcommand != "sweep")
            throw ConfigError("unknown subcommand '" + subcommand + "'");
        ScenarioConfig config = load_config(config_path);
        apply(config, overrides);
        out_dir = config.output_directory;
        std::filesystem::create_directories(out_dir);
        write_text(out_dir / "config.echo.json", to_json(config).dump(2) + "\n");

        log.line("subcommand: " + subcommand);
        log.line("config: " + config_path.string());
        log.line("parameters: " + to_json(config).dump());

        if (subcommand == "asymptotic") {
            const auto pt = single_point(config);
            const auto sol = asymptotic::solve(pt.topology);
            for (const auto& w : sol.warnings) log.warn(w.message, err);
            log.line("condition number (1-norm): " + format_number(sol.condition_estimate));
            log.line("residual (inf-norm): " + format_number(sol.residual));
            write_text(out_dir / "asymptotic.csv", asymptotic_csv(sol));
        } else if (subcommand == "transient") {
            const auto pt = single_point(config);
            volterra::TransientOptions opt;
            opt.quadrature = config.solver.scheme;
            const auto grid = TimeGrid::covering(config.solver.t_max, config.solver.dt);
            log.line("scheme: " + std::string(volterra::to_string(opt.quadrature)) +
                     ", steps: " + std::to_string(grid.n_steps));
            const auto series = volterra::solve_transient(pt.topology, grid, opt);
            for (const auto& w : series.warnings) log.warn(w.message(), err);
            write_text(out_dir / "transient.csv", series_csv(series));
            write_text(out_dir / "transient_rates.csv", rates_csv(series));
        } else if (subcommand == "simulate") {
            const auto pt = single_point(config);
            const auto est = montecarlo::simulate(pt.topology, mc_config(config, 0));
            for (const auto& w : est.warnings) log.warn(w, err);
            log.line("particles: " + std::to_string(est.total_particles));
            write_text(out_dir / "montecarlo.csv", estimate_csv(est));
        } else {
            std::vector<std::string> warnings;
            const auto rows = run_sweep(config, warnings);
            for (const auto& w : warnings) log.warn(w, err);
            log.line("rows: " + std::to_string(rows.size()));
            write_text(out_dir / "sweep.csv", sweep_csv(rows));
            write_text(out_dir / "sweep_gaps.csv", gaps_csv(derive_gaps(rows)));
        }
    } catch (const ConfigError& e) {
        fail(kExitUsage, std::string("config error: ") + e.what());
    } catch (const TopologyError& e) {
        fail(kExitData, std::string("topology error: ") + e.what());
    } catch (const volterra::NumericalError& e) {
        fail(kExitNumerical, std::string("numerical error: ") + e.what());
    } catch (const asymptotic::SingularSystemError& e) {
        fail(kExitNumerical, std::string("numerical error: ") + e.what());
    } catch (const std::overflow_error& e) {
        fail(kExitNumerical, std::string("numerical error: ") + e.what());
    } catch (const std::domain_error& e) {
        fail(kExitNumerical, std::string("numerical error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        fail(kExitUsage, std::string("invalid setting: ") + e.what());
    } catch (const std::exception& e) {
        fail(kExitFailure, std::string("error: ") + e.what());
    }
    log.line("elapsed: " + format_number(seconds_since(start)) + " s");
    log.line("exit status: " + std::to_string(code));
    if (!failure.empty()) err << failure << "\n";
    if (!out_dir.empty()) {
        try {
            write_text(out_dir / "run.log", log.str());
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            if (code == kExitOk) code = kExitFailure;
        }
    }
    return code;
}

}  // namespace mcmimo::cli
