#pragma once
// CSV emitters. Numbers carry 17 significant digits; row order never depends
// on scheduling, so equal results give byte-identical files.
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mcmimo/asymptotic.hpp"
#include "mcmimo/montecarlo.hpp"
#include "mcmimo/volterra.hpp"

namespace mcmimo::cli {

/// Shortest "%.17g"-equivalent text; "inf" for +infinity.
[[nodiscard]] std::string format_number(double v);

struct SweepRow {
    double omega_deg = 0.0;
    double d_c1c2 = 0.0;
    double t = 0.0;  // +infinity for the asymptote
    std::string method;
    std::size_t receiver = 1;  // 1-based
    double value = 0.0;
};

/// Orders by omega, d_c1c2, t, receiver, then method.
void sort_rows(std::vector<SweepRow>& rows);

/// Relative gap of a time-domain value against the asymptote at the same point.
struct GapRow {
    double omega_deg = 0.0;
    double d_c1c2 = 0.0;
    double t = 0.0;
    std::string method;
    std::size_t receiver = 1;
    double asymptotic = 0.0;
    double value = 0.0;
    double relative_gap = 0.0;  // (value - asymptotic) / |asymptotic|
};

/// Pairs every finite-t row with the asymptotic row of the same point and receiver.
[[nodiscard]] std::vector<GapRow> derive_gaps(const std::vector<SweepRow>& sorted_rows);

/// Throws std::runtime_error on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

[[nodiscard]] std::string series_csv(const volterra::AbsorptionSeries& series);   // t,N_1,...
[[nodiscard]] std::string rates_csv(const volterra::AbsorptionSeries& series);    // t,n_1,...
[[nodiscard]] std::string estimate_csv(const montecarlo::McEstimate& estimate);   // t,N_1,...
[[nodiscard]] std::string asymptotic_csv(const asymptotic::AsymptoticSolution& s); // receiver,n_infinity
[[nodiscard]] std::string sweep_csv(std::vector<SweepRow> rows);
[[nodiscard]] std::string gaps_csv(const std::vector<GapRow>& rows);

}  // namespace mcmimo::cli
