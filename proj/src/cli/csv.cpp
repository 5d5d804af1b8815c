#include "mcmimo/cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

namespace mcmimo::cli {

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

void sort_rows(std::vector<SweepRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.omega_deg, a.d_c1c2, a.t, a.receiver, a.method) <
               std::tie(b.omega_deg, b.d_c1c2, b.t, b.receiver, b.method);
    });
}

std::vector<GapRow> derive_gaps(const std::vector<SweepRow>& rows) {
    std::map<std::tuple<double, double, std::size_t>, double> asym;
    for (const auto& r : rows)
        if (r.method == "asymptotic") asym[{r.omega_deg, r.d_c1c2, r.receiver}] = r.value;
    std::vector<GapRow> gaps;
    for (const auto& r : rows) {
        if (r.method == "asymptotic") continue;
        const auto it = asym.find({r.omega_deg, r.d_c1c2, r.receiver});
        if (it == asym.end()) continue;
        gaps.push_back({r.omega_deg, r.d_c1c2, r.t, r.method, r.receiver, it->second, r.value,
                        (r.value - it->second) / std::abs(it->second)});
    }
    return gaps;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

namespace {

std::string header(const char* first, const char* prefix, std::size_t p) {
    std::string h = first;
    for (std::size_t i = 1; i <= p; ++i) h += "," + std::string(prefix) + std::to_string(i);
    return h + "\n";
}

std::string matrix_csv(const TimeGrid& grid, const Matrix& m, const char* prefix) {
    std::string out = header("t", prefix, m.rows());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out += format_number(grid.time(k));
        for (std::size_t i = 0; i < m.rows(); ++i) out += "," + format_number(m(i, k));
        out += "\n";
    }
    return out;
}

}  // namespace

std::string series_csv(const volterra::AbsorptionSeries& s) { return matrix_csv(s.grid, s.cumulative, "N_"); }

std::string rates_csv(const volterra::AbsorptionSeries& s) { return matrix_csv(s.grid, s.rates, "n_"); }

std::string estimate_csv(const montecarlo::McEstimate& e) {
    std::string out = header("t", "N_", e.absorbed.size());
    for (std::size_t k = 0; k < e.grid.size(); ++k) {
        out += format_number(e.grid.time(k));
        for (const auto& row : e.absorbed) out += "," + std::to_string(row[k]);
        out += "\n";
    }
    return out;
}

std::string asymptotic_csv(const asymptotic::AsymptoticSolution& s) {
    std::string out = "receiver,n_infinity\n";
    for (std::size_t i = 0; i < s.n_infinity.size(); ++i)
        out += std::to_string(i + 1) + "," + format_number(s.n_infinity[i]) + "\n";
    return out;
}

std::string sweep_csv(std::vector<SweepRow> rows) {
    sort_rows(rows);
    std::string out = "omega,d_c1c2,t,method,receiver,value\n";
    for (const auto& r : rows)
        out += format_number(r.omega_deg) + "," + format_number(r.d_c1c2) + "," + format_number(r.t) +
               "," + r.method + "," + std::to_string(r.receiver) + "," + format_number(r.value) + "\n";
    return out;
}

std::string gaps_csv(const std::vector<GapRow>& rows) {
    std::string out = "omega,d_c1c2,t,method,receiver,asymptotic,value,relative_gap\n";
    for (const auto& r : rows)
        out += format_number(r.omega_deg) + "," + format_number(r.d_c1c2) + "," + format_number(r.t) +
               "," + r.method + "," + std::to_string(r.receiver) + "," + format_number(r.asymptotic) +
               "," + format_number(r.value) + "," + format_number(r.relative_gap) + "\n";
    return out;
}

}  // namespace mcmimo::cli
