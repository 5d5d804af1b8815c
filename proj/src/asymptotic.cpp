#include "mcmimo/asymptotic.hpp"

#include <cmath>
#include <sstream>

#include "mcmimo/linalg.hpp"

namespace mcmimo::asymptotic {

InterferenceSystem build_system(const Topology& topology) {
    require_valid_geometry(topology);
    if (!(topology.molecules_per_release >= 0.0))
        throw std::invalid_argument("molecules per release must be non-negative");

    const auto distances = pair_distances(topology);
    const std::size_t p = topology.num_receivers();
    InterferenceSystem sys{Matrix(p, p), std::vector<double>(p, 0.0)};
    for (std::size_t i = 0; i < p; ++i) {
        const double radius = topology.receivers[i].radius;
        for (std::size_t j = 0; j < p; ++j)
            sys.interference_matrix(i, j) =
                i == j ? 1.0 : radius / distances.receiver_receiver(i, j);
        double gain = 0.0;
        for (std::size_t m = 0; m < topology.num_transmitters(); ++m)
            gain += radius / distances.transmitter_receiver(m, i);
        sys.source_vector[i] = topology.molecules_per_release * gain;
    }
    return sys;
}

AsymptoticSolution solve(const Topology& topology) {
    auto sys = build_system(topology);
    AsymptoticSolution out;
    out.interference_matrix = std::move(sys.interference_matrix);
    out.source_vector = std::move(sys.source_vector);

    const LuDecomposition lu(out.interference_matrix);
    out.condition_estimate = lu.condition_1norm();
    if (lu.singular() || !(out.condition_estimate <= kMaxCondition)) {
        std::ostringstream os;
        os << "interference matrix is numerically singular (condition " << out.condition_estimate
           << ")";
        throw SingularSystemError(os.str(), out.condition_estimate);
    }
    out.n_infinity = lu.solve(out.source_vector);
    for (double v : out.n_infinity)
        if (!std::isfinite(v)) throw std::overflow_error("asymptotic counts are not finite");

    const auto image = multiply(out.interference_matrix, out.n_infinity);
    for (std::size_t i = 0; i < image.size(); ++i)
        out.residual = std::max(out.residual, std::abs(image[i] - out.source_vector[i]));

    for (std::size_t i = 0; i < out.n_infinity.size(); ++i) {
        if (out.n_infinity[i] < 0.0) {
            std::ostringstream os;
            os << "receiver " << i << " has negative asymptotic count " << out.n_infinity[i]
               << "; receivers too tightly packed for the center approximation";
            out.warnings.push_back({i, out.n_infinity[i], os.str()});
        }
    }
    return out;
}

bool strictly_diagonally_dominant(const Matrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (j != i) off += std::abs(a(i, j));
        if (!(off < std::abs(a(i, i)))) return false;
    }
    return true;
}

FarFieldReport far_field_check(const Topology& topology, std::size_t receiver,
                               double separation) {
    require_valid_geometry(topology);
    if (receiver >= topology.num_receivers())
        throw std::out_of_range("far_field_check: receiver index out of range");

    FarFieldReport report;
    report.displaced = topology;
    const Point3 anchor = topology.receivers[receiver].center;
    for (std::size_t j = 0; j < topology.num_receivers(); ++j) {
        if (j == receiver) continue;
        const Point3 offset = topology.receivers[j].center - anchor;
        const double length = norm(offset);
        if (length == 0.0) throw std::invalid_argument("coincident receiver centers");
        report.displaced.receivers[j].center = anchor + offset * (separation / length);
    }

    const auto solution = solve(report.displaced);
    report.coupled = solution.n_infinity[receiver];
    report.isolated = solution.source_vector[receiver];
    report.relative_change = std::abs(report.coupled - report.isolated) / report.isolated;
    return report;
}

}  // namespace mcmimo::asymptotic
