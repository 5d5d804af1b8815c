#include "mcmimo/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace mcmimo {

double norm(const Point3& p) { return std::hypot(p.x, p.y, p.z); }

double distance(const Point3& a, const Point3& b) { return norm(a - b); }

namespace {

bool finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

}  // namespace

std::string Violation::message() const {
    std::ostringstream os;
    switch (kind) {
        case ViolationKind::kNoTransmitters:
            os << "topology has no transmitters";
            break;
        case ViolationKind::kNoReceivers:
            os << "topology has no receivers";
            break;
        case ViolationKind::kNonPositiveDiffusion:
            os << "diffusion coefficient must be positive, got " << distance;
            break;
        case ViolationKind::kNonPositiveMolecules:
            os << "molecules per release must be positive, got " << distance;
            break;
        case ViolationKind::kNonFiniteValue:
            os << "non-finite coordinate or radius (entity " << first << ")";
            break;
        case ViolationKind::kNonPositiveRadius:
            os << "receiver " << first << " has non-positive radius " << distance;
            break;
        case ViolationKind::kTransmitterInsideReceiver:
            os << "transmitter " << first << " lies inside or on receiver " << second
               << " (distance " << distance << " <= radius " << limit << ")";
            break;
        case ViolationKind::kReceiversOverlap:
            os << "receivers " << first << " and " << second << " overlap or touch (distance "
               << distance << " <= " << limit << ")";
            break;
    }
    return os.str();
}

std::string ValidationReport::summary() const {
    if (ok()) return "ok";
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v.message();
    }
    return out;
}

ValidationReport validate(const Topology& topology) {
    ValidationReport report;
    auto add = [&report](ViolationKind kind, std::size_t a = 0, std::size_t b = 0,
                         double dist = 0.0, double limit = 0.0) {
        report.violations.push_back({kind, a, b, dist, limit});
    };

    const auto& tx = topology.transmitters;
    const auto& rx = topology.receivers;
    if (tx.empty()) add(ViolationKind::kNoTransmitters);
    if (rx.empty()) add(ViolationKind::kNoReceivers);
    if (!(topology.diffusion_coefficient > 0.0))
        add(ViolationKind::kNonPositiveDiffusion, 0, 0, topology.diffusion_coefficient);
    if (!(topology.molecules_per_release > 0.0))
        add(ViolationKind::kNonPositiveMolecules, 0, 0, topology.molecules_per_release);

    bool geometry_finite = true;
    for (std::size_t m = 0; m < tx.size(); ++m) {
        if (!finite(tx[m])) {
            add(ViolationKind::kNonFiniteValue, m);
            geometry_finite = false;
        }
    }
    for (std::size_t i = 0; i < rx.size(); ++i) {
        if (!finite(rx[i].center) || !std::isfinite(rx[i].radius)) {
            add(ViolationKind::kNonFiniteValue, i);
            geometry_finite = false;
        } else if (!(rx[i].radius > 0.0)) {
            add(ViolationKind::kNonPositiveRadius, i, 0, rx[i].radius);
        }
    }
    if (!geometry_finite) return report;

    for (std::size_t m = 0; m < tx.size(); ++m) {
        for (std::size_t i = 0; i < rx.size(); ++i) {
            const double d = distance(tx[m], rx[i].center);
            if (!(d > rx[i].radius))
                add(ViolationKind::kTransmitterInsideReceiver, m, i, d, rx[i].radius);
        }
    }
    for (std::size_t i = 0; i < rx.size(); ++i) {
        for (std::size_t j = i + 1; j < rx.size(); ++j) {
            const double d = distance(rx[i].center, rx[j].center);
            const double limit = rx[i].radius + rx[j].radius;
            if (!(d > limit)) add(ViolationKind::kReceiversOverlap, i, j, d, limit);
        }
    }
    return report;
}

TopologyError::TopologyError(ValidationReport report)
    : std::runtime_error("invalid topology: " + report.summary()), report_(std::move(report)) {}

ValidationReport validate_geometry(const Topology& topology) {
    ValidationReport report = validate(topology);
    std::erase_if(report.violations, [](const Violation& v) {
        return v.kind == ViolationKind::kNonPositiveDiffusion ||
               v.kind == ViolationKind::kNonPositiveMolecules;
    });
    return report;
}

void require_valid(const Topology& topology) {
    auto report = validate(topology);
    if (!report.ok()) throw TopologyError(std::move(report));
}

void require_valid_geometry(const Topology& topology) {
    auto report = validate_geometry(topology);
    if (!report.ok()) throw TopologyError(std::move(report));
}

PairDistances pair_distances(const Topology& topology) {
    const std::size_t p = topology.receivers.size();
    const std::size_t q = topology.transmitters.size();
    PairDistances out{Matrix(p, p), Matrix(q, p)};
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const double d =
                distance(topology.receivers[i].center, topology.receivers[j].center);
            out.receiver_receiver(i, j) = d;
            out.receiver_receiver(j, i) = d;
        }
    }
    for (std::size_t m = 0; m < q; ++m) {
        for (std::size_t i = 0; i < p; ++i) {
            out.transmitter_receiver(m, i) =
                distance(topology.transmitters[m], topology.receivers[i].center);
        }
    }
    return out;
}

Point3 second_receiver_center(double d1, double d_c1c2, double omega) {
    return {d1 - d_c1c2 * std::cos(omega), d_c1c2 * std::sin(omega), 0.0};
}

Topology build_sito_scenario(double d1, double d_c1c2, double omega,
                             const ScenarioParams& params) {
    if (!(omega >= 0.0 && omega <= std::numbers::pi))
        throw std::invalid_argument("omega must lie in [0, pi]");
    Topology topology;
    topology.transmitters = {Point3{0.0, 0.0, 0.0}};
    topology.receivers = {
        Receiver{Point3{d1, 0.0, 0.0}, params.radius},
        Receiver{second_receiver_center(d1, d_c1c2, omega), params.radius},
    };
    topology.diffusion_coefficient = params.diffusion_coefficient;
    topology.molecules_per_release = params.molecules_per_release;
    require_valid(topology);
    return topology;
}

Topology build_mimo_scenario(double d1, double d_c1c2, double omega, const Point3& t2,
                             const ScenarioParams& params) {
    Topology topology = build_sito_scenario(d1, d_c1c2, omega, params);
    topology.transmitters.push_back(t2);
    require_valid(topology);
    return topology;
}

}  // namespace mcmimo
