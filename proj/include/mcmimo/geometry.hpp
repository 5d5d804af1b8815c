#pragma once

// Topologies of pointwise transmitters and fully-absorbing spherical
// receivers. Lengths are micrometers, times are seconds.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcmimo/matrix.hpp"

namespace mcmimo {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Point3&) const = default;
};

[[nodiscard]] double norm(const Point3& p);
[[nodiscard]] double distance(const Point3& a, const Point3& b);

struct Receiver {
    Point3 center;
    double radius = 1.0;

    bool operator==(const Receiver&) const = default;
};

struct Topology {
    std::vector<Point3> transmitters;
    std::vector<Receiver> receivers;
    double diffusion_coefficient = 79.4;   // um^2/s
    double molecules_per_release = 1.0e4;  // N_T, per transmitter

    [[nodiscard]] std::size_t num_transmitters() const { return transmitters.size(); }
    [[nodiscard]] std::size_t num_receivers() const { return receivers.size(); }

    bool operator==(const Topology&) const = default;
};

enum class ViolationKind {
    kNoTransmitters,
    kNoReceivers,
    kNonPositiveDiffusion,
    kNonPositiveMolecules,
    kNonFiniteValue,
    kNonPositiveRadius,
    kTransmitterInsideReceiver,  // first = transmitter, second = receiver
    kReceiversOverlap,           // first, second = receivers
};

struct Violation {
    ViolationKind kind;
    std::size_t first = 0;
    std::size_t second = 0;
    double distance = 0.0;  // offending distance, when geometric
    double limit = 0.0;     // the bound it had to exceed

    [[nodiscard]] std::string message() const;
};

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::string summary() const;
};

/// Checks every Topology invariant and lists all violations found.
[[nodiscard]] ValidationReport validate(const Topology& topology);

/// validate() without the medium constants (D, N_T). Solvers that accept
/// degenerate media, such as N_T = 0 or a motionless D = 0, check those
/// themselves.
[[nodiscard]] ValidationReport validate_geometry(const Topology& topology);

class TopologyError : public std::runtime_error {
public:
    explicit TopologyError(ValidationReport report);
    [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// Throws TopologyError if validate() reports anything.
void require_valid(const Topology& topology);
void require_valid_geometry(const Topology& topology);

struct PairDistances {
    /// p x p, center-to-center, zero diagonal.
    Matrix receiver_receiver;
    /// q x p, entry (m, i) is the distance from transmitter m to the center of receiver i.
    Matrix transmitter_receiver;
};

[[nodiscard]] PairDistances pair_distances(const Topology& topology);

/// Medium and receiver constants shared by the benchmark scenarios.
/// Defaults are the reference parameter set (N_T = 1e4, R = 1 um, D = 79.4 um^2/s).
struct ScenarioParams {
    double radius = 1.0;
    double diffusion_coefficient = 79.4;
    double molecules_per_release = 1.0e4;
};

/// Center of the second receiver for the single-transmitter, two-receiver
/// scenario: omega is measured at C1 from the direction C1 -> T in the xy-plane.
[[nodiscard]] Point3 second_receiver_center(double d1, double d_c1c2, double omega);

/// Transmitter at the origin, R1 at (d1, 0, 0), R2 placed by omega.
/// Throws std::invalid_argument for omega outside [0, pi] and TopologyError
/// if the placement produces an infeasible topology.
[[nodiscard]] Topology build_sito_scenario(double d1, double d_c1c2, double omega,
                                           const ScenarioParams& params = {});

/// As build_sito_scenario plus a second transmitter at t2.
[[nodiscard]] Topology build_mimo_scenario(double d1, double d_c1c2, double omega,
                                           const Point3& t2,
                                           const ScenarioParams& params = {});

}  // namespace mcmimo
