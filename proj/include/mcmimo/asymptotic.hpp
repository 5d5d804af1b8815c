#pragma once

// t -> infinity absorbed counts for p receivers and q transmitters from the
// interference system  Rmat * N(inf) = T,  with Rmat(i, i) = 1,
// Rmat(i, j) = R_i / d_{i,j} and T_i = N_T sum_m R_i / d_{m,i}.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcmimo/geometry.hpp"
#include "mcmimo/matrix.hpp"

namespace mcmimo::asymptotic {

struct InterferenceSystem {
    Matrix interference_matrix;
    std::vector<double> source_vector;
};

/// Structured notice that the center-approximation model produced a
/// physically suspicious answer.
struct AsymptoticWarning {
    std::size_t receiver = 0;
    double value = 0.0;
    std::string message;
};

struct AsymptoticSolution {
    std::vector<double> n_infinity;
    Matrix interference_matrix;
    std::vector<double> source_vector;
    double condition_estimate = 0.0;
    double residual = 0.0;  // ||A x - b||_inf
    std::vector<AsymptoticWarning> warnings;
};

class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    [[nodiscard]] double condition() const noexcept { return condition_; }

private:
    double condition_;
};

inline constexpr double kMaxCondition = 1e12;

/// Throws TopologyError for an invalid topology.
[[nodiscard]] InterferenceSystem build_system(const Topology& topology);

/// Dense LU solve of the interference system. Throws SingularSystemError when
/// the matrix is singular or its 1-norm condition number exceeds kMaxCondition,
/// std::overflow_error when the counts are not finite.
[[nodiscard]] AsymptoticSolution solve(const Topology& topology);

/// True when sum_{j != i} R_i / d_{i,j} < 1 for every receiver i.
[[nodiscard]] bool strictly_diagonally_dominant(const Matrix& interference_matrix);

struct FarFieldReport {
    double coupled = 0.0;   // N_i(inf) with the others pushed away
    double isolated = 0.0;  // N_T sum_m R_i / d_{m,i}
    double relative_change = 0.0;
    Topology displaced;
};

/// Moves every receiver other than `receiver` radially away from it so that
/// its center sits at distance `separation` (directions preserved), then
/// compares the coupled asymptote of `receiver` with its isolated value.
[[nodiscard]] FarFieldReport far_field_check(const Topology& topology, std::size_t receiver,
                                             double separation);

}  // namespace mcmimo::asymptotic
