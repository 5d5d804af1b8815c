#pragma once

#include <span>
#include <vector>

#include "mcmimo/matrix.hpp"

namespace mcmimo {

/// LU factorization with partial pivoting of a square matrix.
class LuDecomposition {
public:
    explicit LuDecomposition(const Matrix& a);

    /// True when a zero pivot was met; solve() must not be called then.
    [[nodiscard]] bool singular() const noexcept { return singular_; }
    [[nodiscard]] std::size_t size() const noexcept { return lu_.rows(); }

    [[nodiscard]] std::vector<double> solve(std::span<const double> b) const;
    void solve_in_place(std::span<double> x) const;
    [[nodiscard]] Matrix inverse() const;

    /// ||A||_1 * ||A^-1||_1, computed from the explicit inverse.
    [[nodiscard]] double condition_1norm() const;

private:
    Matrix lu_;
    std::vector<std::size_t> pivot_;
    double norm1_ = 0.0;
    bool singular_ = false;
};

[[nodiscard]] double norm1(const Matrix& a);
[[nodiscard]] double norm_inf(std::span<const double> v);

/// y = A x
[[nodiscard]] std::vector<double> multiply(const Matrix& a, std::span<const double> x);

/// Sum of a[i] * b[i] with four independent accumulators.
[[nodiscard]] double dot(const double* a, const double* b, std::size_t n);

}  // namespace mcmimo
