#include "mcmimo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcmimo {

double norm1(const Matrix& a) {
    double best = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) s += std::abs(a(r, c));
        best = std::max(best, s);
    }
    return best;
}

double norm_inf(std::span<const double> v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) throw std::invalid_argument("multiply: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r).data(), x.data(), x.size());
    return y;
}

double dot(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

LuDecomposition::LuDecomposition(const Matrix& a) : lu_(a), pivot_(a.rows()) {
    if (a.rows() != a.cols()) throw std::invalid_argument("LU needs a square matrix");
    norm1_ = norm1(a);
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) pivot_[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(lu_(r, k)) > std::abs(lu_(best, k))) best = r;
        if (lu_(best, k) == 0.0 || !std::isfinite(lu_(best, k))) {
            singular_ = true;
            return;
        }
        if (best != k) {
            std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(best).begin());
            std::swap(pivot_[k], pivot_[best]);
        }
        const double inv = 1.0 / lu_(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double factor = lu_(r, k) * inv;
            lu_(r, k) = factor;
            if (factor == 0.0) continue;
            for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= factor * lu_(k, c);
        }
    }
}

void LuDecomposition::solve_in_place(std::span<double> x) const {
    if (singular_) throw std::domain_error("LU solve on a singular matrix");
    const std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("LU solve: dimension mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[pivot_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < i; ++c) y[i] -= lu_(i, c) * y[c];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t c = i + 1; c < n; ++c) y[i] -= lu_(i, c) * y[c];
        y[i] /= lu_(i, i);
    }
    std::copy(y.begin(), y.end(), x.begin());
}

std::vector<double> LuDecomposition::solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    solve_in_place(x);
    return x;
}

Matrix LuDecomposition::inverse() const {
    const std::size_t n = size();
    Matrix inv(n, n);
    std::vector<double> col(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::fill(col.begin(), col.end(), 0.0);
        col[c] = 1.0;
        solve_in_place(col);
        for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
    }
    return inv;
}

double LuDecomposition::condition_1norm() const {
    if (singular_) return std::numeric_limits<double>::infinity();
    return norm1_ * norm1(inverse());
}

}  // namespace mcmimo
