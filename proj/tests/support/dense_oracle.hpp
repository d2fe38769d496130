#pragma once

// Plain Gaussian-elimination linear algebra over std::complex<double>. The
// acceptance run compares the library's spectral projections against
// projectors assembled here from independently computed null spaces and
// column spaces, so this header must not lean on the library or on Eigen.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;  // row-major

inline Mat zeros(std::size_t rows, std::size_t cols) {
    return Mat(rows, std::vector<C>(cols, C(0, 0)));
}

inline Mat identity(std::size_t n) {
    Mat m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = C(1, 0);
    return m;
}

inline std::size_t rows(const Mat& m) { return m.size(); }
inline std::size_t cols(const Mat& m) { return m.empty() ? 0 : m[0].size(); }

inline Mat mul(const Mat& a, const Mat& b) {
    Mat out = zeros(rows(a), cols(b));
    for (std::size_t i = 0; i < rows(a); ++i)
        for (std::size_t k = 0; k < cols(a); ++k) {
            const C aik = a[i][k];
            if (aik == C(0, 0)) continue;
            for (std::size_t j = 0; j < cols(b); ++j) out[i][j] += aik * b[k][j];
        }
    return out;
}

inline double max_abs(const Mat& m) {
    double best = 0.0;
    for (const auto& row : m)
        for (const C& v : row) best = std::max(best, std::abs(v));
    return best;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
    double best = 0.0;
    for (std::size_t i = 0; i < rows(a); ++i)
        for (std::size_t j = 0; j < cols(a); ++j)
            best = std::max(best, std::abs(a[i][j] - b[i][j]));
    return best;
}

// Reduced row echelon form with partial pivoting. Pivots below `tol` in
// absolute value are treated as zero. Returns the pivot column indices.
inline std::vector<std::size_t> rref(Mat& m, double tol) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols(m) && row < rows(m); ++col) {
        std::size_t best = row;
        for (std::size_t r = row + 1; r < rows(m); ++r)
            if (std::abs(m[r][col]) > std::abs(m[best][col])) best = r;
        if (std::abs(m[best][col]) <= tol) continue;
        std::swap(m[row], m[best]);
        const C inv = C(1, 0) / m[row][col];
        for (std::size_t j = col; j < cols(m); ++j) m[row][j] *= inv;
        for (std::size_t r = 0; r < rows(m); ++r) {
            if (r == row) continue;
            const C factor = m[r][col];
            if (factor == C(0, 0)) continue;
            for (std::size_t j = col; j < cols(m); ++j) m[r][j] -= factor * m[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// Columns spanning ker(m), via the free columns of the reduced form.
inline Mat null_space(Mat m, double tol) {
    const std::size_t n = cols(m);
    const std::vector<std::size_t> pivots = rref(m, tol);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    Mat basis = zeros(n, n - pivots.size());
    std::size_t out = 0;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        basis[free][out] = C(1, 0);
        for (std::size_t r = 0; r < pivots.size(); ++r) basis[pivots[r]][out] = -m[r][free];
        ++out;
    }
    return basis;
}

// Columns of m at the pivot positions of its reduced form span R(m).
inline Mat column_space(const Mat& m, double tol) {
    Mat scratch = m;
    const std::vector<std::size_t> pivots = rref(scratch, tol);
    Mat basis = zeros(rows(m), pivots.size());
    for (std::size_t j = 0; j < pivots.size(); ++j)
        for (std::size_t i = 0; i < rows(m); ++i) basis[i][j] = m[i][pivots[j]];
    return basis;
}

// Gauss-Jordan inverse with partial pivoting.
inline Mat invert(Mat m) {
    const std::size_t n = rows(m);
    Mat inv = identity(n);
    const double tol = 1e-12 * std::max(1.0, max_abs(m));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[best][col])) best = r;
        if (std::abs(m[best][col]) <= tol) throw std::runtime_error("oracle: singular basis");
        std::swap(m[col], m[best]);
        std::swap(inv[col], inv[best]);
        const C scale = C(1, 0) / m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] *= scale;
            inv[col][j] *= scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const C factor = m[r][col];
            if (factor == C(0, 0)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= factor * m[col][j];
                inv[r][j] -= factor * inv[col][j];
            }
        }
    }
    return inv;
}

// Projector onto span(kernel) along span(range): concatenate the bases,
// invert, and keep the kernel coordinates.
inline Mat projector_onto_along(const Mat& kernel, const Mat& range) {
    const std::size_t d = rows(kernel);
    const std::size_t k = cols(kernel);
    if (k + cols(range) != d) throw std::runtime_error("oracle: bases do not fill the space");
    Mat basis = zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < k; ++j) basis[i][j] = kernel[i][j];
        for (std::size_t j = k; j < d; ++j) basis[i][j] = range[i][j - k];
    }
    const Mat inv = invert(basis);
    Mat kernel_coords = zeros(k, d);  // first k rows of the inverse
    for (std::size_t i = 0; i < k; ++i) kernel_coords[i] = inv[i];
    return mul(kernel, kernel_coords);
}

}  // namespace oracle
