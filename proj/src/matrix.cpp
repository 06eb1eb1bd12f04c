#include "miri/matrix.hpp"

#include <cmath>
#include <string>

#include "miri/errors.hpp"

namespace miri {

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Matrix Matrix::take_rows(const std::vector<std::size_t>& indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const double* src = row(indices[i]);
        double* dst = out.row(i);
        for (std::size_t j = 0; j < cols_; ++j) dst[j] = src[j];
    }
    return out;
}

namespace {

[[noreturn]] void shape_mismatch(const char* op, const Matrix& a, const Matrix& b) {
    throw ShapeError(std::string(op) + ": incompatible shapes (" + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + ") and (" + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()) + ")");
}

}  // namespace

namespace {

// Rank-1 style accumulation, 4 source rows per pass. The unit-stride inner
// loop over destination columns is what the compiler vectorizes.
void accumulate_rows(const double* __restrict coeffs, std::size_t k, std::size_t stride,
                     const double* __restrict b, double* __restrict crow, std::size_t m) {
    std::size_t p = 0;
    for (; p + 4 <= k; p += 4) {
        const double a0 = coeffs[p * stride];
        const double a1 = coeffs[(p + 1) * stride];
        const double a2 = coeffs[(p + 2) * stride];
        const double a3 = coeffs[(p + 3) * stride];
        const double* __restrict b0 = b + p * m;
        const double* __restrict b1 = b0 + m;
        const double* __restrict b2 = b1 + m;
        const double* __restrict b3 = b2 + m;
        for (std::size_t j = 0; j < m; ++j)
            crow[j] += a0 * b0[j] + a1 * b1[j] + a2 * b2[j] + a3 * b3[j];
    }
    for (; p < k; ++p) {
        const double av = coeffs[p * stride];
        const double* __restrict brow = b + p * m;
        for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) shape_mismatch("matmul", a, b);
    Matrix c(a.rows(), b.cols());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < n; ++i)
        accumulate_rows(a.row(i), k, 1, b.data(), c.row(i), m);
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) shape_mismatch("matmul_at_b", a, b);
    Matrix c(a.cols(), b.cols());
    const std::size_t n = a.rows(), r = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        const double* __restrict arow = a.row(i);
        const double* __restrict brow = b.row(i);
        for (std::size_t p = 0; p < r; ++p) {
            const double av = arow[p];
            double* __restrict crow = c.row(p);
            for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) shape_mismatch("matmul_a_bt", a, b);
    Matrix c(a.rows(), b.rows());
    const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const double* __restrict arow = a.row(i);
        double* __restrict crow = c.row(i);
        std::size_t j = 0;
        for (; j + 4 <= m; j += 4) {
            const double* __restrict b0 = b.row(j);
            const double* __restrict b1 = b.row(j + 1);
            const double* __restrict b2 = b.row(j + 2);
            const double* __restrict b3 = b.row(j + 3);
            double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
            for (std::size_t p = 0; p < k; ++p) {
                const double av = arow[p];
                s0 += av * b0[p];
                s1 += av * b1[p];
                s2 += av * b2[p];
                s3 += av * b3[p];
            }
            crow[j] = s0;
            crow[j + 1] = s1;
            crow[j + 2] = s2;
            crow[j + 3] = s3;
        }
        for (; j < m; ++j) {
            const double* __restrict brow = b.row(j);
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
            crow[j] = acc;
        }
    }
    return c;
}

}  // namespace miri
