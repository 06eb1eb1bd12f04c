#pragma once

#include <cstddef>
#include <vector>

namespace miri {

/// Dense row-major matrix of doubles. The workhorse container for data
/// batches, masks and network parameters.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    /// True when every entry is finite (no NaN/Inf).
    bool all_finite() const;

    void fill(double value) { data_.assign(data_.size(), value); }

    /// Rows of this matrix selected by `indices`, in order.
    Matrix take_rows(const std::vector<std::size_t>& indices) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// C = A * B. Throws ShapeError on inner-dimension mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

/// C = A^T * B with A (n x r), B (n x c) -> (r x c). Used for weight gradients.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);

/// C = A * B^T with A (r x k), B (c x k) -> (r x c). Used for input gradients.
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

}  // namespace miri
