#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace imbsel {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        assert(data_.size() == rows_ * cols_);
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    void append_row(std::span<const double> values) {
        assert(values.size() == cols_ || rows_ == 0);
        if (rows_ == 0) cols_ = values.size();
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    void reserve_rows(std::size_t n) { data_.reserve(n * cols_); }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Rows of `m` picked by `idx`, in order (duplicates allowed).
Matrix take_rows(const Matrix& m, std::span<const std::size_t> idx);

/// Columns of `m` picked by `idx`, in order.
Matrix take_cols(const Matrix& m, std::span<const std::size_t> idx);

/// Vertically stack two matrices of equal width.
Matrix vstack(const Matrix& top, const Matrix& bottom);

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Column-major copy, one contiguous vector per feature.
std::vector<std::vector<double>> to_columns(const Matrix& m);

/// In-place Cholesky factorisation of a symmetric positive definite matrix
/// (lower triangle). Returns false when a non-positive pivot is met.
bool cholesky(Matrix& a);

/// Solves L Lᵀ x = b for a factor produced by `cholesky`.
std::vector<double> cholesky_solve(const Matrix& l, std::span<const double> b);

}  // namespace imbsel
