#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eoprop::autodiff {

/// Raised when operand shapes are incompatible for an operation.
class ShapeMismatch : public std::invalid_argument {
public:
    explicit ShapeMismatch(const std::string& what) : std::invalid_argument("shape mismatch: " + what) {}
};

/// Dense row-major 2-D array of doubles. Vectors are 1xN or Nx1, scalars 1x1.
class Tensor {
public:
    Tensor() = default;
    Tensor(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Tensor scalar(double v) { return Tensor(1, 1, v); }
    static Tensor row_vector(std::span<const double> values);
    static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Tensor identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool same_shape(const Tensor& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    std::string shape_string() const;

    void fill(double v);
    Tensor& operator+=(const Tensor& other);

    /// Returns a copy with the same elements laid out as rows x cols.
    Tensor reshaped(std::size_t rows, std::size_t cols) const;
    Tensor transposed() const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Plain (non-differentiable) matrix product.
Tensor matmul(const Tensor& a, const Tensor& b);

/// Largest absolute elementwise difference; throws ShapeMismatch on differing shapes.
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace eoprop::autodiff
