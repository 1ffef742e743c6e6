#include "eoprop/autodiff/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace eoprop::autodiff {

Tensor Tensor::row_vector(std::span<const double> values) {
    Tensor t(1, values.size());
    std::copy(values.begin(), values.end(), t.data_.begin());
    return t;
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Tensor t(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeMismatch("ragged initializer rows");
        for (double v : row) t.data_[i++] = v;
    }
    return t;
}

Tensor Tensor::identity(std::size_t n) {
    Tensor t(n, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
    return t;
}

std::string Tensor::shape_string() const {
    return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor& Tensor::operator+=(const Tensor& other) {
    if (!same_shape(other)) throw ShapeMismatch(shape_string() + " += " + other.shape_string());
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Tensor Tensor::reshaped(std::size_t rows, std::size_t cols) const {
    if (rows * cols != data_.size()) {
        throw ShapeMismatch("cannot reshape " + shape_string() + " to (" + std::to_string(rows) + "x" +
                            std::to_string(cols) + ")");
    }
    Tensor t = *this;
    t.rows_ = rows;
    t.cols_ = cols;
    return t;
}

Tensor Tensor::transposed() const {
    Tensor t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.cols() != b.rows()) throw ShapeMismatch("matmul " + a.shape_string() + " * " + b.shape_string());
    Tensor out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out_row = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto b_row = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
        }
    }
    return out;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw ShapeMismatch(a.shape_string() + " vs " + b.shape_string());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace eoprop::autodiff
