#pragma once

#include <vector>

#include "eoprop/autodiff/value.hpp"

namespace eoprop::autodiff {

/// The axis a reduction collapses: `rows` yields 1xC, `cols` yields Rx1, `all` yields 1x1.
enum class Axis { rows, cols, all };

Value matmul(const Value& a, const Value& b);
Value transpose(const Value& a);

// Elementwise binary ops broadcast any dimension of extent 1, so row vectors,
// column vectors and scalars combine with matrices, and a column plus a row
// yields their outer sum.
Value add(const Value& a, const Value& b);
Value sub(const Value& a, const Value& b);
Value multiply(const Value& a, const Value& b);
Value scale(const Value& a, double factor);

/// Concatenation along `axis`: Axis::rows stacks vertically, Axis::cols side by side.
Value concat(const std::vector<Value>& parts, Axis axis);
Value reshape(const Value& a, std::size_t rows, std::size_t cols);
/// Rows [begin, end).
Value slice_rows(const Value& a, std::size_t begin, std::size_t end);
/// out[i] = a[i + offset] where that row exists, zero otherwise.
Value shift_rows(const Value& a, long offset);

Value relu(const Value& a);
Value leaky_relu(const Value& a, double slope);
Value sigmoid(const Value& a);
Value exp(const Value& a);
Value log(const Value& a);

Value sum(const Value& a, Axis axis = Axis::all);
Value mean(const Value& a, Axis axis = Axis::all);
/// Maximum along an axis; the gradient goes to the first maximal element.
Value max(const Value& a, Axis axis);

/// Softmax over each row.
Value row_softmax(const Value& a);
/// Log-softmax normalizing along `axis` (cols: each row is a distribution).
Value log_softmax(const Value& a, Axis axis = Axis::cols);

Value operator+(const Value& a, const Value& b);
Value operator-(const Value& a, const Value& b);
Value operator*(const Value& a, const Value& b);

}  // namespace eoprop::autodiff
