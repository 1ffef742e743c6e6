#include "eoprop/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eoprop::autodiff {
namespace {

std::size_t broadcast_extent(std::size_t a, std::size_t b, const Tensor& ta, const Tensor& tb) {
    if (a == b || b == 1) return a;
    if (a == 1) return b;
    throw ShapeMismatch("cannot broadcast " + ta.shape_string() + " with " + tb.shape_string());
}

// Sums `grad` (shaped like the broadcast output) back down to `target`'s shape.
void accumulate_reduced(const Tensor& grad, Tensor& target) {
    const bool rows_bc = target.rows() == 1 && grad.rows() != 1;
    const bool cols_bc = target.cols() == 1 && grad.cols() != 1;
    for (std::size_t r = 0; r < grad.rows(); ++r)
        for (std::size_t c = 0; c < grad.cols(); ++c)
            target(rows_bc ? 0 : r, cols_bc ? 0 : c) += grad(r, c);
}

template <class Fn>
Tensor broadcast_apply(const Tensor& a, const Tensor& b, Fn fn) {
    const std::size_t rows = broadcast_extent(a.rows(), b.rows(), a, b);
    const std::size_t cols = broadcast_extent(a.cols(), b.cols(), a, b);
    Tensor out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t ra = a.rows() == 1 ? 0 : r;
        const std::size_t rb = b.rows() == 1 ? 0 : r;
        for (std::size_t c = 0; c < cols; ++c) {
            out(r, c) = fn(a(ra, a.cols() == 1 ? 0 : c), b(rb, b.cols() == 1 ? 0 : c));
        }
    }
    return out;
}

template <class Forward, class Derivative>
Value unary(const Value& a, Forward forward, Derivative derivative, std::string_view name) {
    Tensor out = a.data();
    for (double& v : out.values()) v = forward(v);
    Tensor input = a.data();
    Tensor output = out;
    return Value::from_op(
        std::move(out), {a},
        [input = std::move(input), output = std::move(output), derivative](const Tensor& g,
                                                                           const std::vector<Tensor*>& pg) {
            Tensor& ga = *pg[0];
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * derivative(input[i], output[i]);
        },
        name);
}

double stable_sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

Value matmul(const Value& a, const Value& b) {
    Tensor out = autodiff::matmul(a.data(), b.data());
    return Value::from_op(
        std::move(out), {a, b},
        [a, b](const Tensor& g, const std::vector<Tensor*>& pg) {
            if (pg[0]) *pg[0] += autodiff::matmul(g, b.data().transposed());
            if (pg[1]) *pg[1] += autodiff::matmul(a.data().transposed(), g);
        },
        "matmul");
}

Value transpose(const Value& a) {
    return Value::from_op(
        a.data().transposed(), {a},
        [](const Tensor& g, const std::vector<Tensor*>& pg) { *pg[0] += g.transposed(); }, "transpose");
}

Value add(const Value& a, const Value& b) {
    Tensor out = broadcast_apply(a.data(), b.data(), [](double x, double y) { return x + y; });
    return Value::from_op(
        std::move(out), {a, b},
        [](const Tensor& g, const std::vector<Tensor*>& pg) {
            if (pg[0]) accumulate_reduced(g, *pg[0]);
            if (pg[1]) accumulate_reduced(g, *pg[1]);
        },
        "add");
}

Value sub(const Value& a, const Value& b) {
    Tensor out = broadcast_apply(a.data(), b.data(), [](double x, double y) { return x - y; });
    return Value::from_op(
        std::move(out), {a, b},
        [](const Tensor& g, const std::vector<Tensor*>& pg) {
            if (pg[0]) accumulate_reduced(g, *pg[0]);
            if (pg[1]) {
                Tensor neg = g;
                for (double& v : neg.values()) v = -v;
                accumulate_reduced(neg, *pg[1]);
            }
        },
        "sub");
}

Value multiply(const Value& a, const Value& b) {
    Tensor out = broadcast_apply(a.data(), b.data(), [](double x, double y) { return x * y; });
    return Value::from_op(
        std::move(out), {a, b},
        [a, b](const Tensor& g, const std::vector<Tensor*>& pg) {
            if (pg[0]) {
                Tensor ga = broadcast_apply(g, b.data(), [](double x, double y) { return x * y; });
                accumulate_reduced(ga, *pg[0]);
            }
            if (pg[1]) {
                Tensor gb = broadcast_apply(g, a.data(), [](double x, double y) { return x * y; });
                accumulate_reduced(gb, *pg[1]);
            }
        },
        "multiply");
}

Value scale(const Value& a, double factor) {
    Tensor out = a.data();
    for (double& v : out.values()) v *= factor;
    return Value::from_op(
        std::move(out), {a},
        [factor](const Tensor& g, const std::vector<Tensor*>& pg) {
            Tensor& ga = *pg[0];
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += factor * g[i];
        },
        "scale");
}

Value concat(const std::vector<Value>& parts, Axis axis) {
    if (parts.empty()) throw ShapeMismatch("concat of zero values");
    if (axis == Axis::all) throw ShapeMismatch("concat needs Axis::rows or Axis::cols");
    const bool vertical = axis == Axis::rows;
    std::size_t rows = parts[0].rows(), cols = parts[0].cols();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (vertical) {
            if (parts[i].cols() != cols) throw ShapeMismatch("vertical concat column count");
            rows += parts[i].rows();
        } else {
            if (parts[i].rows() != rows) throw ShapeMismatch("horizontal concat row count");
            cols += parts[i].cols();
        }
    }
    Tensor out(rows, cols);
    std::vector<std::size_t> offsets;
    std::size_t offset = 0;
    for (const auto& p : parts) {
        offsets.push_back(offset);
        const Tensor& d = p.data();
        for (std::size_t r = 0; r < d.rows(); ++r)
            for (std::size_t c = 0; c < d.cols(); ++c) {
                if (vertical) out(offset + r, c) = d(r, c);
                else out(r, offset + c) = d(r, c);
            }
        offset += vertical ? d.rows() : d.cols();
    }
    return Value::from_op(
        std::move(out), parts,
        [offsets, vertical](const Tensor& g, const std::vector<Tensor*>& pg) {
            for (std::size_t i = 0; i < pg.size(); ++i) {
                if (!pg[i]) continue;
                Tensor& gi = *pg[i];
                for (std::size_t r = 0; r < gi.rows(); ++r)
                    for (std::size_t c = 0; c < gi.cols(); ++c)
                        gi(r, c) += vertical ? g(offsets[i] + r, c) : g(r, offsets[i] + c);
            }
        },
        "concat");
}

Value reshape(const Value& a, std::size_t rows, std::size_t cols) {
    return Value::from_op(
        a.data().reshaped(rows, cols), {a},
        [](const Tensor& g, const std::vector<Tensor*>& pg) {
            Tensor& ga = *pg[0];
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
        },
        "reshape");
}

Value slice_rows(const Value& a, std::size_t begin, std::size_t end) {
    if (begin > end || end > a.rows()) throw ShapeMismatch("slice_rows out of range");
    Tensor out(end - begin, a.cols());
    for (std::size_t r = begin; r < end; ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r - begin, c) = a.data()(r, c);
    return Value::from_op(
        std::move(out), {a},
        [begin](const Tensor& g, const std::vector<Tensor*>& pg) {
            Tensor& ga = *pg[0];
            for (std::size_t r = 0; r < g.rows(); ++r)
                for (std::size_t c = 0; c < g.cols(); ++c) ga(begin + r, c) += g(r, c);
        },
        "slice_rows");
}

Value shift_rows(const Value& a, long offset) {
    const long n = static_cast<long>(a.rows());
    Tensor out(a.rows(), a.cols());
    for (long r = 0; r < n; ++r) {
        const long src = r + offset;
        if (src < 0 || src >= n) continue;
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a.data()(src, c);
    }
    return Value::from_op(
        std::move(out), {a},
        [offset, n](const Tensor& g, const std::vector<Tensor*>& pg) {
            Tensor& ga = *pg[0];
            for (long r = 0; r < n; ++r) {
                const long src = r + offset;
                if (src < 0 || src >= n) continue;
                for (std::size_t c = 0; c < g.cols(); ++c) ga(src, c) += g(r, c);
            }
        },
        "shift_rows");
}

Value relu(const Value& a) {
    return unary(
        a, [](double x) { return x > 0 ? x : 0.0; }, [](double x, double) { return x > 0 ? 1.0 : 0.0; }, "relu");
}

Value leaky_relu(const Value& a, double slope) {
    return unary(
        a, [slope](double x) { return x > 0 ? x : slope * x; },
        [slope](double x, double) { return x > 0 ? 1.0 : slope; }, "leaky_relu");
}

Value sigmoid(const Value& a) {
    return unary(a, stable_sigmoid, [](double, double y) { return y * (1.0 - y); }, "sigmoid");
}

Value exp(const Value& a) {
    return unary(
        a, [](double x) { return std::exp(x); }, [](double, double y) { return y; }, "exp");
}

Value log(const Value& a) {
    return unary(
        a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; }, "log");
}

Value sum(const Value& a, Axis axis) {
    const Tensor& d = a.data();
    Tensor out = axis == Axis::rows ? Tensor(1, d.cols()) : axis == Axis::cols ? Tensor(d.rows(), 1) : Tensor(1, 1);
    for (std::size_t r = 0; r < d.rows(); ++r)
        for (std::size_t c = 0; c < d.cols(); ++c)
            out(axis == Axis::rows || axis == Axis::all ? 0 : r, axis == Axis::cols || axis == Axis::all ? 0 : c) +=
                d(r, c);
    return Value::from_op(
        std::move(out), {a},
        [axis](const Tensor& g, const std::vector<Tensor*>& pg) {
            Tensor& ga = *pg[0];
            for (std::size_t r = 0; r < ga.rows(); ++r)
                for (std::size_t c = 0; c < ga.cols(); ++c)
                    ga(r, c) += g(axis == Axis::rows || axis == Axis::all ? 0 : r,
                                  axis == Axis::cols || axis == Axis::all ? 0 : c);
        },
        "sum");
}

Value mean(const Value& a, Axis axis) {
    const double count = axis == Axis::rows   ? static_cast<double>(a.rows())
                         : axis == Axis::cols ? static_cast<double>(a.cols())
                                              : static_cast<double>(a.data().size());
    if (count == 0) throw ShapeMismatch("mean over an empty axis");
    return scale(sum(a, axis), 1.0 / count);
}

Value max(const Value& a, Axis axis) {
    const Tensor& d = a.data();
    if (d.empty()) throw ShapeMismatch("max of an empty value");
    if (axis == Axis::all) return max(max(a, Axis::rows), Axis::cols);
    const bool over_rows = axis == Axis::rows;
    const std::size_t outer = over_rows ? d.cols() : d.rows();
    const std::size_t inner = over_rows ? d.rows() : d.cols();
    Tensor out = over_rows ? Tensor(1, d.cols()) : Tensor(d.rows(), 1);
    std::vector<std::size_t> argmax(outer);
    for (std::size_t o = 0; o < outer; ++o) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < inner; ++i) {
            const double v = over_rows ? d(i, o) : d(o, i);
            if (v > best) {
                best = v;
                best_i = i;
            }
        }
        out[o] = best;
        argmax[o] = best_i;
    }
    return Value::from_op(
        std::move(out), {a},
        [argmax = std::move(argmax), over_rows](const Tensor& g, const std::vector<Tensor*>& pg) {
            Tensor& ga = *pg[0];
            for (std::size_t o = 0; o < argmax.size(); ++o) {
                if (over_rows) ga(argmax[o], o) += g[o];
                else ga(o, argmax[o]) += g[o];
            }
        },
        "max");
}

Value row_softmax(const Value& a) {
    const Tensor& d = a.data();
    Tensor out(d.rows(), d.cols());
    for (std::size_t r = 0; r < d.rows(); ++r) {
        auto in = d.row(r);
        auto o = out.row(r);
        const double m = *std::max_element(in.begin(), in.end());
        double z = 0.0;
        for (std::size_t c = 0; c < in.size(); ++c) z += (o[c] = std::exp(in[c] - m));
        for (double& v : o) v /= z;
    }
    Tensor probs = out;
    return Value::from_op(
        std::move(out), {a},
        [probs = std::move(probs)](const Tensor& g, const std::vector<Tensor*>& pg) {
            Tensor& ga = *pg[0];
            for (std::size_t r = 0; r < g.rows(); ++r) {
                double dot = 0.0;
                for (std::size_t c = 0; c < g.cols(); ++c) dot += g(r, c) * probs(r, c);
                for (std::size_t c = 0; c < g.cols(); ++c) ga(r, c) += probs(r, c) * (g(r, c) - dot);
            }
        },
        "row_softmax");
}

Value log_softmax(const Value& a, Axis axis) {
    if (axis == Axis::all) throw ShapeMismatch("log_softmax needs Axis::rows or Axis::cols");
    if (axis == Axis::rows) return transpose(log_softmax(transpose(a), Axis::cols));
    const Tensor& d = a.data();
    Tensor out(d.rows(), d.cols());
    for (std::size_t r = 0; r < d.rows(); ++r) {
        auto in = d.row(r);
        const double m = *std::max_element(in.begin(), in.end());
        double z = 0.0;
        for (double v : in) z += std::exp(v - m);
        const double lse = m + std::log(z);
        for (std::size_t c = 0; c < in.size(); ++c) out(r, c) = in[c] - lse;
    }
    Tensor logp = out;
    return Value::from_op(
        std::move(out), {a},
        [logp = std::move(logp)](const Tensor& g, const std::vector<Tensor*>& pg) {
            Tensor& ga = *pg[0];
            for (std::size_t r = 0; r < g.rows(); ++r) {
                double gsum = 0.0;
                for (std::size_t c = 0; c < g.cols(); ++c) gsum += g(r, c);
                for (std::size_t c = 0; c < g.cols(); ++c) ga(r, c) += g(r, c) - std::exp(logp(r, c)) * gsum;
            }
        },
        "log_softmax");
}

Value operator+(const Value& a, const Value& b) { return add(a, b); }
Value operator-(const Value& a, const Value& b) { return sub(a, b); }
Value operator*(const Value& a, const Value& b) { return multiply(a, b); }

}  // namespace eoprop::autodiff
