#include "eoprop/autodiff/losses.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace eoprop::autodiff {

Value bce_with_logits(const Value& logits, const Tensor& target) {
    const Tensor& z = logits.data();
    if (!z.same_shape(target)) throw ShapeMismatch("bce_with_logits " + z.shape_string() + " vs " + target.shape_string());
    const double n = static_cast<double>(z.size());
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        total += std::max(z[i], 0.0) - z[i] * target[i] + std::log1p(std::exp(-std::abs(z[i])));
    }
    return Value::from_op(
        Tensor::scalar(total / n), {logits},
        [z, target, n](const Tensor& g, const std::vector<Tensor*>& pg) {
            Tensor& gz = *pg[0];
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double s = z[i] >= 0 ? 1.0 / (1.0 + std::exp(-z[i])) : std::exp(z[i]) / (1.0 + std::exp(z[i]));
                gz[i] += g[0] * (s - target[i]) / n;
            }
        },
        "bce_with_logits");
}

Value nll_paired(const Value& log_probs, std::span<const int> target_classes) {
    const Tensor& lp = log_probs.data();
    if (lp.cols() != 2 || lp.rows() != target_classes.size()) {
        throw ShapeMismatch("nll_paired expects " + std::to_string(target_classes.size()) + "x2, got " +
                            lp.shape_string());
    }
    std::vector<std::size_t> picks;
    double total = 0.0;
    for (std::size_t c = 0; c < lp.rows(); ++c) {
        const int y = target_classes[c];
        if (y != 0 && y != 1) throw std::invalid_argument("nll_paired target must be 0 or 1");
        if (!std::isfinite(lp(c, 0)) || !std::isfinite(lp(c, 1))) {
            throw NonFiniteInput("log_probs row " + std::to_string(c));
        }
        total -= lp(c, static_cast<std::size_t>(y));
        picks.push_back(c * 2 + static_cast<std::size_t>(y));
    }
    const double n = static_cast<double>(lp.rows());
    return Value::from_op(
        Tensor::scalar(total / n), {log_probs},
        [picks = std::move(picks), n](const Tensor& g, const std::vector<Tensor*>& pg) {
            for (std::size_t idx : picks) (*pg[0])[idx] -= g[0] / n;
        },
        "nll_paired");
}

}  // namespace eoprop::autodiff
