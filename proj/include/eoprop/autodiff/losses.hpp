#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "eoprop/autodiff/value.hpp"

namespace eoprop::autodiff {

class NonFiniteInput : public std::invalid_argument {
public:
    explicit NonFiniteInput(const std::string& what) : std::invalid_argument("non-finite input: " + what) {}
};

/// Mean over entries of max(z,0) - z*y + log1p(exp(-|z|)).
/// `target` has the logits' shape with entries in {0,1}.
Value bce_with_logits(const Value& logits, const Tensor& target);

/// Class-index NLL for per-label (absent, present) log-distributions.
/// `log_probs` is Cx2; `target_classes[c]` selects column 0 (absent) or 1 (present).
/// Returns the mean over labels of -log_probs[c, y_c].
Value nll_paired(const Value& log_probs, std::span<const int> target_classes);

}  // namespace eoprop::autodiff
