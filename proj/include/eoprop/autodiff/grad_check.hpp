#pragma once

#include <functional>
#include <span>
#include <string>

#include "eoprop/autodiff/value.hpp"

namespace eoprop::autodiff {

struct GradCheckReport {
    double max_rel_error = 0.0;
    double max_abs_error = 0.0;
    std::size_t worst_param = 0;
    std::size_t worst_index = 0;
    std::size_t coordinates = 0;
    double tolerance = 0.0;
    bool passed = true;

    std::string summary() const;
};

/// Compares reverse-mode gradients of `fn` against central differences.
///
/// `fn` must rebuild its graph from the current parameter data on every call.
/// Relative error per coordinate is |analytic - numeric| / max(|analytic|, |numeric|, floor);
/// the floor keeps near-zero gradients from amplifying rounding noise.
/// Parameter data is restored and gradients are left zeroed on return.
GradCheckReport grad_check(const std::function<Value()>& fn, std::span<Value> params, double epsilon = 1e-5,
                           double tolerance = 1e-4, double floor = 1e-6);

}  // namespace eoprop::autodiff
