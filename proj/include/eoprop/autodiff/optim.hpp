#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eoprop/autodiff/value.hpp"

namespace eoprop::autodiff {

class MissingGradient : public std::logic_error {
public:
    explicit MissingGradient(std::size_t index)
        : std::logic_error("parameter " + std::to_string(index) + " has no gradient; run backward() first") {}
};

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Moments for one parameter list. Created lazily on the first step.
struct AdamState {
    AdamConfig config;
    std::vector<Tensor> first_moment;
    std::vector<Tensor> second_moment;
    std::uint64_t step = 0;
};

/// Bias-corrected Adam update. Throws MissingGradient if any parameter was not
/// reached by a backward pass since its last zero_grad().
void adam_step(std::span<Value> params, AdamState& state);

/// Plain gradient descent: p -= lr * grad.
void sgd_step(std::span<Value> params, double lr);

void zero_grads(std::span<Value> params);

}  // namespace eoprop::autodiff
