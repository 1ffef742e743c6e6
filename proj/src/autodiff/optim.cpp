#include "eoprop/autodiff/optim.hpp"

#include <cmath>

namespace eoprop::autodiff {
namespace {

void require_gradients(std::span<Value> params) {
    for (std::size_t i = 0; i < params.size(); ++i)
        if (!params[i].has_grad()) throw MissingGradient(i);
}

}  // namespace

void adam_step(std::span<Value> params, AdamState& state) {
    require_gradients(params);
    if (state.first_moment.empty()) {
        for (const auto& p : params) {
            state.first_moment.emplace_back(p.rows(), p.cols());
            state.second_moment.emplace_back(p.rows(), p.cols());
        }
    }
    if (state.first_moment.size() != params.size()) throw ShapeMismatch("AdamState built for a different parameter list");

    ++state.step;
    const auto& cfg = state.config;
    const double t = static_cast<double>(state.step);
    const double bias1 = 1.0 - std::pow(cfg.beta1, t);
    const double bias2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = params[i].mutable_data();
        const Tensor& g = params[i].grad();
        Tensor& m = state.first_moment[i];
        Tensor& v = state.second_moment[i];
        if (!m.same_shape(p)) throw ShapeMismatch("Adam moment shape");
        for (std::size_t j = 0; j < p.size(); ++j) {
            m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[j];
            v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[j] * g[j];
            const double m_hat = m[j] / bias1;
            const double v_hat = v[j] / bias2;
            p[j] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    }
}

void sgd_step(std::span<Value> params, double lr) {
    require_gradients(params);
    for (auto& param : params) {
        Tensor& p = param.mutable_data();
        const Tensor& g = param.grad();
        for (std::size_t j = 0; j < p.size(); ++j) p[j] -= lr * g[j];
    }
}

void zero_grads(std::span<Value> params) {
    for (auto& p : params) p.zero_grad();
}

}  // namespace eoprop::autodiff
