#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eoprop/autodiff/tensor.hpp"

namespace eoprop::autodiff {

class NonScalarLoss : public std::invalid_argument {
public:
    explicit NonScalarLoss(const std::string& shape)
        : std::invalid_argument("backward() needs a 1x1 loss, got " + shape) {}
};

/// Receives the gradient flowing into an op's output and accumulates into the
/// gradients of its parents. A null entry means that parent needs no gradient.
using BackwardFn = std::function<void(const Tensor& grad_out, const std::vector<Tensor*>& parent_grads)>;

namespace detail {
struct Node {
    Tensor data;
    Tensor grad;
    bool requires_grad = false;
    bool grad_populated = false;
    std::vector<std::shared_ptr<Node>> parents;
    BackwardFn backward;
    std::string op;
};
}  // namespace detail

/// Handle to a node of a define-by-run computation graph.
///
/// Copies share the node. Parameters are leaves with requires_grad set; their
/// gradients accumulate across backward() calls until zero_grad().
class Value {
public:
    Value() = default;

    static Value constant(Tensor data);
    static Value parameter(Tensor data);
    /// Builds an op node. The node requires a gradient iff any parent does.
    static Value from_op(Tensor data, std::vector<Value> parents, BackwardFn backward, std::string_view op);

    bool valid() const noexcept { return static_cast<bool>(node_); }
    const Tensor& data() const { return node_->data; }
    Tensor& mutable_data() { return node_->data; }
    const Tensor& grad() const { return node_->grad; }
    /// Writable gradient; counts as populated for the optimizers.
    Tensor& mutable_grad();
    bool requires_grad() const { return node_->requires_grad; }
    bool has_grad() const { return node_->grad_populated; }
    const std::string& op() const { return node_->op; }
    std::size_t rows() const { return node_->data.rows(); }
    std::size_t cols() const { return node_->data.cols(); }
    double item() const;

    void zero_grad();

    /// Reverse-mode sweep from this 1x1 value. Intermediate gradients are
    /// recomputed on every call; leaf gradients accumulate.
    void backward() const;

    friend bool operator==(const Value& a, const Value& b) { return a.node_ == b.node_; }

private:
    explicit Value(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
    std::shared_ptr<detail::Node> node_;
};

}  // namespace eoprop::autodiff
