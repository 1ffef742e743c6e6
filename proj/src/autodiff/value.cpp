#include "eoprop/autodiff/value.hpp"

#include <unordered_set>
#include <utility>

namespace eoprop::autodiff {

Value Value::constant(Tensor data) {
    auto node = std::make_shared<detail::Node>();
    node->data = std::move(data);
    node->op = "constant";
    return Value(std::move(node));
}

Value Value::parameter(Tensor data) {
    auto node = std::make_shared<detail::Node>();
    node->grad = Tensor(data.rows(), data.cols());
    node->data = std::move(data);
    node->requires_grad = true;
    node->op = "parameter";
    return Value(std::move(node));
}

Value Value::from_op(Tensor data, std::vector<Value> parents, BackwardFn backward, std::string_view op) {
    auto node = std::make_shared<detail::Node>();
    node->data = std::move(data);
    node->op = std::string(op);
    for (auto& p : parents) {
        node->requires_grad = node->requires_grad || p.requires_grad();
        node->parents.push_back(std::move(p.node_));
    }
    if (node->requires_grad) node->backward = std::move(backward);
    return Value(std::move(node));
}

Tensor& Value::mutable_grad() {
    if (!node_->grad.same_shape(node_->data)) node_->grad = Tensor(rows(), cols());
    node_->grad_populated = true;
    return node_->grad;
}

double Value::item() const {
    if (rows() != 1 || cols() != 1) throw ShapeMismatch("item() on " + data().shape_string());
    return data()[0];
}

void Value::zero_grad() {
    node_->grad = Tensor(rows(), cols());
    node_->grad_populated = false;
}

void Value::backward() const {
    if (rows() != 1 || cols() != 1) throw NonScalarLoss(data().shape_string());
    if (!node_->requires_grad) return;

    // Iterative post-order DFS; `order` ends up topologically sorted with
    // parents before children.
    std::vector<detail::Node*> order;
    std::unordered_set<detail::Node*> visited;
    std::vector<std::pair<detail::Node*, std::size_t>> stack{{node_.get(), 0}};
    visited.insert(node_.get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            detail::Node* parent = node->parents[next++].get();
            if (parent->requires_grad && visited.insert(parent).second) stack.emplace_back(parent, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    for (detail::Node* n : order) {
        const bool is_leaf = !n->backward;
        if (!n->grad.same_shape(n->data) || !is_leaf) n->grad = Tensor(n->data.rows(), n->data.cols());
    }
    node_->grad[0] += 1.0;

    std::vector<Tensor*> parent_grads;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        detail::Node* n = *it;
        n->grad_populated = true;
        if (!n->backward) continue;
        parent_grads.clear();
        for (const auto& p : n->parents) parent_grads.push_back(p->requires_grad ? &p->grad : nullptr);
        n->backward(n->grad, parent_grads);
    }
}

}  // namespace eoprop::autodiff
