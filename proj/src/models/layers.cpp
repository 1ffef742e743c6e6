#include "eoprop/models/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eoprop/autodiff/losses.hpp"

namespace eoprop::models {

namespace ad = autodiff;

Tensor normalize_adjacency(const Tensor& weights) {
    if (weights.rows() != weights.cols()) throw ad::ShapeMismatch("adjacency must be square, got " + weights.shape_string());
    const std::size_t n = weights.rows();
    std::vector<double> inv_sqrt(n);
    for (std::size_t i = 0; i < n; ++i) {
        double degree = 0.0;
        for (std::size_t j = 0; j < n; ++j) degree += weights(i, j);
        if (!(degree > 0.0)) throw ZeroDegree("node " + std::to_string(i) + " has non-positive degree");
        inv_sqrt[i] = 1.0 / std::sqrt(degree);
    }
    Tensor out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = inv_sqrt[i] * weights(i, j) * inv_sqrt[j];
    return out;
}

Value gcn_layer(const Value& h, const Tensor& norm_adj, const Value& weight, bool activate) {
    if (norm_adj.rows() != h.rows() || norm_adj.cols() != h.rows()) {
        throw ad::ShapeMismatch("gcn adjacency " + norm_adj.shape_string() + " vs features " + h.data().shape_string());
    }
    Value out = ad::matmul(ad::matmul(Value::constant(norm_adj), h), weight);
    return activate ? ad::relu(out) : out;
}

Value gat_attention(const Value& projected, const Tensor& similarity, const GatHead& head, double slope) {
    const std::size_t n = projected.rows();
    if (similarity.rows() != n || similarity.cols() != n) {
        throw ad::ShapeMismatch("gat similarity " + similarity.shape_string() + " for " + std::to_string(n) + " nodes");
    }
    Value src = ad::matmul(projected, head.attn_src);                  // N x 1
    Value dst = ad::transpose(ad::matmul(projected, head.attn_dst));   // 1 x N
    Value logits = ad::leaky_relu(ad::add(src, dst), slope);           // N x N
    logits = ad::add(logits, ad::multiply(head.edge_scale, Value::constant(similarity)));
    return ad::row_softmax(logits);
}

Value gat_layer(const Value& h, const Tensor& similarity, std::span<const GatHead> heads, double slope,
                bool final_layer) {
    if (heads.empty()) throw ad::ShapeMismatch("gat_layer needs at least one head");
    std::vector<Value> outputs;
    for (const auto& head : heads) {
        Value projected = ad::matmul(h, head.weight);
        Value alpha = gat_attention(projected, similarity, head, slope);
        outputs.push_back(ad::matmul(alpha, projected));
    }
    if (outputs.size() == 1) return outputs.front();
    if (!final_layer) return ad::concat(outputs, ad::Axis::cols);
    Value total = outputs.front();
    for (std::size_t k = 1; k < outputs.size(); ++k) total = ad::add(total, outputs[k]);
    return ad::scale(total, 1.0 / static_cast<double>(outputs.size()));
}

Value conv1d_same(const Value& x, const Value& weight, const Value& bias) {
    if (weight.rows() != 3 * x.cols()) {
        throw ad::ShapeMismatch("conv weight " + weight.data().shape_string() + " for " + std::to_string(x.cols()) +
                                " input channels");
    }
    Value window = ad::concat({ad::shift_rows(x, -1), x, ad::shift_rows(x, 1)}, ad::Axis::cols);
    return ad::add(ad::matmul(window, weight), bias);
}

Value readout(const Value& node_feats) {
    if (node_feats.rows() == 0) throw ad::ShapeMismatch("readout of an empty graph");
    return ad::mean(node_feats, ad::Axis::rows);
}

LabelScores score(const Tensor& logits, LossDesign design, std::size_t n_labels) {
    const std::size_t expected = design == LossDesign::bce_linear ? n_labels : 2 * n_labels;
    if (logits.size() != expected) {
        throw ad::ShapeMismatch("score expects " + std::to_string(expected) + " logits, got " +
                                std::to_string(logits.size()));
    }
    LabelScores out;
    out.scores.resize(n_labels);
    for (std::size_t c = 0; c < n_labels; ++c) {
        if (design == LossDesign::bce_linear) {
            const double z = logits[c];
            out.scores[c] = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
            continue;
        }
        // Row c of the C x 2 reshape: (absent, present). Log-softmax, then exp.
        const double absent = logits[2 * c];
        const double present = logits[2 * c + 1];
        const double m = std::max(absent, present);
        const double log_norm = m + std::log(std::exp(absent - m) + std::exp(present - m));
        out.scores[c] = std::exp(present - log_norm);
    }
    return out;
}

Value loss(const Value& logits, std::span<const int> target, LossDesign design) {
    if (design == LossDesign::bce_linear) {
        Tensor t(1, target.size());
        for (std::size_t c = 0; c < target.size(); ++c) t[c] = target[c];
        return ad::bce_with_logits(logits, t);
    }
    if (logits.data().size() != 2 * target.size()) {
        throw ad::ShapeMismatch("paired head needs " + std::to_string(2 * target.size()) + " logits");
    }
    Value log_probs = ad::log_softmax(ad::reshape(logits, target.size(), 2), ad::Axis::cols);
    return ad::nll_paired(log_probs, target);
}

}  // namespace eoprop::models
