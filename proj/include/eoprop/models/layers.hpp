#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "eoprop/autodiff/ops.hpp"
#include "eoprop/models/config.hpp"

namespace eoprop::models {

using autodiff::Tensor;
using autodiff::Value;

class ZeroDegree : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// D^-1/2 W D^-1/2 for a symmetric similarity matrix W that already carries
/// its self-loops; D is the diagonal of row sums.
Tensor normalize_adjacency(const Tensor& weights);

/// norm_adj * H * weight, followed by relu when `activate` is set.
Value gcn_layer(const Value& h, const Tensor& norm_adj, const Value& weight, bool activate);

struct GatHead {
    Value weight;      // F x F'
    Value attn_src;    // F' x 1, scores the receiving node i
    Value attn_dst;    // F' x 1, scores the neighbor j
    Value edge_scale;  // 1 x 1, multiplies the similarity of (i, j)
};

/// Attention coefficients of one head: row i is softmax over j of
/// leaky_relu(a_src . W h_i + a_dst . W h_j) + edge_scale * s_ij.
Value gat_attention(const Value& projected, const Tensor& similarity, const GatHead& head, double slope);

/// One multi-head attention layer over the complete graph. Head outputs are
/// concatenated, or averaged when `final_layer` is set.
Value gat_layer(const Value& h, const Tensor& similarity, std::span<const GatHead> heads, double slope,
                bool final_layer);

/// Same-padded kernel-3 convolution along rows (compounds), features as
/// channels. `weight` is (3*F) x F' stacked as [previous row; row; next row].
Value conv1d_same(const Value& x, const Value& weight, const Value& bias);

/// Mean over nodes.
Value readout(const Value& node_feats);

struct LabelScores {
    std::vector<double> scores;
};

/// Per-label probabilities: sigmoid of the logits for bce_linear; for
/// nll_logsoftmax the logits are read as C (absent, present) pairs and the
/// score is the softmax probability of "present".
LabelScores score(const Tensor& logits, LossDesign design, std::size_t n_labels);

/// Training loss of a 1 x output_dim logit row against a 0/1 target.
Value loss(const Value& logits, std::span<const int> target, LossDesign design);

}  // namespace eoprop::models
