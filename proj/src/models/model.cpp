#include "eoprop/models/model.hpp"

#include <algorithm>

namespace eoprop::models {

namespace ad = autodiff;

ModelInput prepare_input(const dataset::GraphSample& graph, const dataset::StackedSample& stacked,
                         Architecture architecture) {
    ModelInput in;
    if (architecture == Architecture::cnn) {
        in.stacked = stacked;
        return in;
    }
    in.nodes = graph.nodes;
    in.similarity = graph.weights;
    if (architecture == Architecture::gcn) in.norm_adj = normalize_adjacency(graph.weights);
    return in;
}

ModelInput prepare_input(const dataset::OilSample& sample, const ModelConfig& config) {
    if (config.architecture == Architecture::cnn) {
        ModelInput in;
        in.stacked = sample.stacked(config.n_max);
        return in;
    }
    return prepare_input(sample.graph(), dataset::StackedSample{}, config.architecture);
}

Model::Model(const ModelConfig& config, std::uint64_t seed) : config_(config) {
    config_.validate();
    ad::Rng rng(seed);
    const std::size_t h = config_.hidden_dim;
    std::size_t in_dim = config_.input_dim;
    std::size_t pooled = h;

    switch (config_.architecture) {
        case Architecture::cnn:
            for (std::size_t l = 0; l < config_.layers; ++l) {
                // Glorot over the full receptive field.
                Tensor w = ad::glorot_uniform(3 * in_dim, h, rng);
                layer_weights_.push_back(add_param("conv" + std::to_string(l) + ".weight", std::move(w)));
                layer_biases_.push_back(add_param("conv" + std::to_string(l) + ".bias", Tensor(1, h)));
                in_dim = h;
            }
            pooled = 2 * h;
            break;
        case Architecture::gcn:
            for (std::size_t l = 0; l < config_.layers; ++l) {
                layer_weights_.push_back(add_param("gcn" + std::to_string(l) + ".weight", ad::glorot_uniform(in_dim, h, rng)));
                in_dim = h;
            }
            break;
        case Architecture::gat:
            for (std::size_t l = 0; l < config_.layers; ++l) {
                const bool last = l + 1 == config_.layers;
                std::vector<GatHead> heads;
                for (std::size_t k = 0; k < config_.gat_heads; ++k) {
                    const std::string prefix = "gat" + std::to_string(l) + ".head" + std::to_string(k) + ".";
                    GatHead head;
                    head.weight = add_param(prefix + "weight", ad::glorot_uniform(in_dim, h, rng));
                    head.attn_src = add_param(prefix + "attn_src", ad::glorot_uniform(h, 1, rng));
                    head.attn_dst = add_param(prefix + "attn_dst", ad::glorot_uniform(h, 1, rng));
                    head.edge_scale = add_param(prefix + "edge_scale", Tensor(1, 1));
                    heads.push_back(std::move(head));
                }
                gat_heads_.push_back(std::move(heads));
                in_dim = last ? h : h * config_.gat_heads;
            }
            break;
    }
    head_weight_ = add_param("head.weight", ad::glorot_uniform(pooled, config_.output_dim(), rng));
    head_bias_ = add_param("head.bias", Tensor(1, config_.output_dim()));
}

Value Model::add_param(std::string name, Tensor init) {
    Value v = Value::parameter(std::move(init));
    params_.push_back({std::move(name), v});
    return v;
}

Value Model::cnn_forward(const dataset::StackedSample& sample) const {
    if (sample.valid_rows == 0 || sample.valid_rows > sample.matrix.rows()) {
        throw ad::ShapeMismatch("stacked sample needs 1..n_max valid rows");
    }
    if (sample.matrix.cols() != config_.input_dim) {
        throw ad::ShapeMismatch("stacked width " + std::to_string(sample.matrix.cols()) + ", model expects " +
                                std::to_string(config_.input_dim));
    }
    // Padding rows are zero at every depth, so convolving the valid prefix
    // with zero boundary rows is the same computation.
    Value h = ad::slice_rows(Value::constant(sample.matrix), 0, sample.valid_rows);
    for (std::size_t l = 0; l < layer_weights_.size(); ++l) h = ad::relu(conv1d_same(h, layer_weights_[l], layer_biases_[l]));
    Value pooled = ad::concat({ad::mean(h, ad::Axis::rows), ad::max(h, ad::Axis::rows)}, ad::Axis::cols);
    return ad::add(ad::matmul(pooled, head_weight_), head_bias_);
}

Value Model::graph_forward(const Tensor& nodes, const Tensor& similarity, const Tensor& norm_adj) const {
    if (nodes.rows() == 0) throw ad::ShapeMismatch("graph has no nodes");
    if (nodes.cols() != config_.input_dim) {
        throw ad::ShapeMismatch("node width " + std::to_string(nodes.cols()) + ", model expects " +
                                std::to_string(config_.input_dim));
    }
    Value h = Value::constant(nodes);
    if (config_.architecture == Architecture::gcn) {
        for (std::size_t l = 0; l < layer_weights_.size(); ++l) {
            h = gcn_layer(h, norm_adj, layer_weights_[l], l + 1 < layer_weights_.size());
        }
    } else {
        for (std::size_t l = 0; l < gat_heads_.size(); ++l) {
            const bool last = l + 1 == gat_heads_.size();
            h = gat_layer(h, similarity, gat_heads_[l], config_.leaky_slope, last);
            if (!last) h = ad::relu(h);
        }
    }
    return ad::add(ad::matmul(readout(h), head_weight_), head_bias_);
}

Value Model::logits(const ModelInput& input) const {
    if (config_.architecture == Architecture::cnn) return cnn_forward(input.stacked);
    return graph_forward(input.nodes, input.similarity, input.norm_adj);
}

LabelScores Model::predict(const ModelInput& input) const {
    return score(logits(input).data(), config_.loss_design, config_.n_labels);
}

std::vector<Value> Model::parameters() const {
    std::vector<Value> out;
    out.reserve(params_.size());
    for (const auto& p : params_) out.push_back(p.value);
    return out;
}

std::vector<ad::NamedTensor> Model::state() const {
    std::vector<ad::NamedTensor> out;
    for (const auto& p : params_) out.push_back({p.name, p.value.data()});
    return out;
}

void Model::load_state(const std::vector<ad::NamedTensor>& tensors) {
    for (auto& p : params_) {
        const auto it = std::find_if(tensors.begin(), tensors.end(), [&](const auto& t) { return t.name == p.name; });
        if (it == tensors.end()) throw ad::CheckpointError("checkpoint lacks parameter " + p.name);
        if (!it->tensor.same_shape(p.value.data())) throw ad::CheckpointError("shape mismatch for " + p.name);
        p.value.mutable_data() = it->tensor;
    }
}

}  // namespace eoprop::models
