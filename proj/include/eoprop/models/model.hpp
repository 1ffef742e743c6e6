#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eoprop/autodiff/checkpoint.hpp"
#include "eoprop/autodiff/random.hpp"
#include "eoprop/dataset/dataset.hpp"
#include "eoprop/models/layers.hpp"

namespace eoprop::models {

/// Precomputed per-sample input. Graph models read nodes/similarity/norm_adj,
/// the CNN reads the stacked matrix.
struct ModelInput {
    Tensor nodes;
    Tensor similarity;
    Tensor norm_adj;
    dataset::StackedSample stacked;
};

ModelInput prepare_input(const dataset::OilSample& sample, const ModelConfig& config);
ModelInput prepare_input(const dataset::GraphSample& graph, const dataset::StackedSample& stacked,
                         Architecture architecture);

struct NamedParameter {
    std::string name;
    Value value;
};

/// One of the three architectures with its loss-design head.
///
///  cnn: `layers` x (conv1d_same -> relu) over the valid rows of the stack,
///       masked mean ++ max pooling, dense head.
///  gcn: `layers` gcn_layer (relu on all but the last), mean readout, dense head.
///  gat: `layers` gat_layer (relu between layers, heads averaged on the last),
///       mean readout, dense head.
class Model {
public:
    Model(const ModelConfig& config, std::uint64_t seed);
    // Parameters are graph nodes; a copy would alias them.
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;
    Model(Model&&) = default;
    Model& operator=(Model&&) = default;

    const ModelConfig& config() const noexcept { return config_; }

    /// 1 x output_dim logits.
    Value logits(const ModelInput& input) const;
    Value cnn_forward(const dataset::StackedSample& sample) const;
    Value graph_forward(const Tensor& nodes, const Tensor& similarity, const Tensor& norm_adj) const;

    LabelScores predict(const ModelInput& input) const;

    std::vector<Value> parameters() const;
    const std::vector<NamedParameter>& named_parameters() const noexcept { return params_; }
    std::vector<autodiff::NamedTensor> state() const;
    /// Copies tensors by name; throws CheckpointError on a missing name or shape mismatch.
    void load_state(const std::vector<autodiff::NamedTensor>& tensors);

private:
    Value add_param(std::string name, Tensor init);

    ModelConfig config_;
    std::vector<NamedParameter> params_;
    std::vector<Value> layer_weights_;
    std::vector<Value> layer_biases_;       // cnn only
    std::vector<std::vector<GatHead>> gat_heads_;
    Value head_weight_;
    Value head_bias_;
};

}  // namespace eoprop::models
