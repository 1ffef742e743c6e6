#include "eoprop/models/config.hpp"

namespace eoprop::models {

const char* to_string(Architecture arch) {
    switch (arch) {
        case Architecture::cnn: return "cnn";
        case Architecture::gcn: return "gcn";
        case Architecture::gat: return "gat";
    }
    return "unknown";
}

const char* to_string(LossDesign loss) {
    switch (loss) {
        case LossDesign::bce_linear: return "bce_linear";
        case LossDesign::nll_logsoftmax: return "nll_logsoftmax";
    }
    return "unknown";
}

const char* short_name(LossDesign loss) { return loss == LossDesign::bce_linear ? "bce" : "nll"; }

Architecture parse_architecture(std::string_view name) {
    if (name == "cnn") return Architecture::cnn;
    if (name == "gcn") return Architecture::gcn;
    if (name == "gat") return Architecture::gat;
    throw ConfigError("unknown architecture '" + std::string(name) + "' (expected cnn, gcn or gat)");
}

LossDesign parse_loss_design(std::string_view name) {
    if (name == "bce_linear" || name == "bce") return LossDesign::bce_linear;
    if (name == "nll_logsoftmax" || name == "nll") return LossDesign::nll_logsoftmax;
    throw ConfigError("unknown loss design '" + std::string(name) + "' (expected bce_linear or nll_logsoftmax)");
}

void ModelConfig::validate() const {
    if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
    if (layers < 1) throw ConfigError("layers must be >= 1");
    if (gat_heads < 1) throw ConfigError("gat_heads must be >= 1");
    if (n_labels < 1) throw ConfigError("n_labels must be >= 1");
    if (input_dim < 1) throw ConfigError("input_dim must be >= 1");
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    if (!(leaky_slope >= 0.0)) throw ConfigError("leaky_slope must be >= 0");
}

std::size_t ModelConfig::output_dim() const {
    return loss_design == LossDesign::bce_linear ? n_labels : 2 * n_labels;
}

std::string ModelConfig::tag() const { return std::string(to_string(architecture)) + "_" + short_name(loss_design); }

nlohmann::ordered_json to_json(const ModelConfig& c) {
    return {{"architecture", to_string(c.architecture)},
            {"loss_design", to_string(c.loss_design)},
            {"hidden_dim", c.hidden_dim},
            {"layers", c.layers},
            {"gat_heads", c.gat_heads},
            {"leaky_slope", c.leaky_slope},
            {"n_labels", c.n_labels},
            {"input_dim", c.input_dim},
            {"n_max", c.n_max}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.architecture = parse_architecture(j.at("architecture").get<std::string>());
    c.loss_design = parse_loss_design(j.at("loss_design").get<std::string>());
    c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
    c.layers = j.value("layers", c.layers);
    c.gat_heads = j.value("gat_heads", c.gat_heads);
    c.leaky_slope = j.value("leaky_slope", c.leaky_slope);
    c.n_labels = j.value("n_labels", c.n_labels);
    c.input_dim = j.value("input_dim", c.input_dim);
    c.n_max = j.value("n_max", c.n_max);
    return c;
}

}  // namespace eoprop::models
