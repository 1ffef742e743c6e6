#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace eoprop::models {

enum class Architecture { cnn, gcn, gat };
enum class LossDesign { bce_linear, nll_logsoftmax };

const char* to_string(Architecture arch);
const char* to_string(LossDesign loss);
/// Accepts "cnn", "gcn", "gat".
Architecture parse_architecture(std::string_view name);
/// Accepts "bce_linear"/"bce" and "nll_logsoftmax"/"nll".
LossDesign parse_loss_design(std::string_view name);
/// Short form used in file names: "bce" or "nll".
const char* short_name(LossDesign loss);

inline constexpr Architecture kAllArchitectures[] = {Architecture::cnn, Architecture::gcn, Architecture::gat};
inline constexpr LossDesign kAllLossDesigns[] = {LossDesign::nll_logsoftmax, LossDesign::bce_linear};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ModelConfig {
    Architecture architecture = Architecture::gcn;
    LossDesign loss_design = LossDesign::bce_linear;
    std::size_t hidden_dim = 64;
    std::size_t layers = 2;
    std::size_t gat_heads = 1;
    double leaky_slope = 0.2;
    std::size_t n_labels = 0;
    std::size_t input_dim = 0;  // 1 + fingerprint width
    std::size_t n_max = 64;     // CNN stack height

    /// Throws ConfigError on out-of-range fields.
    void validate() const;
    /// Width of the model output: C for bce_linear, 2C for nll_logsoftmax.
    std::size_t output_dim() const;
    /// e.g. "gcn_bce".
    std::string tag() const;
};

nlohmann::ordered_json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j);

}  // namespace eoprop::models
