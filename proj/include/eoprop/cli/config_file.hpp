#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eoprop/dataset/dataset.hpp"
#include "eoprop/eval/cv.hpp"
#include "eoprop/models/config.hpp"

namespace eoprop::cli {

/// Bad flag value, bad config entry or unknown key. Maps to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kOutDirEnv = "EOPROP_OUT_DIR";

struct RunConfig {
    std::filesystem::path property_table;
    std::filesystem::path analytical_dir;
    std::optional<std::filesystem::path> smiles_map;
    std::vector<std::filesystem::path> fingerprint_imports;

    dataset::FingerprintSettings fingerprint;
    std::size_t min_count = dataset::kDefaultMinCount;

    std::vector<models::Architecture> architectures{std::begin(models::kAllArchitectures),
                                                    std::end(models::kAllArchitectures)};
    std::vector<models::LossDesign> losses{std::begin(models::kAllLossDesigns), std::end(models::kAllLossDesigns)};
    models::ModelConfig model;  // n_labels and input_dim come from the archive
    eval::TrainConfig train;

    std::filesystem::path output_dir = "eoprop_out";

    std::filesystem::path archive_dir() const { return output_dir / "dataset"; }
    std::filesystem::path results_dir() const { return output_dir / "results"; }
    std::filesystem::path reports_dir() const { return output_dir / "reports"; }

    /// Model configurations in summary order.
    std::vector<models::ModelConfig> model_configs() const;
};

/// One recognised `section.key`.
struct SettingInfo {
    const char* key;
    const char* flag;
    const char* help;
    bool list = false;
};

const std::vector<SettingInfo>& settings();

/// Current value of `key` rendered as it would be written in a config file.
std::string setting_value(const RunConfig& config, const std::string& key);

/// Parses and applies one value. Relative paths are resolved against `base`.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   const std::filesystem::path& base = {});
void apply_list_setting(RunConfig& config, const std::string& key, const std::vector<std::string>& values,
                        const std::filesystem::path& base = {});

/// Grammar, one entry per line:
///   # comment            (also after a value)
///   [section]
///   key = value          value: bare token, "quoted string" or [item, item, ...]
/// Keys are looked up as `section.key`; unknown keys are a UsageError.
void apply_config_text(RunConfig& config, const std::string& text, const std::filesystem::path& base,
                       const std::string& source_name = "<config>");
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

}  // namespace eoprop::cli
