#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "eoprop/cli/config_file.hpp"

namespace eoprop::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Builds the dataset and writes the archive to `<out>/dataset`. The exclusion
/// report goes to `err`.
void cmd_featurize(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs CV for each selected configuration. Writes `<out>/results/<tag>/`
/// with result.json and fold_<k>.ckpt (+ .json sidecar).
void cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Reads every `<out>/results/<tag>/result.json` and emits reports into `<out>/reports`.
void cmd_report(const RunConfig& config, const std::optional<std::string>& label, std::ostream& out);

/// Entry point: `eoprop <featurize|train|report> [--config FILE] [flags]`.
/// Precedence: built-in defaults < config file < EOPROP_OUT_DIR < flags.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eoprop::cli
