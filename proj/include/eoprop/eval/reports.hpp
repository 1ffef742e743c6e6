#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "eoprop/eval/cv.hpp"

namespace eoprop::eval {

class IoFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form; used for every number in the reports.
std::string format_number(double value);

/// Sorts results into the summary row order: architecture cnn, gcn, gat,
/// each with nll then bce.
std::vector<const CvResult*> summary_order(std::span<const CvResult> results);

/// Writes under `out_dir`:
///   <tag>/auc_history.csv     epoch,fold,label,auc   (auc "NA" if degenerate in that fold)
///   <tag>/macro_history.csv   epoch,fold,train_loss,test_loss,macro_auc
///   <tag>/roc_<label>.csv     fpr,tpr over the pooled out-of-fold scores at the report epoch
///   summary.json              one row per configuration
///   auc_history.svg           fold-mean macro AUC vs epoch, one line per configuration
/// With `label_filter` set, only that label's ROC file is written.
void emit_reports(std::span<const CvResult> results, const std::filesystem::path& out_dir,
                  const std::optional<std::string>& label_filter = std::nullopt);

std::string render_svg(std::span<const CvResult> results);

}  // namespace eoprop::eval
