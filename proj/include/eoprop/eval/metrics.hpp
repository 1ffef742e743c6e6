#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eoprop::eval {

class DegenerateLabels : public std::invalid_argument {
public:
    DegenerateLabels() : std::invalid_argument("DegenerateLabels: need at least one positive and one negative label") {}
};

class AllLabelsDegenerate : public std::invalid_argument {
public:
    AllLabelsDegenerate() : std::invalid_argument("AllLabelsDegenerate: no label column has both classes") {}
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

using RocCurve = std::vector<RocPoint>;

/// Threshold sweep from the highest score down. Tied scores move as one step,
/// giving a diagonal segment. Starts at (0,0) and ends at (1,1).
RocCurve roc_points(std::span<const double> scores, std::span<const int> labels);

/// Mann-Whitney AUC: (wins + ties/2) / (P*N), computed from mid-ranks.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Area under a piecewise-linear curve by the trapezoid rule.
double trapezoid_area(const RocCurve& curve);

struct MacroAuc {
    double value = 0.0;
    std::vector<std::optional<double>> per_label;  // nullopt for skipped columns
    std::vector<std::size_t> skipped;
};

/// Unweighted mean of per-label AUCs over columns that have both classes.
/// scores[i][c] and labels[i][c] index sample i, label c.
MacroAuc macro_auc(const std::vector<std::vector<double>>& scores, const std::vector<std::vector<int>>& labels);

}  // namespace eoprop::eval
