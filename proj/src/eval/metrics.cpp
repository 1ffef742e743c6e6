#include "eoprop/eval/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace eoprop::eval {
namespace {

std::pair<std::size_t, std::size_t> count_classes(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
    std::size_t pos = 0;
    for (int y : labels) pos += y != 0 ? 1 : 0;
    const std::size_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0) throw DegenerateLabels();
    return {pos, neg};
}

std::vector<std::size_t> order_by_score_desc(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace

RocCurve roc_points(std::span<const double> scores, std::span<const int> labels) {
    const auto [pos, neg] = count_classes(scores, labels);
    const auto order = order_by_score_desc(scores);
    RocCurve curve{{0.0, 0.0}};
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores[order[i]];
        while (i < order.size() && scores[order[i]] == threshold) {
            (labels[order[i]] != 0 ? tp : fp) += 1;
            ++i;
        }
        curve.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                         static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return curve;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    const auto [pos, neg] = count_classes(scores, labels);
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of 1-based mid-ranks of the positives.
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] != 0) rank_sum += mid_rank;
        i = j;
    }
    const double p = static_cast<double>(pos);
    const double u = rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(neg));
}

double trapezoid_area(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
    return area;
}

MacroAuc macro_auc(const std::vector<std::vector<double>>& scores, const std::vector<std::vector<int>>& labels) {
    if (scores.size() != labels.size() || scores.empty()) throw std::invalid_argument("macro_auc needs matching, non-empty inputs");
    const std::size_t n_labels = labels.front().size();
    MacroAuc out;
    out.per_label.resize(n_labels);
    double total = 0.0;
    std::size_t used = 0;
    std::vector<double> column_scores(scores.size());
    std::vector<int> column_labels(scores.size());
    for (std::size_t c = 0; c < n_labels; ++c) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            column_scores[i] = scores[i].at(c);
            column_labels[i] = labels[i].at(c);
        }
        try {
            const double a = auc(column_scores, column_labels);
            out.per_label[c] = a;
            total += a;
            ++used;
        } catch (const DegenerateLabels&) {
            out.skipped.push_back(c);
        }
    }
    if (used == 0) throw AllLabelsDegenerate();
    out.value = total / static_cast<double>(used);
    return out;
}

}  // namespace eoprop::eval
