#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "eoprop/autodiff/optim.hpp"
#include "eoprop/dataset/dataset.hpp"
#include "eoprop/models/model.hpp"

namespace eoprop::eval {

inline constexpr std::size_t kDefaultReportEpoch = 30;

struct TrainConfig {
    std::size_t k = dataset::kDefaultFolds;
    std::uint64_t seed = dataset::kDefaultSeed;
    std::size_t epochs = 30;
    std::size_t report_epoch = kDefaultReportEpoch;
    autodiff::AdamConfig adam;
    std::size_t jobs = 1;

    void validate() const;
};

/// One completed epoch, numbered from 1. Train loss is the full-batch loss
/// before that epoch's update; test metrics are measured after it.
struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double test_loss = 0.0;
    std::vector<std::optional<double>> label_auc;  // nullopt where the fold column is degenerate
    double macro_auc = 0.0;
};

using EpochHistory = std::vector<EpochRecord>;

struct FoldResult {
    std::size_t fold = 0;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    EpochHistory history;
    /// Held-out scores at the report epoch, one row per test index.
    std::vector<std::vector<double>> report_scores;
    std::vector<autodiff::NamedTensor> final_state;
};

struct CvResult {
    models::ModelConfig model;
    TrainConfig train;
    std::vector<std::string> labels;
    std::vector<std::string> sample_names;
    std::vector<std::vector<int>> targets;  // per sample, aligned with sample_names
    std::vector<FoldResult> folds;
    std::size_t truncated_samples = 0;      // CNN stacks that hit n_max

    /// min(report_epoch, epochs).
    std::size_t effective_report_epoch() const;
    double mean_macro_auc(std::size_t epoch) const;
    double std_macro_auc(std::size_t epoch) const;
    /// Fold-mean AUC per label at `epoch`; nullopt if no fold had the label.
    std::vector<std::optional<double>> mean_label_auc(std::size_t epoch) const;
    /// Out-of-fold scores at the report epoch, indexed by sample.
    std::vector<std::vector<double>> pooled_report_scores() const;
};

/// Seed used for the model of fold `fold`.
std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold);

/// Per-sample inputs for `config`; counts truncated CNN stacks into `truncated`.
std::vector<models::ModelInput> prepare_inputs(const dataset::Dataset& data, const models::ModelConfig& config,
                                               std::size_t* truncated = nullptr);

/// Mean loss of `model` over `indices`; builds no gradients.
double mean_loss(const models::Model& model, std::span<const models::ModelInput> inputs,
                 const std::vector<std::vector<int>>& targets, std::span<const std::size_t> indices);

/// One full-batch epoch: accumulates the mean loss gradient over `indices`
/// and takes a single Adam step. Returns the pre-update mean loss.
double train_epoch(models::Model& model, autodiff::AdamState& adam, std::span<const models::ModelInput> inputs,
                   const std::vector<std::vector<int>>& targets, std::span<const std::size_t> indices);

/// Trains on `indices` for `epochs` and returns the per-epoch train loss.
std::vector<double> fit(models::Model& model, std::span<const models::ModelInput> inputs,
                        const std::vector<std::vector<int>>& targets, std::span<const std::size_t> indices,
                        std::size_t epochs, const autodiff::AdamConfig& adam = {});

/// K-fold CV. Input width and label count are taken from `data`; folds run on
/// up to `train.jobs` threads with identical results for any job count.
/// Throws eval::AllLabelsDegenerate if a held-out fold has no usable label.
CvResult run_cv(const dataset::Dataset& data, models::ModelConfig model, const TrainConfig& train);

nlohmann::ordered_json to_json(const CvResult& result);
CvResult cv_result_from_json(const nlohmann::json& j);

void save_cv_result(const CvResult& result, const std::filesystem::path& path);
CvResult load_cv_result(const std::filesystem::path& path);

}  // namespace eoprop::eval
