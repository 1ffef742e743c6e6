#include "eoprop/eval/cv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "eoprop/autodiff/ops.hpp"
#include "eoprop/eval/metrics.hpp"

namespace eoprop::eval {

namespace ad = autodiff;
using autodiff::Value;
using nlohmann::json;
using nlohmann::ordered_json;

void TrainConfig::validate() const {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
    if (report_epoch < 1) throw std::invalid_argument("report_epoch must be at least 1");
    if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
    if (!(adam.lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
}

std::size_t CvResult::effective_report_epoch() const { return std::min(train.report_epoch, train.epochs); }

double CvResult::mean_macro_auc(std::size_t epoch) const {
    double total = 0.0;
    for (const auto& f : folds) total += f.history.at(epoch - 1).macro_auc;
    return total / static_cast<double>(folds.size());
}

double CvResult::std_macro_auc(std::size_t epoch) const {
    const double mean = mean_macro_auc(epoch);
    double ss = 0.0;
    for (const auto& f : folds) {
        const double d = f.history.at(epoch - 1).macro_auc - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(folds.size()));
}

std::vector<std::optional<double>> CvResult::mean_label_auc(std::size_t epoch) const {
    std::vector<std::optional<double>> out(labels.size());
    for (std::size_t c = 0; c < labels.size(); ++c) {
        double total = 0.0;
        std::size_t used = 0;
        for (const auto& f : folds) {
            const auto& a = f.history.at(epoch - 1).label_auc.at(c);
            if (a) {
                total += *a;
                ++used;
            }
        }
        if (used > 0) out[c] = total / static_cast<double>(used);
    }
    return out;
}

std::vector<std::vector<double>> CvResult::pooled_report_scores() const {
    std::vector<std::vector<double>> out(sample_names.size());
    for (const auto& f : folds)
        for (std::size_t i = 0; i < f.test_indices.size(); ++i) out.at(f.test_indices[i]) = f.report_scores.at(i);
    return out;
}

std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold) {
    return seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(fold + 1));
}

std::vector<models::ModelInput> prepare_inputs(const dataset::Dataset& data, const models::ModelConfig& config,
                                               std::size_t* truncated) {
    std::vector<models::ModelInput> out;
    out.reserve(data.samples.size());
    std::size_t count = 0;
    for (const auto& s : data.samples) {
        out.push_back(models::prepare_input(s, config));
        if (config.architecture == models::Architecture::cnn && out.back().stacked.truncated) ++count;
    }
    if (truncated) *truncated = count;
    return out;
}

double mean_loss(const models::Model& model, std::span<const models::ModelInput> inputs,
                 const std::vector<std::vector<int>>& targets, std::span<const std::size_t> indices) {
    double total = 0.0;
    for (std::size_t i : indices)
        total += models::loss(model.logits(inputs[i]), targets[i], model.config().loss_design).item();
    return total / static_cast<double>(indices.size());
}

double train_epoch(models::Model& model, ad::AdamState& adam, std::span<const models::ModelInput> inputs,
                   const std::vector<std::vector<int>>& targets, std::span<const std::size_t> indices) {
    if (indices.empty()) throw std::invalid_argument("train_epoch needs at least one sample");
    auto params = model.parameters();
    ad::zero_grads(params);
    const double weight = 1.0 / static_cast<double>(indices.size());
    double total = 0.0;
    for (std::size_t i : indices) {
        Value l = models::loss(model.logits(inputs[i]), targets[i], model.config().loss_design);
        total += l.item();
        ad::scale(l, weight).backward();
    }
    ad::adam_step(params, adam);
    return total * weight;
}

std::vector<double> fit(models::Model& model, std::span<const models::ModelInput> inputs,
                        const std::vector<std::vector<int>>& targets, std::span<const std::size_t> indices,
                        std::size_t epochs, const ad::AdamConfig& adam) {
    ad::AdamState state{adam, {}, {}, 0};
    std::vector<double> losses;
    losses.reserve(epochs);
    for (std::size_t e = 0; e < epochs; ++e) losses.push_back(train_epoch(model, state, inputs, targets, indices));
    return losses;
}

namespace {

FoldResult run_fold(std::size_t fold, const std::vector<std::vector<std::size_t>>& splits,
                    std::span<const models::ModelInput> inputs, const std::vector<std::vector<int>>& targets,
                    const models::ModelConfig& config, const TrainConfig& train) {
    FoldResult out;
    out.fold = fold;
    out.test_indices = splits[fold];
    for (std::size_t f = 0; f < splits.size(); ++f)
        if (f != fold) out.train_indices.insert(out.train_indices.end(), splits[f].begin(), splits[f].end());
    std::sort(out.train_indices.begin(), out.train_indices.end());

    models::Model model(config, fold_seed(train.seed, fold));
    ad::AdamState adam{train.adam, {}, {}, 0};
    std::vector<std::vector<int>> test_targets;
    for (std::size_t i : out.test_indices) test_targets.push_back(targets[i]);

    const std::size_t report_epoch = std::min(train.report_epoch, train.epochs);
    for (std::size_t epoch = 1; epoch <= train.epochs; ++epoch) {
        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = train_epoch(model, adam, inputs, targets, out.train_indices);

        std::vector<std::vector<double>> scores;
        double test_loss = 0.0;
        for (std::size_t i : out.test_indices) {
            Value z = model.logits(inputs[i]);
            test_loss += models::loss(z, targets[i], config.loss_design).item();
            scores.push_back(models::score(z.data(), config.loss_design, config.n_labels).scores);
        }
        rec.test_loss = test_loss / static_cast<double>(out.test_indices.size());
        MacroAuc m = macro_auc(scores, test_targets);
        rec.label_auc = std::move(m.per_label);
        rec.macro_auc = m.value;
        out.history.push_back(std::move(rec));
        if (epoch == report_epoch) out.report_scores = std::move(scores);
    }
    out.final_state = model.state();
    return out;
}

}  // namespace

CvResult run_cv(const dataset::Dataset& data, models::ModelConfig model, const TrainConfig& train) {
    train.validate();
    model.n_labels = data.labels.size();
    model.input_dim = data.feature_width();
    model.validate();

    CvResult result;
    result.model = model;
    result.train = train;
    result.labels = data.labels.categories;
    for (const auto& s : data.samples) {
        result.sample_names.push_back(s.oil_name);
        result.targets.push_back(s.target);
    }

    const auto inputs = prepare_inputs(data, model, &result.truncated_samples);
    const auto splits = dataset::split_kfold(data.samples.size(), train.k, train.seed);
    result.folds.resize(splits.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t f = next++; f < splits.size(); f = next++) {
            try {
                result.folds[f] = run_fold(f, splits, inputs, result.targets, model, train);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::min(train.jobs, splits.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

namespace {

ordered_json optional_array(const std::vector<std::optional<double>>& values) {
    ordered_json out = ordered_json::array();
    for (const auto& v : values) out.push_back(v ? ordered_json(*v) : ordered_json(nullptr));
    return out;
}

std::vector<std::optional<double>> optional_vector(const json& j) {
    std::vector<std::optional<double>> out;
    for (const auto& v : j) out.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    return out;
}

}  // namespace

ordered_json to_json(const CvResult& r) {
    ordered_json j;
    j["format"] = "eoprop-cv-result";
    j["version"] = 1;
    j["tag"] = r.model.tag();
    j["model"] = models::to_json(r.model);
    j["train"] = {{"k", r.train.k},
                  {"seed", r.train.seed},
                  {"epochs", r.train.epochs},
                  {"report_epoch", r.train.report_epoch},
                  {"lr", r.train.adam.lr},
                  {"beta1", r.train.adam.beta1},
                  {"beta2", r.train.adam.beta2},
                  {"eps", r.train.adam.eps}};
    j["labels"] = r.labels;
    j["samples"] = r.sample_names;
    j["targets"] = r.targets;
    j["truncated_samples"] = r.truncated_samples;
    ordered_json folds = ordered_json::array();
    for (const auto& f : r.folds) {
        ordered_json fj;
        fj["fold"] = f.fold;
        fj["train_indices"] = f.train_indices;
        fj["test_indices"] = f.test_indices;
        ordered_json hist = ordered_json::array();
        for (const auto& e : f.history) {
            hist.push_back({{"epoch", e.epoch},
                            {"train_loss", e.train_loss},
                            {"test_loss", e.test_loss},
                            {"macro_auc", e.macro_auc},
                            {"label_auc", optional_array(e.label_auc)}});
        }
        fj["history"] = std::move(hist);
        fj["report_scores"] = f.report_scores;
        folds.push_back(std::move(fj));
    }
    j["folds"] = std::move(folds);
    return j;
}

CvResult cv_result_from_json(const json& j) {
    if (j.value("format", "") != "eoprop-cv-result") throw std::runtime_error("not a cv result document");
    CvResult r;
    r.model = models::model_config_from_json(j.at("model"));
    const auto& t = j.at("train");
    r.train.k = t.at("k").get<std::size_t>();
    r.train.seed = t.at("seed").get<std::uint64_t>();
    r.train.epochs = t.at("epochs").get<std::size_t>();
    r.train.report_epoch = t.at("report_epoch").get<std::size_t>();
    r.train.adam = {t.at("lr").get<double>(), t.at("beta1").get<double>(), t.at("beta2").get<double>(),
                    t.at("eps").get<double>()};
    r.labels = j.at("labels").get<std::vector<std::string>>();
    r.sample_names = j.at("samples").get<std::vector<std::string>>();
    r.targets = j.at("targets").get<std::vector<std::vector<int>>>();
    r.truncated_samples = j.value("truncated_samples", std::size_t{0});
    for (const auto& fj : j.at("folds")) {
        FoldResult f;
        f.fold = fj.at("fold").get<std::size_t>();
        f.train_indices = fj.at("train_indices").get<std::vector<std::size_t>>();
        f.test_indices = fj.at("test_indices").get<std::vector<std::size_t>>();
        for (const auto& e : fj.at("history")) {
            EpochRecord rec;
            rec.epoch = e.at("epoch").get<std::size_t>();
            rec.train_loss = e.at("train_loss").get<double>();
            rec.test_loss = e.at("test_loss").get<double>();
            rec.macro_auc = e.at("macro_auc").get<double>();
            rec.label_auc = optional_vector(e.at("label_auc"));
            f.history.push_back(std::move(rec));
        }
        f.report_scores = fj.at("report_scores").get<std::vector<std::vector<double>>>();
        r.folds.push_back(std::move(f));
    }
    return r;
}

void save_cv_result(const CvResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("IoFailure: cannot write " + path.string());
    out << to_json(result).dump(2) << '\n';
    if (!out) throw std::runtime_error("IoFailure: write failed for " + path.string());
}

CvResult load_cv_result(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("IoFailure: cannot read " + path.string());
    return cv_result_from_json(json::parse(in));
}

}  // namespace eoprop::eval
