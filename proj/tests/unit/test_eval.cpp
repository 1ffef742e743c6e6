#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "eoprop/eval/metrics.hpp"
#include "eoprop/eval/reports.hpp"
#include "support/oracles.hpp"

using namespace eoprop;
using namespace eoprop::eval;
using oracle::Rng;

namespace {

struct Instance {
    std::vector<double> scores;
    std::vector<int> labels;
};

// Both classes present; scores drawn from a small grid so ties are common.
Instance random_instance(Rng& rng, std::size_t max_n = 50) {
    Instance in;
    const std::size_t n = 2 + rng.below(max_n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        in.scores.push_back(static_cast<double>(rng.below(8)) / 8.0);
        in.labels.push_back(static_cast<int>(rng.below(2)));
    }
    in.labels[0] = 1;
    in.labels[1] = 0;
    return in;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

models::ModelConfig small_model(models::Architecture a, models::LossDesign l) {
    models::ModelConfig m;
    m.architecture = a;
    m.loss_design = l;
    m.hidden_dim = 6;
    m.n_max = 8;
    return m;
}

TrainConfig short_training(std::size_t k, std::size_t epochs) {
    TrainConfig t;
    t.k = k;
    t.epochs = epochs;
    t.report_epoch = epochs;
    t.adam.lr = 0.01;
    return t;
}

}  // namespace

TEST_CASE("auc and roc examples") {
    const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
    const std::vector<int> y{0, 0, 1, 1};
    CHECK(auc(s, y) == 0.75);
    const RocCurve roc = roc_points(s, y);
    const auto expected = oracle::threshold_roc(s, y);
    REQUIRE(roc.size() == expected.size());
    for (std::size_t i = 0; i < roc.size(); ++i) {
        CHECK(roc[i].fpr == expected[i].first);
        CHECK(roc[i].tpr == expected[i].second);
    }
    CHECK(trapezoid_area(roc) == 0.75);

    const std::vector<double> flat(6, 0.3);
    const std::vector<int> mixed{1, 0, 1, 0, 0, 1};
    CHECK(auc(flat, mixed) == 0.5);
    CHECK(roc_points(flat, mixed) == RocCurve{{0.0, 0.0}, {1.0, 1.0}});

    const std::vector<int> all_pos{1, 1};
    const std::vector<double> two{0.1, 0.2};
    CHECK_THROWS_AS(auc(two, all_pos), DegenerateLabels);
    CHECK_THROWS_AS(roc_points(two, all_pos), DegenerateLabels);
}

TEST_CASE("auc equals the pairwise count and the trapezoid area") {
    Rng rng(21);
    for (int t = 0; t < 1000; ++t) {
        const Instance in = random_instance(rng);
        const double a = auc(in.scores, in.labels);
        CHECK(a == oracle::pairwise_auc(in.scores, in.labels));
        CHECK(std::abs(trapezoid_area(roc_points(in.scores, in.labels)) - a) < 1e-12);
    }
}

TEST_CASE("auc symmetry and monotone invariance") {
    Rng rng(22);
    for (int t = 0; t < 300; ++t) {
        const Instance in = random_instance(rng);
        std::vector<double> neg, warped;
        for (double v : in.scores) {
            neg.push_back(-v);
            warped.push_back(std::exp(3.0 * v) - 7.0);
        }
        const double a = auc(in.scores, in.labels);
        CHECK(std::abs(auc(neg, in.labels) - (1.0 - a)) < 1e-12);
        CHECK(auc(warped, in.labels) == a);
        const RocCurve roc = roc_points(in.scores, in.labels);
        CHECK(roc.front() == RocPoint{0.0, 0.0});
        CHECK(roc.back() == RocPoint{1.0, 1.0});
        for (std::size_t i = 1; i < roc.size(); ++i) {
            CHECK(roc[i].fpr >= roc[i - 1].fpr);
            CHECK(roc[i].tpr >= roc[i - 1].tpr);
        }
    }
}

TEST_CASE("macro_auc skips degenerate columns") {
    // Column 0: perfect; column 1: reversed; column 2: all negative.
    const std::vector<std::vector<double>> s{{0.9, 0.1, 0.5}, {0.2, 0.8, 0.5}, {0.8, 0.3, 0.5}};
    const std::vector<std::vector<int>> y{{1, 0, 0}, {0, 1, 0}, {1, 0, 0}};
    const MacroAuc m = macro_auc(s, y);
    CHECK(m.per_label[0] == 1.0);
    CHECK(m.per_label[1] == 1.0);
    CHECK_FALSE(m.per_label[2].has_value());
    CHECK(m.skipped == std::vector<std::size_t>{2});
    CHECK(m.value == 1.0);

    const std::vector<std::vector<int>> flipped{{0, 1, 0}, {1, 0, 0}, {0, 1, 0}};
    CHECK(macro_auc(s, flipped).value == 0.0);
    const std::vector<std::vector<int>> none{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    CHECK_THROWS_AS(macro_auc(s, none), AllLabelsDegenerate);
}

TEST_CASE("run_cv shapes and fold structure") {
    const auto data = oracle::planted_dataset(12, 16, 2, 5);
    const CvResult r = run_cv(data, small_model(models::Architecture::gcn, models::LossDesign::bce_linear),
                              short_training(2, 1));
    REQUIRE(r.folds.size() == 2);
    std::set<std::size_t> seen;
    for (const auto& f : r.folds) {
        CHECK(f.history.size() == 1);
        CHECK(f.history[0].epoch == 1);
        CHECK(f.report_scores.size() == f.test_indices.size());
        for (auto i : f.test_indices) CHECK(seen.insert(i).second);
        for (auto i : f.train_indices)
            CHECK(std::find(f.test_indices.begin(), f.test_indices.end(), i) == f.test_indices.end());
        CHECK(f.train_indices.size() + f.test_indices.size() == 12);
    }
    CHECK(seen.size() == 12);
    CHECK(r.model.n_labels == 2);
    CHECK(r.model.input_dim == 17);
    CHECK(r.effective_report_epoch() == 1);
}

TEST_CASE("run_cv is deterministic and independent of the job count") {
    const auto data = oracle::planted_dataset(15, 16, 3, 6);
    auto train = short_training(3, 4);
    for (auto arch : models::kAllArchitectures) {
        const auto model = small_model(arch, models::LossDesign::nll_logsoftmax);
        const auto a = to_json(run_cv(data, model, train)).dump();
        const auto b = to_json(run_cv(data, model, train)).dump();
        train.jobs = 4;
        const auto c = to_json(run_cv(data, model, train)).dump();
        train.jobs = 1;
        CHECK(a == b);
        CHECK(a == c);
    }
}

TEST_CASE("cv result JSON round trip") {
    const auto data = oracle::planted_dataset(10, 12, 2, 7);
    const CvResult r = run_cv(data, small_model(models::Architecture::cnn, models::LossDesign::bce_linear),
                              short_training(2, 3));
    const CvResult back = cv_result_from_json(nlohmann::json::parse(to_json(r).dump()));
    CHECK(to_json(back).dump() == to_json(r).dump());
    CHECK(back.mean_macro_auc(3) == r.mean_macro_auc(3));
}

TEST_CASE("emit_reports writes histories, ROC files, summary and plot") {
    const auto data = oracle::planted_dataset(12, 16, 2, 8);
    std::vector<CvResult> results;
    results.push_back(run_cv(data, small_model(models::Architecture::gat, models::LossDesign::bce_linear),
                             short_training(2, 1)));
    results.push_back(run_cv(data, small_model(models::Architecture::cnn, models::LossDesign::nll_logsoftmax),
                             short_training(2, 1)));
    const auto dir = std::filesystem::temp_directory_path() / "eoprop_reports_test";
    std::filesystem::remove_all(dir);
    emit_reports(results, dir);

    // One epoch, two folds, two labels: a header plus four rows.
    std::istringstream hist(slurp(dir / "gat_bce" / "auc_history.csv"));
    std::string line;
    std::getline(hist, line);
    CHECK(line == "epoch,fold,label,auc");
    std::size_t rows = 0;
    while (std::getline(hist, line)) ++rows;
    CHECK(rows == 4);
    CHECK(std::filesystem::exists(dir / "cnn_nll" / "roc_T0.csv"));
    CHECK(std::filesystem::exists(dir / "cnn_nll" / "roc_T1.csv"));

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    const auto& table = summary.at("rows");
    REQUIRE(table.size() == 2);
    CHECK(table[0].at("tag") == "cnn_nll");
    CHECK(table[1].at("tag") == "gat_bce");

    const std::string svg = slurp(dir / "auc_history.svg");
    CHECK(svg.find("data-y-min=\"0\"") != std::string::npos);
    CHECK(svg.find("data-y-max=\"1\"") != std::string::npos);
    CHECK(svg.find("data-tag=\"gat_bce\"") != std::string::npos);

    const std::string before = slurp(dir / "summary.json");
    emit_reports(results, dir);
    CHECK(slurp(dir / "summary.json") == before);

    const auto only = std::filesystem::temp_directory_path() / "eoprop_reports_filter";
    std::filesystem::remove_all(only);
    emit_reports(results, only, std::string("T1"));
    CHECK(std::filesystem::exists(only / "gat_bce" / "roc_T1.csv"));
    CHECK_FALSE(std::filesystem::exists(only / "gat_bce" / "roc_T0.csv"));
    CHECK_THROWS_AS(emit_reports(results, only, std::string("Nope")), std::invalid_argument);
}

TEST_CASE("format_number is shortest round-trip") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0) == "1");
    CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}
