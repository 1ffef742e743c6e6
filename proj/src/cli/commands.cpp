#include "eoprop/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "eoprop/autodiff/checkpoint.hpp"
#include "eoprop/csv.hpp"
#include "eoprop/eval/reports.hpp"

namespace eoprop::cli {

namespace fs = std::filesystem;

namespace {

void require_path(const fs::path& p, const std::string& what) {
    if (p.empty()) throw UsageError(what + " is not set");
    if (!fs::exists(p)) throw std::runtime_error(what + " not found: " + p.string());
}

void print_exclusions(const std::vector<dataset::Exclusion>& exclusions, std::ostream& err) {
    if (exclusions.empty()) return;
    err << "exclusion report (" << exclusions.size() << "):\n";
    for (const auto& e : exclusions) {
        err << "  " << e.oil_name;
        if (!e.compound_name.empty()) err << " / " << e.compound_name;
        err << ": " << e.reason << '\n';
    }
}

nlohmann::ordered_json checkpoint_sidecar(const eval::CvResult& r, std::size_t fold) {
    nlohmann::ordered_json j;
    j["tag"] = r.model.tag();
    j["fold"] = fold;
    j["model_seed"] = eval::fold_seed(r.train.seed, fold);
    j["model"] = models::to_json(r.model);
    j["epochs"] = r.train.epochs;
    j["lr"] = r.train.adam.lr;
    j["labels"] = r.labels;
    return j;
}

}  // namespace

void cmd_featurize(const RunConfig& config, std::ostream& out, std::ostream& err) {
    require_path(config.property_table, "property table");
    require_path(config.analytical_dir, "analytical directory");
    if (config.smiles_map) require_path(*config.smiles_map, "SMILES map");
    for (const auto& p : config.fingerprint_imports) require_path(p, "fingerprint import");

    dataset::DatasetSources sources{config.property_table, config.analytical_dir, config.smiles_map,
                                    config.fingerprint_imports};
    std::ostringstream warnings;
    dataset::Dataset data;
    try {
        data = dataset::build_dataset(sources, config.fingerprint, config.min_count, &warnings);
    } catch (...) {
        const std::string report = warnings.str();
        if (!report.empty()) err << "exclusion report:\n" << report;
        throw;
    }
    print_exclusions(data.exclusions, err);
    dataset::write_archive(data, config.archive_dir());
    out << "featurized " << data.samples.size() << " samples, " << data.labels.size() << " labels (";
    for (std::size_t c = 0; c < data.labels.size(); ++c) out << (c ? ", " : "") << data.labels.categories[c];
    out << "), " << data.exclusions.size() << " exclusions -> " << config.archive_dir().string() << '\n';
}

void cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (!fs::exists(config.archive_dir() / "index.json")) {
        throw std::runtime_error("dataset archive not found in " + config.archive_dir().string() +
                                 "; run featurize first");
    }
    const dataset::Dataset data = dataset::read_archive(config.archive_dir());
    for (const auto& m : config.model_configs()) {
        const eval::CvResult r = eval::run_cv(data, m, config.train);
        const fs::path dir = config.results_dir() / r.model.tag();
        fs::create_directories(dir);
        eval::save_cv_result(r, dir / "result.json");
        for (const auto& f : r.folds) {
            autodiff::save_checkpoint(dir / ("fold_" + std::to_string(f.fold) + ".ckpt"), f.final_state,
                                      checkpoint_sidecar(r, f.fold));
        }
        if (r.truncated_samples > 0) {
            err << "warning: " << r.model.tag() << ": " << r.truncated_samples << " samples truncated to n_max "
                << r.model.n_max << '\n';
        }
        const std::size_t e = r.effective_report_epoch();
        out << r.model.tag() << ": macro AUC at epoch " << e << " = " << eval::format_number(r.mean_macro_auc(e))
            << " +/- " << eval::format_number(r.std_macro_auc(e)) << " over " << r.folds.size() << " folds\n";
    }
}

void cmd_report(const RunConfig& config, const std::optional<std::string>& label, std::ostream& out) {
    const fs::path dir = config.results_dir();
    if (!fs::is_directory(dir)) throw std::runtime_error("results directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const fs::path f = entry.path() / "result.json";
        if (entry.is_directory() && fs::exists(f)) files.push_back(f);
    }
    if (files.empty()) throw std::runtime_error("no result sets in " + dir.string());
    std::sort(files.begin(), files.end());
    std::vector<eval::CvResult> results;
    for (const auto& f : files) results.push_back(eval::load_cv_result(f));
    eval::emit_reports(results, config.reports_dir(), label);
    out << "wrote reports for " << results.size() << " result sets -> " << config.reports_dir().string() << '\n';
}

namespace {

struct FlagBinding {
    const SettingInfo* info;
    CLI::Option* option;
    std::string value;
    std::vector<std::string> values;
};

// Adds every setting whose section is in `sections` as a flag on `app`.
void add_setting_flags(CLI::App& app, const std::set<std::string>& sections, std::vector<FlagBinding>& bindings) {
    const RunConfig defaults;
    for (const auto& info : settings()) {
        const std::string key = info.key;
        if (!sections.count(key.substr(0, key.find('.')))) continue;
        bindings.push_back({&info, nullptr, {}, {}});
    }
    // Options keep pointers into `bindings`; it is not resized after this.
    for (auto& b : bindings) {
        std::string shown = setting_value(defaults, b.info->key);
        if (shown.empty()) shown = "none";
        const std::string help = std::string(b.info->help) + "  [config: " + b.info->key + "]";
        if (b.info->list) b.option = app.add_option(b.info->flag, b.values, help);
        else b.option = app.add_option(b.info->flag, b.value, help);
        b.option->default_str(shown);
        if (std::string(b.info->key) == "model.architecture") {
            b.option->check(CLI::IsMember({"cnn", "gcn", "gat", "all"}));
        } else if (std::string(b.info->key) == "model.loss") {
            b.option->check(CLI::IsMember({"bce_linear", "bce", "nll_logsoftmax", "nll", "all"}));
        } else if (std::string(b.info->key) == "fingerprint.kind") {
            b.option->check(CLI::IsMember({"ecfp", "maccs", "avalon", "rdkit"}));
        }
    }
}

RunConfig resolve_config(const std::string& config_path, const std::vector<FlagBinding>& bindings) {
    RunConfig config;
    if (!config_path.empty()) apply_config_file(config, config_path);
    if (const char* env = std::getenv(kOutDirEnv); env && *env) config.output_dir = env;
    for (const auto& b : bindings) {
        if (b.option->count() == 0) continue;
        if (b.info->list) apply_list_setting(config, b.info->key, b.values);
        else apply_setting(config, b.info->key, b.value);
    }
    return config;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Predict essential-oil tissue labels from chemical composition"};
    app.name("eoprop");
    app.require_subcommand(1);
    app.set_version_flag("--version", "eoprop 1.0");

    struct Sub {
        CLI::App* app;
        std::string config_path;
        std::vector<FlagBinding> bindings;
    };
    std::map<std::string, Sub> subs;
    const std::map<std::string, std::pair<std::string, std::set<std::string>>> layout = {
        {"featurize", {"Parse tables, fingerprint compounds and write the dataset archive",
                       {"paths", "fingerprint", "labels", "output"}}},
        {"train", {"Run K-fold training for the selected architectures and loss designs", {"model", "eval", "output"}}},
        {"report", {"Write AUC histories, ROC curves, summary.json and the AUC chart", {"output"}}},
    };
    std::optional<std::string> label;
    std::string label_value;
    CLI::Option* label_option = nullptr;
    for (const auto& [name, spec] : layout) {
        Sub& sub = subs[name];
        sub.app = app.add_subcommand(name, spec.first);
        sub.app->add_option("--config", sub.config_path, "Config file (key = value with [section] headers)")
            ->default_str("none")
            ->check(CLI::ExistingFile);
        sub.bindings.reserve(settings().size());
        add_setting_flags(*sub.app, spec.second, sub.bindings);
        if (name == "report") {
            label_option = sub.app->add_option("--label", label_value, "Write the ROC curve for this label only")
                               ->default_str("all labels");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        for (auto& [name, sub] : subs) {
            if (!sub.app->parsed()) continue;
            const RunConfig config = resolve_config(sub.config_path, sub.bindings);
            if (name == "featurize") cmd_featurize(config, out, err);
            else if (name == "train") cmd_train(config, out, err);
            else {
                if (label_option->count() > 0) label = label_value;
                cmd_report(config, label, out);
            }
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const io::InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitSuccess;
}

}  // namespace eoprop::cli
