#include "eoprop/cli/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "eoprop/csv.hpp"
#include "eoprop/eval/reports.hpp"

namespace eoprop::cli {

namespace {

using models::Architecture;
using models::LossDesign;

const std::vector<SettingInfo> kSettings = {
    {"paths.property_table", "--property-table", "Property table CSV (oil_name,plant_name,tissue_name,analytical_ref)"},
    {"paths.analytical_dir", "--analytical-dir", "Directory holding the per-oil analytical CSVs"},
    {"paths.smiles_map", "--smiles-map", "Compound SMILES map CSV (compound_name,smiles)"},
    {"paths.fingerprint_imports", "--fingerprint-import", "Precomputed fingerprint CSV; repeatable", true},
    {"fingerprint.kind", "--fp-kind", "Fingerprint kind: ecfp, maccs, avalon, rdkit"},
    {"fingerprint.radius", "--fp-radius", "ECFP radius"},
    {"fingerprint.n_bits", "--fp-bits", "Fingerprint width in bits"},
    {"labels.min_count", "--min-count", "Drop tissue categories with fewer oils than this"},
    {"model.architecture", "--arch", "cnn, gcn, gat or all"},
    {"model.loss", "--loss", "bce_linear, nll_logsoftmax or all"},
    {"model.hidden_dim", "--hidden-dim", "Hidden width"},
    {"model.layers", "--layers", "Number of conv/graph layers"},
    {"model.gat_heads", "--gat-heads", "Attention heads per GAT layer"},
    {"model.leaky_slope", "--leaky-slope", "LeakyReLU slope of GAT attention"},
    {"eval.k", "--k", "Number of CV folds"},
    {"eval.seed", "--seed", "Seed for fold assignment and initialisation"},
    {"eval.epochs", "--epochs", "Training epochs per fold"},
    {"eval.report_epoch", "--report-epoch", "Epoch whose scores feed the summary and ROC curves"},
    {"eval.lr", "--lr", "Adam learning rate"},
    {"eval.n_max", "--n-max", "CNN stack height"},
    {"eval.jobs", "--jobs", "Folds trained concurrently"},
    {"output.dir", "--out", "Output directory (also settable through EOPROP_OUT_DIR)"},
};

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (text.empty() || res.ec != std::errc() || res.ptr != end) {
        throw UsageError("invalid value '" + text + "' for " + key);
    }
    return value;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    if (!text.empty() && text.front() == '-') throw UsageError("invalid value '" + text + "' for " + key);
    return parse_number<std::size_t>(key, text);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    if (p.is_relative() && !base.empty()) return base / p;
    return p;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
    return out;
}

// Splits `a, "b c", d` into items; quotes are stripped.
std::vector<std::string> split_items(const std::string& text, const std::string& where) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false, in_item = false;
    for (char c : text) {
        if (quoted) {
            if (c == '"') quoted = false;
            else cur += c;
        } else if (c == '"') {
            quoted = true;
            in_item = true;
        } else if (c == ',') {
            out.push_back(io::trim(cur));
            cur.clear();
            in_item = false;
        } else {
            cur += c;
            if (c != ' ' && c != '\t') in_item = true;
        }
    }
    if (quoted) throw UsageError(where + ": unterminated string");
    if (in_item || !out.empty()) out.push_back(io::trim(cur));
    return out;
}

// Removes a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

}  // namespace

std::vector<models::ModelConfig> RunConfig::model_configs() const {
    std::vector<models::ModelConfig> out;
    for (Architecture a : models::kAllArchitectures) {
        if (std::find(architectures.begin(), architectures.end(), a) == architectures.end()) continue;
        for (LossDesign l : models::kAllLossDesigns) {
            if (std::find(losses.begin(), losses.end(), l) == losses.end()) continue;
            models::ModelConfig m = model;
            m.architecture = a;
            m.loss_design = l;
            out.push_back(m);
        }
    }
    return out;
}

const std::vector<SettingInfo>& settings() { return kSettings; }

std::string setting_value(const RunConfig& c, const std::string& key) {
    if (key == "paths.property_table") return c.property_table.string();
    if (key == "paths.analytical_dir") return c.analytical_dir.string();
    if (key == "paths.smiles_map") return c.smiles_map ? c.smiles_map->string() : "";
    if (key == "paths.fingerprint_imports") {
        std::vector<std::string> items;
        for (const auto& p : c.fingerprint_imports) items.push_back(p.string());
        return join(items);
    }
    if (key == "fingerprint.kind") return chem::to_string(c.fingerprint.kind);
    if (key == "fingerprint.radius") return std::to_string(c.fingerprint.radius);
    if (key == "fingerprint.n_bits") return std::to_string(c.fingerprint.n_bits);
    if (key == "labels.min_count") return std::to_string(c.min_count);
    if (key == "model.architecture") {
        if (c.architectures.size() == std::size(models::kAllArchitectures)) return "all";
        std::vector<std::string> items;
        for (auto a : c.architectures) items.emplace_back(models::to_string(a));
        return join(items);
    }
    if (key == "model.loss") {
        if (c.losses.size() == std::size(models::kAllLossDesigns)) return "all";
        std::vector<std::string> items;
        for (auto l : c.losses) items.emplace_back(models::to_string(l));
        return join(items);
    }
    if (key == "model.hidden_dim") return std::to_string(c.model.hidden_dim);
    if (key == "model.layers") return std::to_string(c.model.layers);
    if (key == "model.gat_heads") return std::to_string(c.model.gat_heads);
    if (key == "model.leaky_slope") return eval::format_number(c.model.leaky_slope);
    if (key == "eval.k") return std::to_string(c.train.k);
    if (key == "eval.seed") return std::to_string(c.train.seed);
    if (key == "eval.epochs") return std::to_string(c.train.epochs);
    if (key == "eval.report_epoch") return std::to_string(c.train.report_epoch);
    if (key == "eval.lr") return eval::format_number(c.train.adam.lr);
    if (key == "eval.n_max") return std::to_string(c.model.n_max);
    if (key == "eval.jobs") return std::to_string(c.train.jobs);
    if (key == "output.dir") return c.output_dir.string();
    throw UsageError("unknown setting '" + key + "'");
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value, const std::filesystem::path& base) {
    if (key == "paths.property_table") c.property_table = resolve(base, value);
    else if (key == "paths.analytical_dir") c.analytical_dir = resolve(base, value);
    else if (key == "paths.smiles_map") {
        if (value.empty()) c.smiles_map.reset();
        else c.smiles_map = resolve(base, value);
    } else if (key == "paths.fingerprint_imports") apply_list_setting(c, key, split_items(value, key), base);
    else if (key == "fingerprint.kind") {
        try {
            c.fingerprint.kind = chem::parse_fingerprint_kind(value);
        } catch (const std::exception&) {
            throw UsageError("invalid value '" + value + "' for " + key + " (expected ecfp, maccs, avalon or rdkit)");
        }
    } else if (key == "fingerprint.radius") {
        c.fingerprint.radius = parse_number<int>(key, value);
        if (c.fingerprint.radius < 0) throw UsageError(key + " must be non-negative");
    } else if (key == "fingerprint.n_bits") c.fingerprint.n_bits = parse_count(key, value);
    else if (key == "labels.min_count") c.min_count = parse_count(key, value);
    else if (key == "model.architecture") {
        c.architectures.clear();
        for (const auto& item : split_items(value, key)) {
            if (item == "all") {
                c.architectures.assign(std::begin(models::kAllArchitectures), std::end(models::kAllArchitectures));
                break;
            }
            try {
                c.architectures.push_back(models::parse_architecture(item));
            } catch (const std::exception&) {
                throw UsageError("invalid value '" + item + "' for " + key + " (expected cnn, gcn, gat or all)");
            }
        }
        if (c.architectures.empty()) throw UsageError(key + " is empty");
    } else if (key == "model.loss") {
        c.losses.clear();
        for (const auto& item : split_items(value, key)) {
            if (item == "all") {
                c.losses.assign(std::begin(models::kAllLossDesigns), std::end(models::kAllLossDesigns));
                break;
            }
            try {
                c.losses.push_back(models::parse_loss_design(item));
            } catch (const std::exception&) {
                throw UsageError("invalid value '" + item + "' for " + key +
                                 " (expected bce_linear, nll_logsoftmax or all)");
            }
        }
        if (c.losses.empty()) throw UsageError(key + " is empty");
    } else if (key == "model.hidden_dim") c.model.hidden_dim = parse_count(key, value);
    else if (key == "model.layers") c.model.layers = parse_count(key, value);
    else if (key == "model.gat_heads") c.model.gat_heads = parse_count(key, value);
    else if (key == "model.leaky_slope") c.model.leaky_slope = parse_number<double>(key, value);
    else if (key == "eval.k") c.train.k = parse_count(key, value);
    else if (key == "eval.seed") c.train.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "eval.epochs") c.train.epochs = parse_count(key, value);
    else if (key == "eval.report_epoch") c.train.report_epoch = parse_count(key, value);
    else if (key == "eval.lr") c.train.adam.lr = parse_number<double>(key, value);
    else if (key == "eval.n_max") c.model.n_max = parse_count(key, value);
    else if (key == "eval.jobs") c.train.jobs = parse_count(key, value);
    else if (key == "output.dir") c.output_dir = resolve(base, value);
    else throw UsageError("unknown setting '" + key + "'");
}

void apply_list_setting(RunConfig& c, const std::string& key, const std::vector<std::string>& values,
                        const std::filesystem::path& base) {
    if (key != "paths.fingerprint_imports") {
        if (values.size() != 1) throw UsageError(key + " takes a single value");
        apply_setting(c, key, values.front(), base);
        return;
    }
    c.fingerprint_imports.clear();
    for (const auto& v : values)
        if (!v.empty()) c.fingerprint_imports.push_back(resolve(base, v));
}

void apply_config_text(RunConfig& c, const std::string& text, const std::filesystem::path& base,
                       const std::string& source_name) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = source_name + ":" + std::to_string(line_no);
        const std::string line = io::trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw UsageError(where + ": malformed section header");
            section = io::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
        const std::string name = io::trim(line.substr(0, eq));
        std::string value = io::trim(line.substr(eq + 1));
        const std::string key = section.empty() ? name : section + "." + name;
        try {
            if (!value.empty() && value.front() == '[') {
                if (value.back() != ']') throw UsageError("unterminated list");
                apply_list_setting(c, key, split_items(value.substr(1, value.size() - 2), where), base);
                continue;
            }
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
            apply_setting(c, key, value, base);
        } catch (const UsageError& e) {
            throw UsageError(where + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& c, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    apply_config_text(c, text.str(), path.parent_path(), path.string());
}

}  // namespace eoprop::cli
