#include "eoprop/eval/reports.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "eoprop/eval/metrics.hpp"

namespace eoprop::eval {

using nlohmann::ordered_json;

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::size_t order_key(const models::ModelConfig& m) {
    std::size_t a = 0, l = 0;
    for (std::size_t i = 0; i < std::size(models::kAllArchitectures); ++i)
        if (models::kAllArchitectures[i] == m.architecture) a = i;
    for (std::size_t i = 0; i < std::size(models::kAllLossDesigns); ++i)
        if (models::kAllLossDesigns[i] == m.loss_design) l = i;
    return a * std::size(models::kAllLossDesigns) + l;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("IoFailure: cannot write " + path.string());
    out << text;
    if (!out) throw IoFailure("IoFailure: write failed for " + path.string());
}

// Label names become file name parts; anything outside [A-Za-z0-9_-] maps to '_'.
std::string file_safe(const std::string& label) {
    std::string out = label;
    for (char& c : out) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) c = '_';
    }
    return out;
}

std::string auc_history_csv(const CvResult& r) {
    std::ostringstream out;
    out << "epoch,fold,label,auc\n";
    for (std::size_t e = 1; e <= r.train.epochs; ++e)
        for (const auto& f : r.folds)
            for (std::size_t c = 0; c < r.labels.size(); ++c) {
                const auto& a = f.history.at(e - 1).label_auc.at(c);
                out << e << ',' << f.fold << ',' << r.labels[c] << ',' << (a ? format_number(*a) : "NA") << '\n';
            }
    return out.str();
}

std::string macro_history_csv(const CvResult& r) {
    std::ostringstream out;
    out << "epoch,fold,train_loss,test_loss,macro_auc\n";
    for (std::size_t e = 1; e <= r.train.epochs; ++e)
        for (const auto& f : r.folds) {
            const auto& rec = f.history.at(e - 1);
            out << e << ',' << f.fold << ',' << format_number(rec.train_loss) << ',' << format_number(rec.test_loss)
                << ',' << format_number(rec.macro_auc) << '\n';
        }
    return out.str();
}

ordered_json summary_row(std::size_t rank, const CvResult& r) {
    const std::size_t epoch = r.effective_report_epoch();
    ordered_json row;
    row["rank"] = rank;
    row["tag"] = r.model.tag();
    row["architecture"] = models::to_string(r.model.architecture);
    row["loss_design"] = models::to_string(r.model.loss_design);
    row["report_epoch"] = epoch;
    row["folds"] = r.folds.size();
    row["macro_auc_mean"] = r.mean_macro_auc(epoch);
    row["macro_auc_std"] = r.std_macro_auc(epoch);
    ordered_json per_label = ordered_json::object();
    const auto means = r.mean_label_auc(epoch);
    for (std::size_t c = 0; c < r.labels.size(); ++c)
        per_label[r.labels[c]] = means[c] ? ordered_json(*means[c]) : ordered_json(nullptr);
    row["label_auc_mean"] = std::move(per_label);
    return row;
}

}  // namespace

std::vector<const CvResult*> summary_order(std::span<const CvResult> results) {
    std::vector<const CvResult*> out;
    for (const auto& r : results) out.push_back(&r);
    std::stable_sort(out.begin(), out.end(),
                     [](const CvResult* a, const CvResult* b) { return order_key(a->model) < order_key(b->model); });
    return out;
}

std::string render_svg(std::span<const CvResult> results) {
    constexpr double width = 640, height = 400, left = 60, right = 160, top = 20, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    std::size_t max_epoch = 1;
    for (const auto& r : results) max_epoch = std::max(max_epoch, r.train.epochs);
    const auto x_of = [&](double epoch) {
        return max_epoch == 1 ? left + plot_w / 2 : left + plot_w * (epoch - 1) / static_cast<double>(max_epoch - 1);
    };
    const auto y_of = [&](double auc) { return top + plot_h * (1.0 - auc); };
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" data-y-min=\"0\" data-y-max=\"1\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int t = 0; t <= 10; ++t) {
        const double v = t / 10.0;
        const double y = y_of(v);
        s << "<line x1=\"" << left << "\" y1=\"" << format_number(y) << "\" x2=\"" << left + plot_w << "\" y2=\""
          << format_number(y) << "\" stroke=\"#ddd\"/>\n";
        s << "<text x=\"" << left - 6 << "\" y=\"" << format_number(y + 4)
          << "\" font-size=\"11\" text-anchor=\"end\">" << format_number(v) << "</text>\n";
    }
    s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"12\" text-anchor=\"middle\">epoch (1-" << max_epoch << ")</text>\n";
    s << "<text x=\"14\" y=\"" << top + plot_h / 2 << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << top + plot_h / 2 << ")\">macro AUC</text>\n";

    const auto ordered = summary_order(results);
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const CvResult& r = *ordered[i];
        const char* color = colors[i % std::size(colors)];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" data-tag=\"" << r.model.tag()
          << "\" points=\"";
        for (std::size_t e = 1; e <= r.train.epochs; ++e) {
            if (e > 1) s << ' ';
            s << format_number(x_of(static_cast<double>(e))) << ',' << format_number(y_of(r.mean_macro_auc(e)));
        }
        s << "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(i) + 10;
        s << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 32 << "\" y2=\""
          << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << left + plot_w + 36 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << r.model.tag()
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void emit_reports(std::span<const CvResult> results, const std::filesystem::path& out_dir,
                  const std::optional<std::string>& label_filter) {
    if (results.empty()) throw std::invalid_argument("emit_reports needs at least one result set");
    if (label_filter) {
        const bool known = std::any_of(results.begin(), results.end(), [&](const CvResult& r) {
            return std::find(r.labels.begin(), r.labels.end(), *label_filter) != r.labels.end();
        });
        if (!known) throw std::invalid_argument("unknown label '" + *label_filter + "'");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoFailure("IoFailure: cannot create " + out_dir.string() + ": " + ec.message());

    ordered_json summary;
    summary["format"] = "eoprop-summary";
    summary["version"] = 1;
    ordered_json rows = ordered_json::array();
    const auto ordered = summary_order(results);
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const CvResult& r = *ordered[i];
        const auto dir = out_dir / r.model.tag();
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoFailure("IoFailure: cannot create " + dir.string() + ": " + ec.message());
        write_file(dir / "auc_history.csv", auc_history_csv(r));
        write_file(dir / "macro_history.csv", macro_history_csv(r));

        ordered_json row = summary_row(i + 1, r);
        ordered_json roc_skipped = ordered_json::array();
        const auto pooled = r.pooled_report_scores();
        for (std::size_t c = 0; c < r.labels.size(); ++c) {
            if (label_filter && r.labels[c] != *label_filter) continue;
            std::vector<double> scores;
            std::vector<int> labels;
            for (std::size_t s = 0; s < pooled.size(); ++s) {
                scores.push_back(pooled[s].at(c));
                labels.push_back(r.targets[s].at(c));
            }
            RocCurve curve;
            try {
                curve = roc_points(scores, labels);
            } catch (const DegenerateLabels&) {
                roc_skipped.push_back(r.labels[c]);
                continue;
            }
            std::ostringstream csv;
            csv << "fpr,tpr\n";
            for (const auto& p : curve) csv << format_number(p.fpr) << ',' << format_number(p.tpr) << '\n';
            write_file(dir / ("roc_" + file_safe(r.labels[c]) + ".csv"), csv.str());
        }
        row["roc_skipped"] = std::move(roc_skipped);
        rows.push_back(std::move(row));
    }
    summary["rows"] = std::move(rows);
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
    write_file(out_dir / "auc_history.svg", render_svg(results));
}

}  // namespace eoprop::eval
