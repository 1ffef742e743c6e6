#include "eoprop/dataset/samples.hpp"

#include <algorithm>
#include <numeric>

#include "eoprop/autodiff/random.hpp"

namespace eoprop::dataset {

const char* to_string(DatasetErrorKind kind) {
    switch (kind) {
        case DatasetErrorKind::NoCategoriesSurvive: return "NoCategoriesSurvive";
        case DatasetErrorKind::EmptyInput: return "EmptyInput";
        case DatasetErrorKind::WidthMismatch: return "WidthMismatch";
        case DatasetErrorKind::KTooLarge: return "KTooLarge";
        case DatasetErrorKind::KTooSmall: return "KTooSmall";
        case DatasetErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "DatasetError";
}

DatasetError::DatasetError(DatasetErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

std::size_t LabelSpace::index_of(const std::string& tissue) const {
    const auto it = std::lower_bound(categories.begin(), categories.end(), tissue);
    if (it == categories.end() || *it != tissue) return categories.size();
    return static_cast<std::size_t>(it - categories.begin());
}

LabelEncoding encode_labels(std::span<const std::string> tissues, std::size_t min_count) {
    if (tissues.empty()) throw DatasetError(DatasetErrorKind::EmptyInput, "no records to encode");
    LabelEncoding enc;
    enc.space.min_count = min_count;
    for (const auto& t : tissues) ++enc.counts[t];
    for (const auto& [name, count] : enc.counts)
        if (count >= min_count) enc.space.categories.push_back(name);  // std::map iterates sorted
    if (enc.space.categories.empty()) {
        throw DatasetError(DatasetErrorKind::NoCategoriesSurvive,
                           "no tissue has at least " + std::to_string(min_count) + " records");
    }
    for (std::size_t i = 0; i < tissues.size(); ++i) {
        const std::size_t col = enc.space.index_of(tissues[i]);
        if (col == enc.space.size()) {
            enc.excluded.push_back(i);
            continue;
        }
        std::vector<int> row(enc.space.size(), 0);
        row[col] = 1;
        enc.kept.push_back(i);
        enc.targets.push_back(std::move(row));
    }
    return enc;
}

std::vector<double> build_node_feature(double area_percent, const chem::Fingerprint& fp) {
    std::vector<double> v(1 + fp.n_bits(), 0.0);
    v[0] = area_percent / 100.0;
    for (std::size_t i = 0; i < fp.n_bits(); ++i)
        if (fp.test(i)) v[1 + i] = 1.0;
    return v;
}

namespace {

std::size_t common_width(std::span<const double> areas, std::span<const chem::Fingerprint> fps) {
    if (areas.size() != fps.size()) {
        throw DatasetError(DatasetErrorKind::InvalidArgument, "one fingerprint per component is required");
    }
    if (fps.empty()) throw DatasetError(DatasetErrorKind::EmptyInput, "sample has no components");
    const std::size_t width = fps.front().n_bits();
    for (const auto& fp : fps) {
        if (fp.n_bits() != width) {
            throw DatasetError(DatasetErrorKind::WidthMismatch, "fingerprint widths " + std::to_string(width) + " and " +
                                                                    std::to_string(fp.n_bits()));
        }
    }
    return width;
}

void write_row(Tensor& m, std::size_t r, double area_percent, const chem::Fingerprint& fp) {
    const auto feature = build_node_feature(area_percent, fp);
    std::copy(feature.begin(), feature.end(), m.row(r).begin());
}

}  // namespace

GraphSample assemble_graph_sample(std::span<const double> area_percents, std::span<const chem::Fingerprint> fps) {
    const std::size_t width = common_width(area_percents, fps);
    const std::size_t n = fps.size();
    GraphSample g;
    g.nodes = Tensor(n, 1 + width);
    g.weights = Tensor(n, n);
    for (std::size_t i = 0; i < n; ++i) write_row(g.nodes, i, area_percents[i], fps[i]);
    for (std::size_t i = 0; i < n; ++i) {
        g.weights(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) g.weights(i, j) = g.weights(j, i) = chem::tanimoto(fps[i], fps[j]);
    }
    g.edges.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g.edges.push_back({i, j, g.weights(i, j)});
    return g;
}

StackedSample assemble_stacked_sample(std::span<const double> area_percents, std::span<const chem::Fingerprint> fps,
                                      std::size_t n_max) {
    if (n_max == 0) throw DatasetError(DatasetErrorKind::InvalidArgument, "n_max must be at least 1");
    const std::size_t width = common_width(area_percents, fps);
    std::vector<std::size_t> order(fps.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return area_percents[a] > area_percents[b]; });

    StackedSample s;
    s.valid_rows = std::min(order.size(), n_max);
    s.truncated = order.size() - s.valid_rows;
    s.matrix = Tensor(n_max, 1 + width);
    for (std::size_t r = 0; r < s.valid_rows; ++r) write_row(s.matrix, r, area_percents[order[r]], fps[order[r]]);
    return s;
}

std::vector<std::vector<std::size_t>> split_kfold(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw DatasetError(DatasetErrorKind::KTooSmall, "k must be at least 2, got " + std::to_string(k));
    if (k > n) {
        throw DatasetError(DatasetErrorKind::KTooLarge,
                           "k=" + std::to_string(k) + " exceeds sample count " + std::to_string(n));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    autodiff::Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        folds[f].assign(perm.begin() + static_cast<long>(pos), perm.begin() + static_cast<long>(pos + size));
        std::sort(folds[f].begin(), folds[f].end());
        pos += size;
    }
    return folds;
}

}  // namespace eoprop::dataset
