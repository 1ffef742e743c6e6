#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eoprop/autodiff/tensor.hpp"
#include "eoprop/chem/fingerprint.hpp"

namespace eoprop::dataset {

using autodiff::Tensor;

enum class DatasetErrorKind { NoCategoriesSurvive, EmptyInput, WidthMismatch, KTooLarge, KTooSmall, InvalidArgument };

class DatasetError : public std::runtime_error {
public:
    DatasetError(DatasetErrorKind kind, const std::string& detail);
    DatasetErrorKind kind() const noexcept { return kind_; }

private:
    DatasetErrorKind kind_;
};

const char* to_string(DatasetErrorKind kind);

inline constexpr std::size_t kDefaultMinCount = 5;
inline constexpr std::size_t kDefaultMaxNodes = 64;

struct LabelSpace {
    std::vector<std::string> categories;  // sorted bytewise
    std::size_t min_count = kDefaultMinCount;

    std::size_t size() const noexcept { return categories.size(); }
    /// Column of `tissue`, or size() if it was dropped.
    std::size_t index_of(const std::string& tissue) const;
};

struct LabelEncoding {
    LabelSpace space;
    std::vector<std::size_t> kept;          // input indices that survive, ascending
    std::vector<std::vector<int>> targets;  // one one-hot row per kept index
    std::vector<std::size_t> excluded;      // input indices whose tissue was dropped
    std::map<std::string, std::size_t> counts;
};

/// Keeps tissue categories with at least `min_count` occurrences and one-hot
/// encodes each surviving record. Throws NoCategoriesSurvive / EmptyInput.
LabelEncoding encode_labels(std::span<const std::string> tissues, std::size_t min_count = kDefaultMinCount);

/// [area/100, bit0, bit1, ...] as doubles.
std::vector<double> build_node_feature(double area_percent, const chem::Fingerprint& fp);

/// Complete graph over an oil's compounds, self-loops included.
struct GraphSample {
    struct Edge {
        std::size_t src;
        std::size_t dst;
        double weight;
    };
    Tensor nodes;    // N x (1 + n_bits)
    Tensor weights;  // N x N Tanimoto similarity, unit diagonal
    std::vector<Edge> edges;

    std::size_t num_nodes() const noexcept { return nodes.rows(); }
};

/// Zero-padded node-feature stack ordered by descending area.
struct StackedSample {
    Tensor matrix;  // n_max x (1 + n_bits)
    std::size_t valid_rows = 0;
    std::size_t truncated = 0;
};

GraphSample assemble_graph_sample(std::span<const double> area_percents, std::span<const chem::Fingerprint> fps);

/// Rows beyond n_max (the lowest-area compounds) are dropped and counted in `truncated`.
/// Ties in area keep input order.
StackedSample assemble_stacked_sample(std::span<const double> area_percents, std::span<const chem::Fingerprint> fps,
                                      std::size_t n_max = kDefaultMaxNodes);

/// Shuffled K-fold partition of [0, n). The first n % k folds hold one extra
/// index; indices inside a fold are ascending. Deterministic in `seed`.
std::vector<std::vector<std::size_t>> split_kfold(std::size_t n, std::size_t k, std::uint64_t seed);

inline constexpr std::size_t kDefaultFolds = 5;
inline constexpr std::uint64_t kDefaultSeed = 42;

}  // namespace eoprop::dataset
