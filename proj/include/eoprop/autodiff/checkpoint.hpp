#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "eoprop/autodiff/tensor.hpp"

namespace eoprop::autodiff {

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NamedTensor {
    std::string name;
    Tensor tensor;
};

/// Binary layout, all integers and floats little-endian:
///
///   "EOPCKPT1"                      8-byte magic
///   u32 version (1), u32 count
///   count x { u32 name_len, name bytes, u64 rows, u64 cols }
///   payload: every tensor's row-major f64 values, in table order
///
/// The hyperparameter sidecar is written next to it as `<path>.json`.
void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors,
                     const nlohmann::ordered_json& hyperparameters);

std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path);

inline std::filesystem::path sidecar_path(const std::filesystem::path& checkpoint) {
    return std::filesystem::path(checkpoint.string() + ".json");
}

}  // namespace eoprop::autodiff
