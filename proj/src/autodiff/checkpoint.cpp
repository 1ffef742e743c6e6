#include "eoprop/autodiff/checkpoint.hpp"

#include "eoprop/binary_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace eoprop::autodiff {
namespace {

using io::read_le;
using io::write_le;

constexpr std::array<char, 8> kMagic{'E', 'O', 'P', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

std::vector<NamedTensor> read_body(std::istream& in) {
    if (read_le<std::uint32_t>(in) != kVersion) throw CheckpointError("unsupported checkpoint version");
    const auto count = read_le<std::uint32_t>(in);
    std::vector<NamedTensor> tensors(count);
    for (auto& t : tensors) {
        const auto len = read_le<std::uint32_t>(in);
        t.name.resize(len);
        if (!in.read(t.name.data(), len)) throw CheckpointError("truncated tensor name");
        const auto rows = read_le<std::uint64_t>(in);
        const auto cols = read_le<std::uint64_t>(in);
        t.tensor = Tensor(rows, cols);
    }
    for (auto& t : tensors)
        for (double& v : t.tensor.values()) v = read_le<double>(in);
    return tensors;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors,
                     const nlohmann::ordered_json& hyperparameters) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
    out.write(kMagic.data(), kMagic.size());
    write_le<std::uint32_t>(out, kVersion);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        write_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
        out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        write_le<std::uint64_t>(out, t.tensor.rows());
        write_le<std::uint64_t>(out, t.tensor.cols());
    }
    for (const auto& t : tensors)
        for (double v : t.tensor.values()) write_le<double>(out, v);
    if (!out) throw CheckpointError("write failed for " + path.string());

    std::ofstream sidecar(sidecar_path(path), std::ios::trunc);
    if (!sidecar) throw CheckpointError("cannot open sidecar for " + path.string());
    sidecar << hyperparameters.dump(2) << '\n';
}

std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open " + path.string());
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw CheckpointError("bad checkpoint magic");
    try {
        return read_body(in);
    } catch (const CheckpointError&) {
        throw;
    } catch (const std::runtime_error& e) {
        throw CheckpointError(path.string() + ": " + e.what());
    }
}

}  // namespace eoprop::autodiff
