#pragma once

#include <cstdint>
#include <random>

#include "eoprop/autodiff/tensor.hpp"

namespace eoprop::autodiff {

/// Seeded 64-bit generator with platform-independent derived draws.
///
/// std::mt19937_64 output is fixed by the standard, but the standard
/// distributions are not, so draws are derived here: uniform doubles take the
/// top 53 bits, bounded integers use rejection sampling on the raw output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

/// Glorot-uniform weights: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
Tensor glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);

}  // namespace eoprop::autodiff
