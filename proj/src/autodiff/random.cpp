#include "eoprop/autodiff/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eoprop::autodiff {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

Tensor glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor t(fan_in, fan_out);
    for (double& v : t.values()) v = rng.uniform(-a, a);
    return t;
}

}  // namespace eoprop::autodiff
