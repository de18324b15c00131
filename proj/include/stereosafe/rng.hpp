#pragma once

#include <cstdint>
#include <random>

namespace stereosafe {

/// 53-bit uniform draw in [lo, hi). Built directly from engine words so the
/// stream is identical across standard libraries.
inline double uniform_double(std::mt19937& rng, double lo, double hi) {
    const std::uint64_t hi_bits = static_cast<std::uint64_t>(rng()) << 21;
    const std::uint64_t lo_bits = static_cast<std::uint64_t>(rng()) >> 11;
    const double unit = static_cast<double>(hi_bits ^ lo_bits) * (1.0 / 9007199254740992.0);
    return lo + (hi - lo) * unit;
}

/// Uniform integer in [lo, hi] by rejection-free modulo (bias is irrelevant
/// for the small ranges used here, determinism is not).
inline int uniform_int(std::mt19937& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint32_t>(hi - lo + 1));
}

}  // namespace stereosafe
