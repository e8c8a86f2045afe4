#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace entac {

using Rng = std::mt19937_64;

/// 53-bit uniform in [0, 1). std distribution objects are
/// implementation-defined, so seeded streams would differ across standard
/// libraries; the raw-bits transform is portable.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard exponential via inverse CDF; -log(1-u) with u in [0,1) never
/// evaluates log at 0.
inline double exponential1(Rng& rng) {
    return -std::log1p(-uniform01(rng));
}

/// Uniform in [lo, hi).
inline double uniform_range(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform index in {0, ..., n-1}.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    std::size_t i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

}  // namespace entac
