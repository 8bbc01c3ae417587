// SPDX-License-Identifier: Apache-2.0
#include "latdpc/rng.hpp"

#include <cmath>

#include "latdpc/errors.hpp"

namespace latdpc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
    if (n == 0) throw ConfigError("uniform_index: n must be positive");
    // Rejection sampling over the largest multiple of n below 2^64.
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t u = next_u64();
    while (u >= limit) u = next_u64();
    return u % n;
}

double RandomStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform01_pos();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(kTwoPi * u2);
    has_cached_ = true;
    return r * std::cos(kTwoPi * u2);
}

double RandomStream::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) throw ConfigError("gamma: shape and scale must be positive");
    if (shape < 1.0) {
        // Boost to shape+1, then apply the standard power correction.
        const double g = gamma(shape + 1.0, 1.0);
        return scale * g * std::pow(uniform01_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01_pos();
        if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

}  // namespace latdpc
