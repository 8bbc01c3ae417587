// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace latdpc {

// Stateless splitmix64 finalizer, used for seed mixing.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Fixed domain tags so independent consumers of one master seed never share a
// stream (Monte Carlo blocks, simulator frames, dither draws, ...).
namespace stream_domain {
inline constexpr std::uint64_t mc_block = 0x4d43424c4f434b31ull;
inline constexpr std::uint64_t dpc_frame = 0x4450434652414d45ull;
inline constexpr std::uint64_t lattice_mc = 0x4c41545449434531ull;
inline constexpr std::uint64_t generic = 0x47454e4552494331ull;
}  // namespace stream_domain

// Self-contained xoshiro256++ stream with explicit, platform-independent
// derivation from (master seed, domain, index). Gaussian and gamma variates
// are generated here rather than with <random> so that a given seed yields
// the same sequence on every standard library.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) { reseed(seed); }

    static RandomStream derive(std::uint64_t master, std::uint64_t domain, std::uint64_t index) {
        std::uint64_t h = mix64(master);
        h = mix64(h ^ domain);
        h = mix64(h ^ index);
        return RandomStream(h);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform01_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);

    // Standard normal via Box-Muller (second variate cached).
    double normal();

    // Gamma(shape, scale) via Marsaglia-Tsang; shape > 0.
    double gamma(double shape, double scale);

  private:
    void reseed(std::uint64_t seed) {
        std::uint64_t st = seed;
        for (auto& w : s_) w = mix64(st++);
        has_cached_ = false;
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4] = {};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace latdpc
