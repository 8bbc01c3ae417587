// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "latdpc/bounds.hpp"
#include "latdpc/fading.hpp"
#include "latdpc/mc.hpp"

namespace latdpc {

// Two-user broadcast configuration. User 1 is quasi-static (deterministic G)
// for the fixed-channel region and ergodic for the doubly-faded region; user
// 2 is always ergodic. Power split: user 1 gets alpha*Px, user 2 (1-alpha)*Px.
struct BcConfig {
    int m = 1;
    int n1 = 1;
    int n2 = 1;
    double px = 1.0;
    double pw1 = 1.0;
    double pw2 = 1.0;
    FadingSpec user1;
    FadingSpec user2;
    std::vector<double> alpha_grid;
    // Alternative doubly-faded R1 with an extra 1/Pw1 inside a matrix whose
    // Phi term already carries Pw1. The default omits it, which makes the
    // doubly-faded region degenerate exactly to the fixed-channel one.
    bool faded_r1_alt = false;

    void validate() const;
};

enum class BcMode { lattice_fixed, lattice_faded, dpc_csit, time_share };

struct RegionPoint {
    double alpha = 0.0;
    double r1 = 0.0;
    double r1_se = 0.0;
    double r2 = 0.0;
    double r2_se = 0.0;
};

struct RegionCurve {
    BcMode mode = BcMode::lattice_fixed;
    std::vector<RegionPoint> points;
};

// Phi = (1-alpha) Px/M * C C^H + Pw1 * I_{N1} for a channel draw C.
Eigen::MatrixXcd phi(const Eigen::MatrixXcd& channel, double alpha, const BcConfig& bc);

// Quasi-static user 1: R1 = log2 det(I + alpha Px/M G^H Phi^{-1} G) exactly;
// R2 from the ergodic dirty-paper formula with effective dirt alpha*Px.
RegionPoint lattice_fixed_point(double alpha, const BcConfig& bc, std::int64_t n_samples,
                       const SeedSpec& seed, int threads = 0);

// Both users ergodic.
RegionPoint lattice_faded_point(double alpha, const BcConfig& bc, std::int64_t n_samples,
                       const SeedSpec& seed, int threads = 0);

// Non-causal-CSIT comparison: R1 as in the lattice region, R2 fully
// interference-free at power (1-alpha) Px.
RegionPoint dpc_csit_point(double alpha, const BcConfig& bc, std::int64_t n_samples,
                           const SeedSpec& seed, int threads = 0);

// The chord between (R1_max, 0) and (0, R2_max) sampled on the alpha grid.
RegionCurve time_share_curve(const BcConfig& bc, std::int64_t n_samples, const SeedSpec& seed,
                             int threads = 0);

// One point per grid alpha; every point reuses the same seed so channel
// samples are shared across alpha and across modes.
RegionCurve sweep_region(BcMode mode, const BcConfig& bc, std::int64_t n_samples,
                         const SeedSpec& seed, int threads = 0);

}  // namespace latdpc
