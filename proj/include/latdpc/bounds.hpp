// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "latdpc/fading.hpp"
#include "latdpc/mc.hpp"

namespace latdpc {

// Signal/dirt/noise powers (linear) and antenna counts. rho() is the SNR per
// transmit antenna. All rates downstream are bits per complex channel use.
struct PowerConfig {
    double px = 1.0;  // total input power
    double ps = 0.0;  // per-element dirt variance
    double pw = 1.0;  // per-antenna noise variance
    int m = 1;        // transmit antennas
    int n = 1;        // receive antennas

    double rho() const { return px / (m * pw); }
    // Px/(Px + M*Ps), the identity shift of both inner bounds.
    double dirt_shift() const { return px / (px + m * ps); }
    void validate() const;
};

// Dirt-free point-to-point capacity E[log2 det(I + rho H^H H)].
ScalarEstimate outer_bound(const PowerConfig& cfg, const FadingSpec& spec, std::int64_t n_samples,
                           const SeedSpec& seed, int threads = 0);

// Dirty paper coding rate (E[log2 det(c I + rho H^H H)])^+ with c = Px/(Px+M*Ps).
// With Ps = 0 this equals outer_bound sample by sample. Px = 0 returns 0.
ScalarEstimate dpc_inner(const PowerConfig& cfg, const FadingSpec& spec, std::int64_t n_samples,
                         const SeedSpec& seed, int threads = 0);

// Lattice coding rate (-log2 det E[(c I + rho H^H H)^{-1}])^+. The standard
// error comes from batch means over the Monte Carlo block groups.
ScalarEstimate lattice_inner(const PowerConfig& cfg, const FadingSpec& spec, std::int64_t n_samples,
                             const SeedSpec& seed, int threads = 0);

// Constant DPC gap guarantee: M bits.
double dpc_constant_gap(const PowerConfig& cfg);

// Monte Carlo bound log2 det[(I + E[H^H H]) E[(H^H H)^{-1}]], both
// expectations over shared samples. Requires N >= M and rho >= 1 (the low-SNR
// regime is covered by the trivial 1-bit argument; pass allow_low_snr to
// evaluate anyway). Throws NumericalError when the inverse moment does not
// converge empirically.
ScalarEstimate gap_general(const PowerConfig& cfg, const FadingSpec& spec, std::int64_t n_samples,
                           const SeedSpec& seed, int threads = 0, bool allow_low_snr = false);

// Closed form M log2(1 + (M+1)/(N-M)) for i.i.d. Rayleigh, N > M.
double gap_rayleigh_mimo(int m, int n);

// Closed form 1 + log2(1 + 1/(m-1)) for scalar Nakagami-m, m > 1.
double gap_nakagami(double m_shape);

// Closed form 1.48 + log2(log2(1 + kappa)), kappa = max{Px/Pw, Ps/Pw, 1};
// scalar Rayleigh only.
double gap_rayleigh_scalar(const PowerConfig& cfg);

// E[log2(1 + 1/(|h|^2 Px/Pw))], the high-SNR-vanishing scalar gap bound.
ScalarEstimate high_snr_scalar_gap(const PowerConfig& cfg, const FadingSpec& spec,
                                   std::int64_t n_samples, const SeedSpec& seed, int threads = 0);

// E[(G^H G)^{-1}] = I_M/(N-M) for i.i.d. complex Gaussian G, N > M.
Eigen::MatrixXd wishart_inverse_mean(int m, int n);

// E[1/|h|^2] = 1 + 1/(m-1) under Nakagami-m, m > 1.
double nakagami_inverse_moment(double m_shape);

}  // namespace latdpc
