// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "latdpc/bounds.hpp"
#include "latdpc/fading.hpp"
#include "latdpc/lattice.hpp"
#include "latdpc/mc.hpp"

namespace latdpc {

// The transceiver always runs a real-valued model. A complex ensemble is
// simulated through its real equivalent (2M inputs / 2N outputs per use, the
// real and imaginary halves carrying one independent codeword each in the
// product-lattice case); a deterministic real matrix can also be driven
// directly.
enum class ChannelModel { real_direct, complex_split };

struct DpcConfig {
    PowerConfig cfg;
    FadingSpec spec;
    NestedLatticeCode code;
    int n_sym = 1;
    double epsilon = 0.1;
    ChannelModel model = ChannelModel::complex_split;
    // Encoder dirt scaling B = b*I. b = 1 is the ergodic-fading choice; the
    // Costa scaling is exposed for the non-fading regression test only.
    double costa_b = 1.0;

    int mr() const { return model == ChannelModel::real_direct ? cfg.m : 2 * cfg.m; }
    int nr() const { return model == ChannelModel::real_direct ? cfg.n : 2 * cfg.n; }
    double sig_power_per_dim() const { return cfg.px / mr(); }
    double dirt_var() const { return model == ChannelModel::real_direct ? cfg.ps : 0.5 * cfg.ps; }
    double noise_var() const { return model == ChannelModel::real_direct ? cfg.pw : 0.5 * cfg.pw; }
    double mu() const { return sig_power_per_dim() + dirt_var(); }

    void validate() const;
};

// Self-similar scaled-integer pair sized for the real model: coarse second
// moment = Px per real dimension, fine cell 1/ratio of the coarse cell
// (rate = log2(ratio) bits per dimension).
NestedLatticeCode make_self_similar_code(int dim, double sigma2, int ratio);

struct EncodeResult {
    Eigen::VectorXd x;
    Eigen::VectorXd lambda;  // the coarse point absorbed by the modulo
};

// x = [t - b*s - d] mod coarse. Throws when t is not a codeword.
EncodeResult encode(const Eigen::VectorXd& t, const Eigen::VectorXd& s, const Eigen::VectorXd& d,
                    const NestedLatticeCode& code, double b = 1.0);

// U_i = mu ((mu H H^T + Pw I)^{-1}) H, applied as U^T y. N x M.
Eigen::MatrixXd equalizer(const Eigen::MatrixXd& h, double mu, double noise_var);

// y' = U^T y + d, blockwise over channel uses; equals t + lambda + z.
Eigen::VectorXd equalize_strip(const Eigen::VectorXd& y, const std::vector<Eigen::MatrixXd>& u_seq,
                               const Eigen::VectorXd& d);

// z_i = -(I + (mu/Pw) H^T H)^{-1} (x_i + s_i) + mu H^T (mu H H^T + Pw I)^{-1} w_i.
// Identical to equalize_strip output minus (t + lambda).
Eigen::VectorXd effective_noise(const Eigen::VectorXd& x, const Eigen::VectorXd& s,
                                const Eigen::VectorXd& w, const std::vector<Eigen::MatrixXd>& h_seq,
                                double mu, double noise_var);

// (1+eps) * n_sym * tr E[((1/mu) I + (1/Pw) H^T H)^{-1}] over the real model.
ScalarEstimate decision_radius_sq(const DpcConfig& dpc, std::int64_t n_samples, const SeedSpec& seed,
                                  int threads = 0);

// Euclidean lattice decoding: nearest fine point, folded into the coarse
// cell. Channel-independent by construction (no channel argument).
Eigen::VectorXd decode(const Eigen::VectorXd& y_eq, const NestedLatticeCode& code);

// One simulated frame; draw order t, s, d, channel, w.
struct Frame {
    Eigen::VectorXd t, s, d, x, lambda, w, y, y_eq, z;
    std::vector<Eigen::MatrixXd> h_seq;
    bool correct = false;
    double z_norm_sq = 0.0;
};

Frame simulate_frame(const DpcConfig& dpc, RandomStream& stream);

struct TrialStats {
    double ser = 0.0;             // frame error rate
    double mean_z_norm_sq = 0.0;  // mean squared effective-noise norm per frame
    std::int64_t n_frames = 0;
    // Per-half error rates of the complex split (real/imaginary codewords);
    // NaN when the model is real_direct.
    double ser_real_half = 0.0;
    double ser_imag_half = 0.0;
};

TrialStats run_trials(const DpcConfig& dpc, std::int64_t n_trials, const SeedSpec& seed,
                      int threads = 0);

struct ConcentrationResult {
    double probability = 0.0;  // fraction of frames with ||z||^2 > radius
    double radius_sq = 0.0;
    ScalarEstimate radius;
};

ConcentrationResult noise_concentration(const DpcConfig& dpc, std::int64_t n_trials,
                                        const SeedSpec& seed, std::int64_t radius_samples = 20000,
                                        int threads = 0);

}  // namespace latdpc
