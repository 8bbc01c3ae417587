// SPDX-License-Identifier: Apache-2.0
#include "latdpc/bc_regions.hpp"

#include <cmath>

#include "latdpc/numerics.hpp"

namespace latdpc {

namespace {

PowerConfig user2_power(const BcConfig& bc, double alpha) {
    // With respect to receiver 2 the channel is a dirty paper channel whose
    // signal power is (1-alpha)Px and whose dirt carries alpha*Px in total
    // (per-element variance alpha*Px/M).
    PowerConfig cfg;
    cfg.px = (1.0 - alpha) * bc.px;
    cfg.ps = alpha * bc.px / bc.m;
    cfg.pw = bc.pw2;
    cfg.m = bc.m;
    cfg.n = bc.n2;
    return cfg;
}

PowerConfig user_full_power(const BcConfig& bc, double px, double pw, int n_rx) {
    PowerConfig cfg;
    cfg.px = px;
    cfg.ps = 0.0;
    cfg.pw = pw;
    cfg.m = bc.m;
    cfg.n = n_rx;
    return cfg;
}

double clamp_rate(double r) { return r > 0.0 ? r : 0.0; }

double group_se(const MatrixEstimate& est, const std::function<double(const Eigen::MatrixXcd&)>& g) {
    const std::size_t k = est.group_means.size();
    if (k < 2) return 0.0;
    std::vector<double> vals(k);
    for (std::size_t i = 0; i < k; ++i) vals[i] = g(est.group_means[i]);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(k - 1) / static_cast<double>(k));
}

// Fixed-channel R1: log2 det(I + alpha Px/M G^H Phi^{-1} G).
double fixed_r1_value(double alpha, const BcConfig& bc) {
    const Eigen::MatrixXcd& g = bc.user1.fixed;
    if (alpha == 0.0) return 0.0;
    if (alpha == 1.0) {
        // Phi collapses to Pw1*I; same evaluation path as the single-user
        // capacity so curve endpoints match it exactly.
        return log2_det_hermitian(shifted_gram(1.0, bc.px / (bc.m * bc.pw1), g));
    }
    const Eigen::MatrixXcd ph = phi(g, alpha, bc);
    Eigen::MatrixXcd a = (alpha * bc.px / bc.m) * (g.adjoint() * ph.llt().solve(g));
    a.diagonal().array() += 1.0;
    return log2_det_hermitian(a);
}

}  // namespace

void BcConfig::validate() const {
    if (m < 1 || n1 < 1 || n2 < 1) throw ConfigError("bc: antenna counts must be positive");
    if (!(px >= 0.0) || !(pw1 > 0.0) || !(pw2 > 0.0)) throw ConfigError("bc: invalid powers");
    user1.validate();
    user2.validate();
    if (user1.tx != m || user1.rx != n1) throw ConfigError("bc: user1 spec dimensions disagree");
    if (user2.tx != m || user2.rx != n2) throw ConfigError("bc: user2 spec dimensions disagree");
    double prev = -1.0;
    for (double a : alpha_grid) {
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("bc: alpha grid must lie in [0,1]");
        if (a < prev) throw ConfigError("bc: alpha grid must be sorted");
        prev = a;
    }
    if (alpha_grid.empty()) throw ConfigError("bc: alpha grid must be nonempty");
}

Eigen::MatrixXcd phi(const Eigen::MatrixXcd& channel, double alpha, const BcConfig& bc) {
    Eigen::MatrixXcd ph = ((1.0 - alpha) * bc.px / bc.m) * (channel * channel.adjoint());
    ph.diagonal().array() += bc.pw1;
    return ph;
}

RegionPoint lattice_fixed_point(double alpha, const BcConfig& bc, std::int64_t n_samples,
                       const SeedSpec& seed, int threads) {
    bc.validate();
    if (!bc.user1.is_deterministic())
        throw ConfigError("lattice_fixed_point: user1 must be deterministic (use the doubly-faded mode for an ergodic user1)");
    RegionPoint pt;
    pt.alpha = alpha;
    pt.r1 = clamp_rate(fixed_r1_value(alpha, bc));
    pt.r1_se = 0.0;
    const ScalarEstimate r2 = lattice_inner(user2_power(bc, alpha), bc.user2, n_samples, seed, threads);
    pt.r2 = r2.mean;
    pt.r2_se = r2.std_error;
    return pt;
}

RegionPoint lattice_faded_point(double alpha, const BcConfig& bc, std::int64_t n_samples,
                       const SeedSpec& seed, int threads) {
    bc.validate();
    RegionPoint pt;
    pt.alpha = alpha;
    if (alpha == 0.0) {
        pt.r1 = 0.0;
        pt.r1_se = 0.0;
    } else if (alpha == 1.0) {
        // Phi degenerates to Pw1*I: identical to the single-user lattice rate.
        const ScalarEstimate r1 =
            lattice_inner(user_full_power(bc, bc.px, bc.pw1, bc.n1), bc.user1, n_samples, seed, threads);
        pt.r1 = r1.mean;
        pt.r1_se = r1.std_error;
    } else {
        const double coeff = bc.faded_r1_alt ? alpha * bc.px / (bc.m * bc.pw1) : alpha * bc.px / bc.m;
        const MatrixEstimate inv = mc_matrix(
            [&bc, alpha, coeff](const Eigen::MatrixXcd& h) {
                const Eigen::MatrixXcd ph = phi(h, alpha, bc);
                Eigen::MatrixXcd a = coeff * (h.adjoint() * ph.llt().solve(h));
                a.diagonal().array() += 1.0;
                return hermitian_inverse(a);
            },
            bc.user1, n_samples, seed, threads);
        const auto rate_of = [](const Eigen::MatrixXcd& mean) { return -log2_det_hermitian(mean); };
        pt.r1 = clamp_rate(rate_of(inv.mean));
        pt.r1_se = group_se(inv, rate_of);
    }
    const ScalarEstimate r2 = lattice_inner(user2_power(bc, alpha), bc.user2, n_samples, seed, threads);
    pt.r2 = r2.mean;
    pt.r2_se = r2.std_error;
    return pt;
}

RegionPoint dpc_csit_point(double alpha, const BcConfig& bc, std::int64_t n_samples,
                           const SeedSpec& seed, int threads) {
    bc.validate();
    RegionPoint pt;
    pt.alpha = alpha;
    if (bc.user1.is_deterministic()) {
        pt.r1 = clamp_rate(fixed_r1_value(alpha, bc));
        pt.r1_se = 0.0;
    } else if (alpha == 0.0) {
        pt.r1 = 0.0;
        pt.r1_se = 0.0;
    } else if (alpha == 1.0) {
        const ScalarEstimate r1 =
            outer_bound(user_full_power(bc, bc.px, bc.pw1, bc.n1), bc.user1, n_samples, seed, threads);
        pt.r1 = r1.mean;
        pt.r1_se = r1.std_error;
    } else {
        const double coeff = alpha * bc.px / bc.m;
        const ScalarEstimate r1 = mc_scalar(
            [&bc, alpha, coeff](const Eigen::MatrixXcd& h) {
                const Eigen::MatrixXcd ph = phi(h, alpha, bc);
                Eigen::MatrixXcd a = coeff * (h.adjoint() * ph.llt().solve(h));
                a.diagonal().array() += 1.0;
                return log2_det_hermitian(a);
            },
            bc.user1, n_samples, seed, threads);
        pt.r1 = clamp_rate(r1.mean);
        pt.r1_se = r1.std_error;
    }
    // DPC with non-causal CSIT removes the interference at receiver 2.
    const ScalarEstimate r2 =
        outer_bound(user_full_power(bc, (1.0 - alpha) * bc.px, bc.pw2, bc.n2), bc.user2, n_samples,
                    seed, threads);
    pt.r2 = r2.mean;
    pt.r2_se = r2.std_error;
    return pt;
}

RegionCurve time_share_curve(const BcConfig& bc, std::int64_t n_samples, const SeedSpec& seed,
                             int threads) {
    bc.validate();
    const RegionPoint user1_max = bc.user1.is_deterministic()
                                      ? lattice_fixed_point(1.0, bc, n_samples, seed, threads)
                                      : lattice_faded_point(1.0, bc, n_samples, seed, threads);
    const RegionPoint user2_max = bc.user1.is_deterministic()
                                      ? lattice_fixed_point(0.0, bc, n_samples, seed, threads)
                                      : lattice_faded_point(0.0, bc, n_samples, seed, threads);
    RegionCurve curve;
    curve.mode = BcMode::time_share;
    curve.points.reserve(bc.alpha_grid.size());
    for (double a : bc.alpha_grid) {
        RegionPoint pt;
        pt.alpha = a;
        pt.r1 = a * user1_max.r1;
        pt.r1_se = a * user1_max.r1_se;
        pt.r2 = (1.0 - a) * user2_max.r2;
        pt.r2_se = (1.0 - a) * user2_max.r2_se;
        curve.points.push_back(pt);
    }
    return curve;
}

RegionCurve sweep_region(BcMode mode, const BcConfig& bc, std::int64_t n_samples,
                         const SeedSpec& seed, int threads) {
    bc.validate();
    if (mode == BcMode::time_share) return time_share_curve(bc, n_samples, seed, threads);
    RegionCurve curve;
    curve.mode = mode;
    curve.points.reserve(bc.alpha_grid.size());
    for (double a : bc.alpha_grid) {
        switch (mode) {
            case BcMode::lattice_fixed:
                curve.points.push_back(lattice_fixed_point(a, bc, n_samples, seed, threads));
                break;
            case BcMode::lattice_faded:
                curve.points.push_back(lattice_faded_point(a, bc, n_samples, seed, threads));
                break;
            case BcMode::dpc_csit:
                curve.points.push_back(dpc_csit_point(a, bc, n_samples, seed, threads));
                break;
            case BcMode::time_share:
                break;
        }
    }
    return curve;
}

}  // namespace latdpc
