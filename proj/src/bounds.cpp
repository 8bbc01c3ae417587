// SPDX-License-Identifier: Apache-2.0
#include "latdpc/bounds.hpp"

#include <cmath>

#include "latdpc/numerics.hpp"

namespace latdpc {

namespace {

void check_dims(const PowerConfig& cfg, const FadingSpec& spec) {
    cfg.validate();
    spec.validate();
    if (cfg.m != spec.tx || cfg.n != spec.rx)
        throw ConfigError("bounds: antenna counts of PowerConfig and FadingSpec disagree");
}

double clamp_rate(double r) { return r > 0.0 ? r : 0.0; }

// Batch-means standard error of a nonlinear functional of matrix means.
double group_std_error(const MatrixEstimate& est,
                       const std::function<double(const Eigen::MatrixXcd&)>& g) {
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

}  // namespace

void PowerConfig::validate() const {
    if (!(pw > 0.0)) throw ConfigError("PowerConfig: noise power must be positive");
    if (px < 0.0 || ps < 0.0) throw ConfigError("PowerConfig: powers must be nonnegative");
    if (m < 1 || n < 1) throw ConfigError("PowerConfig: antenna counts must be positive");
}

ScalarEstimate outer_bound(const PowerConfig& cfg, const FadingSpec& spec, std::int64_t n_samples,
                           const SeedSpec& seed, int threads) {
    check_dims(cfg, spec);
    if (cfg.px == 0.0) return {0.0, 0.0, n_samples};
    const double rho = cfg.rho();
    return mc_scalar([rho](const Eigen::MatrixXcd& h) { return log2_det_hermitian(shifted_gram(1.0, rho, h)); },
                     spec, n_samples, seed, threads);
}

ScalarEstimate dpc_inner(const PowerConfig& cfg, const FadingSpec& spec, std::int64_t n_samples,
                         const SeedSpec& seed, int threads) {
    check_dims(cfg, spec);
    if (cfg.px == 0.0) return {0.0, 0.0, n_samples};
    const double c = cfg.dirt_shift();
    const double rho = cfg.rho();
    ScalarEstimate est = mc_scalar(
        [c, rho](const Eigen::MatrixXcd& h) { return log2_det_hermitian(shifted_gram(c, rho, h)); },
        spec, n_samples, seed, threads);
    est.mean = clamp_rate(est.mean);
    return est;
}

ScalarEstimate lattice_inner(const PowerConfig& cfg, const FadingSpec& spec, std::int64_t n_samples,
                             const SeedSpec& seed, int threads) {
    check_dims(cfg, spec);
    if (cfg.px == 0.0) return {0.0, 0.0, n_samples};
    const double c = cfg.dirt_shift();
    const double rho = cfg.rho();
    const MatrixEstimate inv = mc_matrix(
        [c, rho](const Eigen::MatrixXcd& h) { return hermitian_inverse(shifted_gram(c, rho, h)); },
        spec, n_samples, seed, threads);
    const auto rate_of = [](const Eigen::MatrixXcd& mean) { return -log2_det_hermitian(mean); };
    ScalarEstimate est;
    est.mean = clamp_rate(rate_of(inv.mean));
    est.std_error = group_std_error(inv, rate_of);
    est.n_samples = n_samples;
    return est;
}

double dpc_constant_gap(const PowerConfig& cfg) {
    cfg.validate();
    return static_cast<double>(cfg.m);
}

ScalarEstimate gap_general(const PowerConfig& cfg, const FadingSpec& spec, std::int64_t n_samples,
                           const SeedSpec& seed, int threads, bool allow_low_snr) {
    check_dims(cfg, spec);
    if (cfg.n < cfg.m) throw ConfigError("gap_general: requires N >= M");
    if (cfg.rho() < 1.0 && !allow_low_snr)
        throw ConfigError("gap_general: requires rho >= 1 (pass allow_low_snr to explore)");
    // Shared samples: both functionals run over the identical seed schedule.
    const MatrixEstimate gram = mc_matrix(
        [](const Eigen::MatrixXcd& h) -> Eigen::MatrixXcd { return h.adjoint() * h; }, spec,
        n_samples, seed, threads);
    const MatrixEstimate inv = mc_matrix(
        [](const Eigen::MatrixXcd& h) { return hermitian_inverse(h.adjoint() * h); }, spec,
        n_samples, seed, threads);

    // Empirical convergence guard for E[(H^H H)^{-1}]: heavy-tailed ensembles
    // (e.g. square Rayleigh) show large scatter across block groups.
    const auto trace_of = [](const Eigen::MatrixXcd& a) { return a.trace().real(); };
    const double tr_se = group_std_error(inv, trace_of);
    const double tr_mean = trace_of(inv.mean);
    if (!spec.is_deterministic() && tr_se > 0.1 * std::abs(tr_mean))
        throw NumericalError("gap_general: inverse moment estimate is not converging");

    Eigen::MatrixXcd shifted = gram.mean;
    shifted.diagonal().array() += 1.0;
    ScalarEstimate est;
    est.mean = log2_det_hermitian(shifted) + log2_det_hermitian(inv.mean);
    est.n_samples = n_samples;
    // Batch-means error from paired group means.
    const std::size_t k = std::min(gram.group_means.size(), inv.group_means.size());
    if (k >= 2) {
        std::vector<double> vals(k);
        for (std::size_t i = 0; i < k; ++i) {
            Eigen::MatrixXcd sg = gram.group_means[i];
            sg.diagonal().array() += 1.0;
            vals[i] = log2_det_hermitian(sg) + log2_det_hermitian(inv.group_means[i]);
        }
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(k);
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        est.std_error = std::sqrt(ss / static_cast<double>(k - 1) / static_cast<double>(k));
    }
    return est;
}

double gap_rayleigh_mimo(int m, int n) {
    if (m < 1 || n <= m) throw ConfigError("gap_rayleigh_mimo: requires N > M >= 1");
    return m * std::log2(1.0 + static_cast<double>(m + 1) / static_cast<double>(n - m));
}

double gap_nakagami(double m_shape) {
    if (!(m_shape > 1.0)) throw ConfigError("gap_nakagami: requires m > 1");
    return 1.0 + std::log2(1.0 + 1.0 / (m_shape - 1.0));
}

double gap_rayleigh_scalar(const PowerConfig& cfg) {
    cfg.validate();
    if (cfg.m != 1 || cfg.n != 1) throw ConfigError("gap_rayleigh_scalar: requires M = N = 1");
    const double kappa = std::max({cfg.px / cfg.pw, cfg.ps / cfg.pw, 1.0});
    return 1.48 + std::log2(std::log2(1.0 + kappa));
}

ScalarEstimate high_snr_scalar_gap(const PowerConfig& cfg, const FadingSpec& spec,
                                   std::int64_t n_samples, const SeedSpec& seed, int threads) {
    check_dims(cfg, spec);
    if (cfg.m != 1 || cfg.n != 1) throw ConfigError("high_snr_scalar_gap: requires M = N = 1");
    if (!(cfg.px > 0.0)) throw ConfigError("high_snr_scalar_gap: requires Px > 0");
    const double snr = cfg.px / cfg.pw;
    return mc_scalar(
        [snr](const Eigen::MatrixXcd& h) { return std::log2(1.0 + 1.0 / (std::norm(h(0, 0)) * snr)); },
        spec, n_samples, seed, threads);
}

Eigen::MatrixXd wishart_inverse_mean(int m, int n) {
    if (m < 1 || n <= m) throw ConfigError("wishart_inverse_mean: requires N > M >= 1");
    return Eigen::MatrixXd::Identity(m, m) / static_cast<double>(n - m);
}

double nakagami_inverse_moment(double m_shape) {
    if (!(m_shape > 1.0)) throw ConfigError("nakagami_inverse_moment: diverges for m <= 1");
    return 1.0 + 1.0 / (m_shape - 1.0);
}

}  // namespace latdpc
