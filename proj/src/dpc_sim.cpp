// SPDX-License-Identifier: Apache-2.0
#include "latdpc/dpc_sim.hpp"

#include <cmath>

#include "latdpc/kernels.hpp"
#include "latdpc/numerics.hpp"

namespace latdpc {

namespace {

Eigen::MatrixXd draw_real_channel(const DpcConfig& dpc, RandomStream& stream) {
    if (dpc.model == ChannelModel::real_direct) return dpc.spec.fixed.real();
    return real_equivalent(sample_channel(dpc.spec, stream));
}

}  // namespace

void DpcConfig::validate() const {
    cfg.validate();
    spec.validate();
    if (n_sym < 1) throw ConfigError("dpc: n_sym must be >= 1");
    if (!(epsilon >= 0.0)) throw ConfigError("dpc: epsilon must be nonnegative");
    if (cfg.m != spec.tx || cfg.n != spec.rx)
        throw ConfigError("dpc: antenna counts of PowerConfig and FadingSpec disagree");
    if (model == ChannelModel::real_direct) {
        if (!spec.is_deterministic())
            throw ConfigError("dpc: real_direct model requires a deterministic spec");
        if (spec.fixed.imag().cwiseAbs().maxCoeff() != 0.0)
            throw ConfigError("dpc: real_direct model requires a real-valued matrix");
    }
    if (code.dim() != mr() * n_sym)
        throw ConfigError("dpc: code dimension must equal (real input dims) * n_sym");
    // Coarse shaping power must match the per-dimension budget.
    const double target = sig_power_per_dim();
    if (code.coarse().kind() == Lattice::Kind::scaled_integer) {
        const double sm = code.coarse().second_moment();
        if (std::abs(sm - target) > 0.01 * target)
            throw ConfigError("dpc: coarse second moment deviates more than 1% from Px per dimension");
    } else {
        RandomStream stream = RandomStream::derive(0x736d6f6d656e74ull, stream_domain::lattice_mc, 0);
        const std::int64_t n_mc = 20000;
        const double sm = code.coarse().second_moment_mc(n_mc, stream);
        if (std::abs(sm - target) > 0.01 * target + 3.0 * sm / std::sqrt(static_cast<double>(n_mc)))
            throw ConfigError("dpc: coarse second moment deviates from Px per dimension");
    }
}

NestedLatticeCode make_self_similar_code(int dim, double sigma2, int ratio) {
    if (ratio < 1) throw ConfigError("dpc: codebook ratio must be >= 1");
    const double qc = scaled_integer_q_for_power(sigma2);
    return NestedLatticeCode(Lattice::scaled_integer(dim, qc),
                             Lattice::scaled_integer(dim, qc / ratio));
}

EncodeResult encode(const Eigen::VectorXd& t, const Eigen::VectorXd& s, const Eigen::VectorXd& d,
                    const NestedLatticeCode& code, double b) {
    const int n = code.dim();
    if (t.size() != n || s.size() != n || d.size() != n)
        throw ConfigError("encode: dimension mismatch");
    if (!code.contains_codeword(t)) throw ConfigError("encode: t is not a codeword");
    EncodeResult out;
    out.x.resize(n);
    if (code.coarse().kind() == Lattice::Kind::scaled_integer) {
        kern::active().encode_fold_q(out.x.data(), t.data(), s.data(), d.data(), b,
                                     code.coarse().q(), static_cast<std::size_t>(n));
        out.lambda = out.x - (t - b * s - d);
    } else {
        const Eigen::VectorXd r = t - b * s - d;
        out.x = code.coarse().fold(r);
        out.lambda = out.x - r;
    }
    return out;
}

Eigen::MatrixXd equalizer(const Eigen::MatrixXd& h, double mu, double noise_var) {
    if (!(noise_var > 0.0)) throw ConfigError("equalizer: noise variance must be positive");
    Eigen::MatrixXd a = mu * (h * h.transpose());
    a.diagonal().array() += noise_var;
    return mu * a.llt().solve(h);
}

Eigen::VectorXd equalize_strip(const Eigen::VectorXd& y, const std::vector<Eigen::MatrixXd>& u_seq,
                               const Eigen::VectorXd& d) {
    if (u_seq.empty()) throw ConfigError("equalize_strip: empty equalizer sequence");
    const int nr = static_cast<int>(u_seq.front().rows());
    const int mr = static_cast<int>(u_seq.front().cols());
    const int n_sym = static_cast<int>(u_seq.size());
    if (y.size() != static_cast<Eigen::Index>(nr) * n_sym || d.size() != static_cast<Eigen::Index>(mr) * n_sym)
        throw ConfigError("equalize_strip: dimension mismatch");
    Eigen::VectorXd out(static_cast<Eigen::Index>(mr) * n_sym);
    for (int i = 0; i < n_sym; ++i)
        out.segment(static_cast<Eigen::Index>(i) * mr, mr) =
            u_seq[static_cast<std::size_t>(i)].transpose() * y.segment(static_cast<Eigen::Index>(i) * nr, nr);
    out += d;
    return out;
}

Eigen::VectorXd effective_noise(const Eigen::VectorXd& x, const Eigen::VectorXd& s,
                                const Eigen::VectorXd& w, const std::vector<Eigen::MatrixXd>& h_seq,
                                double mu, double noise_var) {
    if (h_seq.empty()) throw ConfigError("effective_noise: empty channel sequence");
    const int nr = static_cast<int>(h_seq.front().rows());
    const int mr = static_cast<int>(h_seq.front().cols());
    const int n_sym = static_cast<int>(h_seq.size());
    Eigen::VectorXd z(static_cast<Eigen::Index>(mr) * n_sym);
    for (int i = 0; i < n_sym; ++i) {
        const Eigen::MatrixXd& h = h_seq[static_cast<std::size_t>(i)];
        const Eigen::VectorXd xs = x.segment(static_cast<Eigen::Index>(i) * mr, mr) +
                                   s.segment(static_cast<Eigen::Index>(i) * mr, mr);
        Eigen::MatrixXd a = (mu / noise_var) * (h.transpose() * h);
        a.diagonal().array() += 1.0;
        Eigen::MatrixXd b = mu * (h * h.transpose());
        b.diagonal().array() += noise_var;
        z.segment(static_cast<Eigen::Index>(i) * mr, mr) =
            -a.llt().solve(xs) +
            mu * (h.transpose() * b.llt().solve(w.segment(static_cast<Eigen::Index>(i) * nr, nr)));
    }
    return z;
}

ScalarEstimate decision_radius_sq(const DpcConfig& dpc, std::int64_t n_samples, const SeedSpec& seed,
                                  int threads) {
    dpc.validate();
    if (!(dpc.epsilon >= 0.0)) throw ConfigError("decision_radius_sq: epsilon must be >= 0");
    const double mu = dpc.mu();
    const double pw = dpc.noise_var();
    const int mr = dpc.mr();
    const bool direct = dpc.model == ChannelModel::real_direct;
    const ScalarEstimate tr = mc_scalar(
        [&, mu, pw, mr, direct](const Eigen::MatrixXcd& hc) {
            const Eigen::MatrixXd h = direct ? Eigen::MatrixXd(hc.real()) : real_equivalent(hc);
            Eigen::MatrixXd a = (1.0 / pw) * (h.transpose() * h);
            a.diagonal().array() += 1.0 / mu;
            return Eigen::MatrixXd(a.llt().solve(Eigen::MatrixXd::Identity(mr, mr))).trace();
        },
        dpc.spec, n_samples, seed, threads);
    const double factor = (1.0 + dpc.epsilon) * static_cast<double>(dpc.n_sym);
    return {factor * tr.mean, factor * tr.std_error, tr.n_samples};
}

Eigen::VectorXd decode(const Eigen::VectorXd& y_eq, const NestedLatticeCode& code) {
    if (!y_eq.allFinite()) throw NumericalError("decode: non-finite input");
    return code.nearest_codeword(y_eq);
}

Frame simulate_frame(const DpcConfig& dpc, RandomStream& stream) {
    const int mr = dpc.mr();
    const int nr = dpc.nr();
    const int n_sym = dpc.n_sym;
    const Eigen::Index frame_dim = static_cast<Eigen::Index>(mr) * n_sym;
    const double mu = dpc.mu();
    const double pw = dpc.noise_var();

    Frame f;
    f.t = dpc.code.random_codeword(stream);
    f.s.resize(frame_dim);
    const double dirt_std = std::sqrt(dpc.dirt_var());
    for (Eigen::Index i = 0; i < frame_dim; ++i) f.s[i] = dirt_std * stream.normal();
    f.d = dpc.code.coarse().sample_dither(stream);

    const EncodeResult enc = encode(f.t, f.s, f.d, dpc.code, dpc.costa_b);
    f.x = enc.x;
    f.lambda = enc.lambda;

    f.h_seq.reserve(static_cast<std::size_t>(n_sym));
    for (int i = 0; i < n_sym; ++i) f.h_seq.push_back(draw_real_channel(dpc, stream));

    const double noise_std = std::sqrt(pw);
    f.w.resize(static_cast<Eigen::Index>(nr) * n_sym);
    for (Eigen::Index i = 0; i < f.w.size(); ++i) f.w[i] = noise_std * stream.normal();

    f.y.resize(static_cast<Eigen::Index>(nr) * n_sym);
    std::vector<Eigen::MatrixXd> u_seq;
    u_seq.reserve(static_cast<std::size_t>(n_sym));
    for (int i = 0; i < n_sym; ++i) {
        const Eigen::MatrixXd& h = f.h_seq[static_cast<std::size_t>(i)];
        f.y.segment(static_cast<Eigen::Index>(i) * nr, nr) =
            h * (f.x.segment(static_cast<Eigen::Index>(i) * mr, mr) +
                 f.s.segment(static_cast<Eigen::Index>(i) * mr, mr)) +
            f.w.segment(static_cast<Eigen::Index>(i) * nr, nr);
        u_seq.push_back(equalizer(h, mu, pw));
    }

    f.y_eq = equalize_strip(f.y, u_seq, f.d);
    f.z = f.y_eq - f.t - f.lambda;
    f.z_norm_sq = kern::active().sum_sq(f.z.data(), static_cast<std::size_t>(f.z.size()));

    const Eigen::VectorXd decoded = decode(f.y_eq, dpc.code);
    f.correct = (decoded - f.t).norm() <= 1e-9 * (1.0 + f.t.norm());
    return f;
}

namespace {

// Frame-indexed trial loop shared by run_trials and noise_concentration.
// Streams derive from (seed, frame index), so the statistics do not depend on
// block size or thread count.
template <class PerFrame>
void run_frames(const DpcConfig& dpc, std::int64_t n_trials, const SeedSpec& seed, int threads,
                PerFrame&& per_frame) {
    run_blocks(n_trials, seed, threads, stream_domain::dpc_frame,
               [&](const BlockRange& blk, RandomStream&) {
                   for (std::int64_t i = 0; i < blk.count; ++i) {
                       const std::int64_t frame_idx = blk.first + i;
                       RandomStream stream = RandomStream::derive(
                           seed.master_seed, stream_domain::dpc_frame,
                           static_cast<std::uint64_t>(frame_idx) + 1);
                       per_frame(blk.index, simulate_frame(dpc, stream));
                   }
               });
}

bool half_correct(const Frame& f, const DpcConfig& dpc, int half) {
    const int m = dpc.cfg.m;
    const int mr = dpc.mr();
    const Eigen::VectorXd decoded = decode(f.y_eq, dpc.code);
    double err = 0.0;
    double ref = 0.0;
    for (int i = 0; i < dpc.n_sym; ++i)
        for (int j = 0; j < m; ++j) {
            const Eigen::Index idx = static_cast<Eigen::Index>(i) * mr + half * m + j;
            const double e = decoded[idx] - f.t[idx];
            err += e * e;
            ref += f.t[idx] * f.t[idx];
        }
    return std::sqrt(err) <= 1e-9 * (1.0 + std::sqrt(ref));
}

}  // namespace

TrialStats run_trials(const DpcConfig& dpc, std::int64_t n_trials, const SeedSpec& seed, int threads) {
    dpc.validate();
    if (n_trials < 1) throw ConfigError("run_trials: n_trials must be >= 1");
    const auto plan = block_plan(n_trials, seed.block_size);
    std::vector<std::int64_t> errors(plan.size(), 0);
    std::vector<std::int64_t> errors_re(plan.size(), 0);
    std::vector<std::int64_t> errors_im(plan.size(), 0);
    std::vector<CompensatedSum> z_sums(plan.size());
    const bool split = dpc.model == ChannelModel::complex_split;
    run_frames(dpc, n_trials, seed, threads, [&](std::int64_t block, const Frame& f) {
        const auto b = static_cast<std::size_t>(block);
        if (!f.correct) ++errors[b];
        if (split) {
            if (!half_correct(f, dpc, 0)) ++errors_re[b];
            if (!half_correct(f, dpc, 1)) ++errors_im[b];
        }
        z_sums[b].add(f.z_norm_sq);
    });
    std::int64_t total_err = 0, total_re = 0, total_im = 0;
    std::vector<double> z_partials(plan.size());
    for (std::size_t b = 0; b < plan.size(); ++b) {
        total_err += errors[b];
        total_re += errors_re[b];
        total_im += errors_im[b];
        z_partials[b] = z_sums[b].value();
    }
    TrialStats out;
    out.n_frames = n_trials;
    out.ser = static_cast<double>(total_err) / static_cast<double>(n_trials);
    out.mean_z_norm_sq = pairwise_sum(z_partials) / static_cast<double>(n_trials);
    const double nan = std::nan("");
    out.ser_real_half = split ? static_cast<double>(total_re) / static_cast<double>(n_trials) : nan;
    out.ser_imag_half = split ? static_cast<double>(total_im) / static_cast<double>(n_trials) : nan;
    return out;
}

ConcentrationResult noise_concentration(const DpcConfig& dpc, std::int64_t n_trials,
                                        const SeedSpec& seed, std::int64_t radius_samples,
                                        int threads) {
    dpc.validate();
    if (n_trials < 1) throw ConfigError("noise_concentration: n_trials must be >= 1");
    ConcentrationResult out;
    out.radius = decision_radius_sq(dpc, radius_samples, seed, threads);
    out.radius_sq = out.radius.mean;
    const auto plan = block_plan(n_trials, seed.block_size);
    std::vector<std::int64_t> exceed(plan.size(), 0);
    run_frames(dpc, n_trials, seed, threads, [&](std::int64_t block, const Frame& f) {
        if (f.z_norm_sq > out.radius_sq) ++exceed[static_cast<std::size_t>(block)];
    });
    std::int64_t total = 0;
    for (auto e : exceed) total += e;
    out.probability = static_cast<double>(total) / static_cast<double>(n_trials);
    return out;
}

}  // namespace latdpc
