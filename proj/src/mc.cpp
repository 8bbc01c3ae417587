// SPDX-License-Identifier: Apache-2.0
#include "latdpc/mc.hpp"

#include <algorithm>
#include <cmath>

#include "latdpc/numerics.hpp"

namespace latdpc {

namespace {
constexpr int kGroups = 8;

// Contiguous block -> group mapping covering each of `groups` groups.
inline std::size_t group_of(std::size_t block, std::size_t n_blocks, std::size_t groups) {
    return block * groups / n_blocks;
}

// Elementwise Neumaier accumulation of complex matrices plus |x|^2 sums.
struct MatrixAccumulator {
    Eigen::MatrixXd sum_re, comp_re, sum_im, comp_im, sum_sq, comp_sq;

    explicit MatrixAccumulator(Eigen::Index rows, Eigen::Index cols)
        : sum_re(Eigen::MatrixXd::Zero(rows, cols)),
          comp_re(Eigen::MatrixXd::Zero(rows, cols)),
          sum_im(Eigen::MatrixXd::Zero(rows, cols)),
          comp_im(Eigen::MatrixXd::Zero(rows, cols)),
          sum_sq(Eigen::MatrixXd::Zero(rows, cols)),
          comp_sq(Eigen::MatrixXd::Zero(rows, cols)) {}

    static void add_one(double& sum, double& comp, double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    void add(const Eigen::MatrixXcd& v) {
        for (Eigen::Index j = 0; j < v.cols(); ++j)
            for (Eigen::Index i = 0; i < v.rows(); ++i) {
                const std::complex<double> x = v(i, j);
                add_one(sum_re(i, j), comp_re(i, j), x.real());
                add_one(sum_im(i, j), comp_im(i, j), x.imag());
                add_one(sum_sq(i, j), comp_sq(i, j), std::norm(x));
            }
    }

    Eigen::MatrixXcd total() const {
        return (sum_re + comp_re).cast<std::complex<double>>() +
               std::complex<double>(0.0, 1.0) * (sum_im + comp_im).cast<std::complex<double>>();
    }
    Eigen::MatrixXd total_sq() const { return sum_sq + comp_sq; }
};

}  // namespace

std::vector<BlockRange> block_plan(std::int64_t n, std::int64_t block_size) {
    const std::int64_t n_blocks = (n + block_size - 1) / block_size;
    std::vector<BlockRange> plan;
    plan.reserve(static_cast<std::size_t>(n_blocks));
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const std::int64_t first = b * block_size;
        plan.push_back({b, first, std::min(block_size, n - first)});
    }
    return plan;
}

int effective_threads(int requested, std::size_t n_blocks) {
    int t = requested;
    if (t <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        t = hc == 0 ? 1 : static_cast<int>(hc);
    }
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(t), std::max<std::size_t>(n_blocks, 1)));
}

ScalarEstimate mc_scalar(const ScalarFunctional& f, const FadingSpec& spec, std::int64_t n,
                         const SeedSpec& seed, int threads) {
    if (n < 1) throw ConfigError("mc_scalar: sample count must be >= 1");
    spec.validate();
    if (spec.is_deterministic()) {
        RandomStream stream = RandomStream::derive(seed.master_seed, stream_domain::mc_block, 0);
        const double v = f(sample_channel(spec, stream));
        if (!std::isfinite(v)) throw NumericalError("mc_scalar: non-finite functional value at sample 0");
        return {v, 0.0, n};
    }
    const auto plan = block_plan(n, seed.block_size);
    std::vector<double> block_sum(plan.size());
    std::vector<double> block_sq(plan.size());
    run_blocks(n, seed, threads, stream_domain::mc_block, [&](const BlockRange& blk, RandomStream& stream) {
        CompensatedSum s, s2;
        for (std::int64_t i = 0; i < blk.count; ++i) {
            const double v = f(sample_channel(spec, stream));
            if (!std::isfinite(v))
                throw NumericalError("mc_scalar: non-finite functional value at sample " +
                                     std::to_string(blk.first + i));
            s.add(v);
            s2.add(v * v);
        }
        block_sum[static_cast<std::size_t>(blk.index)] = s.value();
        block_sq[static_cast<std::size_t>(blk.index)] = s2.value();
    });
    const double total = pairwise_sum(block_sum);
    const double total_sq = pairwise_sum(block_sq);
    const double mean = total / static_cast<double>(n);
    double se = 0.0;
    if (n > 1) {
        const double var =
            std::max(0.0, (total_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1));
        se = std::sqrt(var / static_cast<double>(n));
    }
    return {mean, se, n};
}

MatrixEstimate mc_matrix(const MatrixFunctional& f, const FadingSpec& spec, std::int64_t n,
                         const SeedSpec& seed, int threads) {
    if (n < 1) throw ConfigError("mc_matrix: sample count must be >= 1");
    spec.validate();
    if (spec.is_deterministic()) {
        RandomStream stream = RandomStream::derive(seed.master_seed, stream_domain::mc_block, 0);
        const Eigen::MatrixXcd v = f(sample_channel(spec, stream));
        if (!v.allFinite()) throw NumericalError("mc_matrix: non-finite functional value at sample 0");
        MatrixEstimate est;
        est.mean = v;
        est.std_error = Eigen::MatrixXd::Zero(v.rows(), v.cols());
        est.n_samples = n;
        est.group_means.assign(1, v);
        est.group_counts.assign(1, n);
        return est;
    }

    const auto plan = block_plan(n, seed.block_size);
    // Dimensions probed with a throwaway draw (separate domain, does not
    // perturb the block streams).
    Eigen::Index rows, cols;
    {
        RandomStream probe = RandomStream::derive(seed.master_seed, stream_domain::generic, 0);
        const Eigen::MatrixXcd v0 = f(sample_channel(spec, probe));
        rows = v0.rows();
        cols = v0.cols();
    }

    std::vector<MatrixAccumulator> acc(plan.size(), MatrixAccumulator(rows, cols));
    run_blocks(n, seed, threads, stream_domain::mc_block, [&](const BlockRange& blk, RandomStream& stream) {
        auto& a = acc[static_cast<std::size_t>(blk.index)];
        for (std::int64_t i = 0; i < blk.count; ++i) {
            const Eigen::MatrixXcd v = f(sample_channel(spec, stream));
            if (v.rows() != rows || v.cols() != cols)
                throw ConfigError("mc_matrix: functional changed output dimensions");
            if (!v.allFinite())
                throw NumericalError("mc_matrix: non-finite functional value at sample " +
                                     std::to_string(blk.first + i));
            a.add(v);
        }
    });

    const std::size_t n_blocks = plan.size();
    const std::size_t n_groups = std::min<std::size_t>(kGroups, n_blocks);
    MatrixEstimate est;
    est.n_samples = n;
    est.mean.resize(rows, cols);
    est.std_error.resize(rows, cols);
    est.group_means.assign(n_groups, Eigen::MatrixXcd::Zero(rows, cols));
    est.group_counts.assign(n_groups, 0);

    std::vector<Eigen::MatrixXcd> block_totals(n_blocks);
    std::vector<Eigen::MatrixXd> block_totals_sq(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        block_totals[b] = acc[b].total();
        block_totals_sq[b] = acc[b].total_sq();
        const std::size_t g = group_of(b, n_blocks, n_groups);
        est.group_means[g] += block_totals[b];
        est.group_counts[g] += plan[b].count;
    }
    for (std::size_t g = 0; g < n_groups; ++g)
        est.group_means[g] /= static_cast<double>(est.group_counts[g]);

    std::vector<double> scratch(n_blocks);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (std::size_t b = 0; b < n_blocks; ++b) scratch[b] = block_totals[b](i, j).real();
            const double tot_re = pairwise_sum(scratch);
            for (std::size_t b = 0; b < n_blocks; ++b) scratch[b] = block_totals[b](i, j).imag();
            const double tot_im = pairwise_sum(scratch);
            for (std::size_t b = 0; b < n_blocks; ++b) scratch[b] = block_totals_sq[b](i, j);
            const double tot_sq = pairwise_sum(scratch);
            const std::complex<double> mean(tot_re / static_cast<double>(n),
                                            tot_im / static_cast<double>(n));
            est.mean(i, j) = mean;
            double se = 0.0;
            if (n > 1) {
                const double var = std::max(
                    0.0, (tot_sq - static_cast<double>(n) * std::norm(mean)) / static_cast<double>(n - 1));
                se = std::sqrt(var / static_cast<double>(n));
            }
            est.std_error(i, j) = se;
        }
    return est;
}

}  // namespace latdpc
