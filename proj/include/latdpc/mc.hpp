// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "latdpc/errors.hpp"
#include "latdpc/fading.hpp"
#include "latdpc/rng.hpp"

namespace latdpc {

// Seed schedule: per-block streams are derived from (master_seed, block
// index), so the estimate is a pure function of (functional, spec, n, seed)
// regardless of how many threads execute the blocks.
struct SeedSpec {
    std::uint64_t master_seed = 42;
    std::int64_t block_size = 4096;
};

struct ScalarEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
};

// Matrix-valued estimate. The per-sample values are Hermitian in every use
// here, so the mean is stored complex and consumers take real parts of
// determinants/traces. std_error is the elementwise standard error of the
// complex entries. group_means holds up to eight equal-share partial means
// (by block index) for batch-means error bars of nonlinear functionals.
struct MatrixEstimate {
    Eigen::MatrixXcd mean;
    Eigen::MatrixXd std_error;
    std::int64_t n_samples = 0;
    std::vector<Eigen::MatrixXcd> group_means;
    std::vector<std::int64_t> group_counts;
};

struct BlockRange {
    std::int64_t index = 0;
    std::int64_t first = 0;
    std::int64_t count = 0;
};

std::vector<BlockRange> block_plan(std::int64_t n, std::int64_t block_size);

int effective_threads(int requested, std::size_t n_blocks);

// Runs fn(block, stream) once per block, possibly concurrently. Blocks are
// scheduled by an atomic cursor; any per-block state must be written to
// block-indexed storage by the caller. The first failing block (by index)
// has its exception rethrown after all workers join.
template <class Fn>
void run_blocks(std::int64_t n, const SeedSpec& seed, int threads, std::uint64_t domain, Fn&& fn) {
    if (n < 1) throw ConfigError("monte carlo: sample count must be >= 1");
    if (seed.block_size < 1) throw ConfigError("monte carlo: block size must be >= 1");
    const std::vector<BlockRange> plan = block_plan(n, seed.block_size);
    std::vector<std::exception_ptr> errors(plan.size());
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t b = cursor.fetch_add(1, std::memory_order_relaxed);
            if (b >= plan.size()) break;
            RandomStream stream = RandomStream::derive(
                seed.master_seed, domain, static_cast<std::uint64_t>(plan[b].index));
            try {
                fn(plan[b], stream);
            } catch (...) {
                errors[b] = std::current_exception();
            }
        }
    };
    const int nthreads = effective_threads(threads, plan.size());
    if (nthreads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads) - 1);
        for (int t = 1; t < nthreads; ++t) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

using ScalarFunctional = std::function<double(const Eigen::MatrixXcd&)>;
using MatrixFunctional = std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>;

// Mean and standard error of f over n channel draws. Deterministic specs
// short-circuit to a single evaluation with zero standard error.
ScalarEstimate mc_scalar(const ScalarFunctional& f, const FadingSpec& spec, std::int64_t n,
                         const SeedSpec& seed, int threads = 0);

MatrixEstimate mc_matrix(const MatrixFunctional& f, const FadingSpec& spec, std::int64_t n,
                         const SeedSpec& seed, int threads = 0);

}  // namespace latdpc
