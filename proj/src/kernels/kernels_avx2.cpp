// SPDX-License-Identifier: Apache-2.0
//
// AVX2 kernels. Compiled with -mavx2 only; entered solely through the
// runtime dispatcher after a CPUID check. Operation order matches the scalar
// reference exactly (div/add/floor/mul/sub, lane-striped reductions, no FMA),
// so outputs are bit-identical to kernels_scalar.cpp.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "latdpc/kernels.hpp"

namespace latdpc::kern {

namespace {

inline __m256d fold_vec(__m256d r, __m256d vq, __m256d half) {
    const __m256d u = _mm256_add_pd(_mm256_div_pd(r, vq), half);
    const __m256d f = _mm256_floor_pd(u);
    return _mm256_sub_pd(r, _mm256_mul_pd(vq, f));
}

void quantize_q_avx2(double* y, const double* x, double q, std::size_t n) {
    const __m256d vq = _mm256_set1_pd(q);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d u = _mm256_add_pd(_mm256_div_pd(v, vq), half);
        _mm256_storeu_pd(y + i, _mm256_mul_pd(vq, _mm256_floor_pd(u)));
    }
    for (; i < n; ++i) y[i] = q * std::floor(x[i] / q + 0.5);
}

void fold_q_avx2(double* y, const double* x, double q, std::size_t n) {
    const __m256d vq = _mm256_set1_pd(q);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, fold_vec(v, vq, half));
    }
    for (; i < n; ++i) y[i] = x[i] - q * std::floor(x[i] / q + 0.5);
}

void encode_fold_q_avx2(double* y, const double* t, const double* s, const double* d, double b,
                        double q, std::size_t n) {
    const __m256d vq = _mm256_set1_pd(q);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vt = _mm256_loadu_pd(t + i);
        const __m256d vs = _mm256_loadu_pd(s + i);
        const __m256d vd = _mm256_loadu_pd(d + i);
        const __m256d r = _mm256_sub_pd(_mm256_sub_pd(vt, _mm256_mul_pd(vb, vs)), vd);
        _mm256_storeu_pd(y + i, fold_vec(r, vq, half));
    }
    for (; i < n; ++i) {
        const double r = (t[i] - b * s[i]) - d[i];
        y[i] = r - q * std::floor(r / q + 0.5);
    }
}

inline double reduce_lanes(__m256d acc) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_sq_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * x[i];
    return reduce_lanes(acc) + tail;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d e = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(e, e));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double e = a[i] - b[i];
        tail += e * e;
    }
    return reduce_lanes(acc) + tail;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops = {
        "avx2",           quantize_q_avx2, fold_q_avx2,
        encode_fold_q_avx2, sum_sq_avx2,     sum_sq_diff_avx2,
    };
    return ops;
}

}  // namespace latdpc::kern

#endif  // x86_64
