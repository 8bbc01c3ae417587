// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. The reductions stripe over four accumulators and combine
// as ((a0+a1)+(a2+a3))+tail so the AVX2 variant can reproduce every result
// bit for bit; see tests/test_kernels.cpp.

#include <cmath>
#include <cstddef>

#include "latdpc/kernels.hpp"

namespace latdpc::kern {

namespace {

void quantize_q_scalar(double* y, const double* x, double q, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = q * std::floor(x[i] / q + 0.5);
}

void fold_q_scalar(double* y, const double* x, double q, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] - q * std::floor(x[i] / q + 0.5);
}

void encode_fold_q_scalar(double* y, const double* t, const double* s, const double* d, double b,
                          double q, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (t[i] - b * s[i]) - d[i];
        y[i] = r - q * std::floor(r / q + 0.5);
    }
}

double sum_sq_scalar(const double* x, std::size_t n) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 += x[i] * x[i];
        a1 += x[i + 1] * x[i + 1];
        a2 += x[i + 2] * x[i + 2];
        a3 += x[i + 3] * x[i + 3];
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * x[i];
    return ((a0 + a1) + (a2 + a3)) + tail;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double e0 = a[i] - b[i];
        const double e1 = a[i + 1] - b[i + 1];
        const double e2 = a[i + 2] - b[i + 2];
        const double e3 = a[i + 3] - b[i + 3];
        a0 += e0 * e0;
        a1 += e1 * e1;
        a2 += e2 * e2;
        a3 += e3 * e3;
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double e = a[i] - b[i];
        tail += e * e;
    }
    return ((a0 + a1) + (a2 + a3)) + tail;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",           quantize_q_scalar, fold_q_scalar,
        encode_fold_q_scalar, sum_sq_scalar,    sum_sq_diff_scalar,
    };
    return ops;
}

}  // namespace latdpc::kern
