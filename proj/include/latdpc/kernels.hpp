// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>

namespace latdpc::kern {

// Per-coordinate kernels on contiguous double arrays. These sit in the inner
// loops of the lattice transceiver (quantize / modulo-fold / norm
// accumulation over frames of up to ~10^4 coordinates, millions of frames per
// sweep). Each kernel has a scalar reference and an AVX2 variant selected at
// runtime. The variants are bit-identical by construction: identical IEEE
// operation order per element, reductions striped over four accumulators in
// both implementations, and no FMA contraction (enforced by build flags).

struct Ops {
    const char* name;

    // y[i] = q * floor(x[i]/q + 1/2)  (nearest point of qZ, ties rounded up)
    void (*quantize_q)(double* y, const double* x, double q, std::size_t n);

    // y[i] = x[i] - q * floor(x[i]/q + 1/2)  (fold into [-q/2, q/2))
    void (*fold_q)(double* y, const double* x, double q, std::size_t n);

    // y[i] = fold of (t[i] - b*s[i] - d[i]) into [-q/2, q/2)
    void (*encode_fold_q)(double* y, const double* t, const double* s, const double* d, double b,
                          double q, std::size_t n);

    // sum of x[i]^2
    double (*sum_sq)(const double* x, std::size_t n);

    // sum of (a[i]-b[i])^2
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif

bool have_avx2();

// Active kernel set; auto-selects the widest supported variant on first use.
const Ops& active();

// Force a variant ("scalar", "avx2", "auto"); returns false if unavailable.
bool select(const std::string& name);

}  // namespace latdpc::kern
