// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "latdpc/rng.hpp"

namespace latdpc {

enum class FadingKind { rayleigh_iid, nakagami, deterministic };

// Channel-distribution descriptor with unit average power per entry:
//   rayleigh_iid  - entries i.i.d. circularly-symmetric CN(0, 1)
//   nakagami      - scalar (1x1) with |h| Nakagami-m, E[|h|^2] = 1
//   deterministic - every draw equals `fixed`
struct FadingSpec {
    FadingKind kind = FadingKind::rayleigh_iid;
    int tx = 1;  // M
    int rx = 1;  // N
    double m_shape = 1.0;
    Eigen::MatrixXcd fixed;

    static FadingSpec rayleigh(int tx, int rx);
    static FadingSpec nakagami(double m_shape);
    static FadingSpec deterministic(const Eigen::MatrixXcd& h);

    bool is_deterministic() const { return kind == FadingKind::deterministic; }
    void validate() const;
};

// One draw from the ensemble (N x M). Consumes the stream in a fixed
// row-major entry order; repeated calls with the same seeded stream reproduce
// the same sequence.
Eigen::MatrixXcd sample_channel(const FadingSpec& spec, RandomStream& stream);

// The 2N x 2M real block matrix [[Re H, -Im H], [Im H, Re H]]. Satisfies
// det(I + c Ht' Ht) = det(I + c H^H H)^2 for real c >= 0.
Eigen::MatrixXd real_equivalent(const Eigen::MatrixXcd& h);

// Eigenvalues of H^H H, ascending, clamped to zero when within -1e-12 of it.
Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& h);

}  // namespace latdpc
