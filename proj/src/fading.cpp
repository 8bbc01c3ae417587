// SPDX-License-Identifier: Apache-2.0
#include "latdpc/fading.hpp"

#include <cmath>

#include "latdpc/errors.hpp"

namespace latdpc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210;
constexpr double kEigClampTol = 1e-12;
}  // namespace

FadingSpec FadingSpec::rayleigh(int tx, int rx) {
    FadingSpec s;
    s.kind = FadingKind::rayleigh_iid;
    s.tx = tx;
    s.rx = rx;
    s.validate();
    return s;
}

FadingSpec FadingSpec::nakagami(double m_shape) {
    FadingSpec s;
    s.kind = FadingKind::nakagami;
    s.tx = 1;
    s.rx = 1;
    s.m_shape = m_shape;
    s.validate();
    return s;
}

FadingSpec FadingSpec::deterministic(const Eigen::MatrixXcd& h) {
    FadingSpec s;
    s.kind = FadingKind::deterministic;
    s.tx = static_cast<int>(h.cols());
    s.rx = static_cast<int>(h.rows());
    s.fixed = h;
    s.validate();
    return s;
}

void FadingSpec::validate() const {
    if (tx < 1 || rx < 1) throw ConfigError("fading: antenna counts must be positive");
    switch (kind) {
        case FadingKind::rayleigh_iid:
            break;
        case FadingKind::nakagami:
            if (tx != 1 || rx != 1) throw ConfigError("fading: nakagami requires M = N = 1");
            if (!(m_shape > 0.0)) throw ConfigError("fading: nakagami shape must be positive");
            break;
        case FadingKind::deterministic:
            if (fixed.rows() != rx || fixed.cols() != tx)
                throw ConfigError("fading: fixed matrix dimensions do not match spec");
            if (!fixed.allFinite()) throw ConfigError("fading: fixed matrix has non-finite entries");
            break;
    }
}

Eigen::MatrixXcd sample_channel(const FadingSpec& spec, RandomStream& stream) {
    spec.validate();
    switch (spec.kind) {
        case FadingKind::deterministic:
            return spec.fixed;
        case FadingKind::rayleigh_iid: {
            Eigen::MatrixXcd h(spec.rx, spec.tx);
            for (int i = 0; i < spec.rx; ++i)
                for (int j = 0; j < spec.tx; ++j) {
                    const double re = stream.normal() * kInvSqrt2;
                    const double im = stream.normal() * kInvSqrt2;
                    h(i, j) = {re, im};
                }
            return h;
        }
        case FadingKind::nakagami: {
            // |h|^2 ~ Gamma(m, 1/m) so that E[|h|^2] = 1; phase uniform.
            const double g = stream.gamma(spec.m_shape, 1.0 / spec.m_shape);
            const double mag = std::sqrt(g);
            const double phase = kTwoPi * stream.uniform01();
            Eigen::MatrixXcd h(1, 1);
            h(0, 0) = {mag * std::cos(phase), mag * std::sin(phase)};
            return h;
        }
    }
    throw ConfigError("fading: unknown kind");
}

Eigen::MatrixXd real_equivalent(const Eigen::MatrixXcd& h) {
    if (!h.allFinite()) throw NumericalError("real_equivalent: non-finite input");
    const auto n = h.rows();
    const auto m = h.cols();
    Eigen::MatrixXd r(2 * n, 2 * m);
    r.topLeftCorner(n, m) = h.real();
    r.topRightCorner(n, m) = -h.imag();
    r.bottomLeftCorner(n, m) = h.imag();
    r.bottomRightCorner(n, m) = h.real();
    return r;
}

Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& h) {
    if (!h.allFinite()) throw NumericalError("gram_eigenvalues: non-finite input");
    const Eigen::MatrixXcd gram = h.adjoint() * h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("gram_eigenvalues: eigensolver failed");
    Eigen::VectorXd ev = solver.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < 0.0) {
            if (ev[i] < -kEigClampTol * scale)
                throw NumericalError("gram_eigenvalues: significantly negative eigenvalue");
            ev[i] = 0.0;
        }
    }
    return ev;
}

}  // namespace latdpc
