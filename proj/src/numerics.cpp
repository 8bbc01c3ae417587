// SPDX-License-Identifier: Apache-2.0
#include "latdpc/numerics.hpp"

#include <cmath>

#include "latdpc/errors.hpp"

namespace latdpc {

double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = data[0];
        for (std::size_t i = 1; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double log2_det_hermitian(const Eigen::MatrixXcd& a) {
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericalError("log2_det_hermitian: matrix not positive definite");
    double acc = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < a.rows(); ++i) acc += std::log2(l(i, i).real());
    return 2.0 * acc;
}

Eigen::MatrixXcd hermitian_inverse(const Eigen::MatrixXcd& a, double cond_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    if (es.info() != Eigen::Success) throw NumericalError("hermitian_inverse: eigensolver failed");
    const Eigen::VectorXd ev = es.eigenvalues();
    const double ev_min = ev.minCoeff();
    const double ev_max = ev.maxCoeff();
    if (!(ev_min > 0.0)) throw NumericalError("hermitian_inverse: matrix not positive definite");
    if (ev_max / ev_min > cond_limit)
        throw NumericalError("hermitian_inverse: condition number exceeds limit");
    return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd shifted_gram(double c, double rho, const Eigen::MatrixXcd& h) {
    Eigen::MatrixXcd a = rho * (h.adjoint() * h);
    a.diagonal().array() += c;
    return a;
}

namespace {

// Integrand of the shifted form exp(z) int_z^inf e^{-t}/t dt.
struct E1Shifted {
    double z;
    double operator()(double u) const { return std::exp(-u) / (z + u); }
};

double adaptive_simpson(const E1Shifted& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_panel(const E1Shifted& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 52);
}

}  // namespace

double e1_bar_scaled(double z) {
    if (!(z > 0.0)) throw ConfigError("e1_bar: z must be positive");
    const E1Shifted f{z};
    // Beyond u = 60 the tail contributes less than e^-60 relative weight.
    // Panels double in width so the quasi-singular region near u = 0 (small
    // z) is resolved before the flat exponential tail. Two passes: a coarse
    // value fixes the absolute tolerance of the refined one at 1e-11 relative.
    const double u_end = 60.0;
    double total = 1.0;
    for (double tol : {1e-6 * total, 0.0}) {
        if (tol == 0.0) tol = 1e-11 * std::abs(total);
        double acc = 0.0;
        double lo = 0.0;
        double width = std::min(z, 1.0 / 16.0);
        while (lo < u_end) {
            const double hi = std::min(u_end, lo + width);
            acc += integrate_panel(f, lo, hi, tol / 32.0);
            lo = hi;
            width *= 2.0;
        }
        total = acc;
    }
    return total;
}

double e1_bar(double z) { return std::exp(-z) * e1_bar_scaled(z); }

double e1_bound_scaled(double z) {
    if (!(z > 0.0)) throw ConfigError("e1_bound: z must be positive");
    return std::log1p(1.0 / z);
}

double e1_bound(double z) { return std::exp(-z) * e1_bound_scaled(z); }

}  // namespace latdpc
