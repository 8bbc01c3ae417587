// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace latdpc {

// Neumaier-compensated accumulator; deterministic given insertion order.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Pairwise (recursive halving) sum over a fixed-order vector.
double pairwise_sum(const double* data, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// log2 det of a Hermitian positive definite matrix via Cholesky.
double log2_det_hermitian(const Eigen::MatrixXcd& a);

// Inverse of a Hermitian positive definite matrix through an eigendecomposition;
// throws NumericalError when indefinite or when cond > cond_limit.
Eigen::MatrixXcd hermitian_inverse(const Eigen::MatrixXcd& a, double cond_limit = 1e12);

// c*I + rho*H^H H  (the shifted Gram matrix both inner bounds are built on).
Eigen::MatrixXcd shifted_gram(double c, double rho, const Eigen::MatrixXcd& h);

// Upper exponential integral, int_z^inf exp(-t)/t dt, adaptive quadrature to
// ~1e-10 relative accuracy. z > 0.
double e1_bar(double z);

// exp(z) * e1_bar(z) = int_0^inf exp(-u)/(z+u) du; finite for every z > 0,
// including where exp(-z) underflows.
double e1_bar_scaled(double z);

// Closed-form upper bound exp(-z) * ln(1 + 1/z) expressed in bits:
// (exp(-z)/log2(e)) * log2(1 + 1/z). z > 0.
double e1_bound(double z);

// exp(z) * e1_bound(z) = ln(1 + 1/z).
double e1_bound_scaled(double z);

}  // namespace latdpc
