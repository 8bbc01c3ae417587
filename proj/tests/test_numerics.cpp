// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "latdpc/errors.hpp"
#include "latdpc/numerics.hpp"
#include "latdpc/rng.hpp"

using namespace latdpc;

TEST_CASE("pairwise and compensated sums") {
    std::vector<double> v;
    double ref = 0;
    RandomStream s(4);
    CompensatedSum comp;
    for (int i = 0; i < 1000; ++i) {
        const double x = s.uniform(-1.0, 1.0) * std::pow(10.0, static_cast<double>(i % 7));
        v.push_back(x);
        ref += x;
        comp.add(x);
    }
    CHECK(pairwise_sum(v) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(comp.value() == doctest::Approx(ref).epsilon(1e-12));
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("db round trip is exact to 1e-12 over [-200, 200] dB") {
    for (double db = -200.0; db <= 200.0; db += 0.5) {
        const double lin = db_to_linear(db);
        CHECK(std::abs(linear_to_db(lin) - db) <= 1e-12 * std::max(1.0, std::abs(db)));
    }
}

TEST_CASE("log2_det_hermitian") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(3, 3) * 2.0;
    CHECK(log2_det_hermitian(a) == doctest::Approx(3.0).epsilon(1e-14));
    a(0, 1) = std::complex<double>(0.5, 0.25);
    a(1, 0) = std::conj(a(0, 1));
    const double expected = std::log2((a.determinant()).real());
    CHECK(log2_det_hermitian(a) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(log2_det_hermitian(-Eigen::MatrixXcd::Identity(2, 2)), NumericalError);
}

TEST_CASE("hermitian_inverse checks conditioning") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
    a(1, 1) = 1e-14;
    CHECK_THROWS_AS(hermitian_inverse(a), NumericalError);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(2, 2) * 4.0;
    CHECK(hermitian_inverse(b).isApprox(Eigen::MatrixXcd::Identity(2, 2) * 0.25, 1e-13));
    CHECK_THROWS_AS(hermitian_inverse(Eigen::MatrixXcd::Zero(2, 2)), NumericalError);
}

TEST_CASE("exponential integral values and the closed-form bound") {
    // Reference values to 1e-9: E1(1) and E1(0.1).
    CHECK(std::abs(e1_bar(1.0) - 0.21938393439552027) < 1e-9);
    CHECK(std::abs(e1_bar(0.1) - 1.8229239584193907) < 1e-9);
    CHECK(std::abs(e1_bar(10.0) - 4.156968929685321e-06) < 1e-12);
    // Bound at z=1 equals exp(-1)*ln(2).
    CHECK(std::abs(e1_bound(1.0) - 0.25499459743395351) < 1e-12);
    CHECK(e1_bar(1.0) < e1_bound(1.0));
    CHECK_THROWS_AS(e1_bar(0.0), ConfigError);
    CHECK_THROWS_AS(e1_bound(-1.0), ConfigError);
}

TEST_CASE("bound dominates the integral across the log grid") {
    // Compared in the exp(z)-scaled form so the inequality stays meaningful
    // where exp(-z) underflows.
    for (int i = 0; i < 100; ++i) {
        const double z = std::pow(10.0, -4.0 + 8.0 * i / 99.0);
        CHECK(e1_bar_scaled(z) < e1_bound_scaled(z));
    }
    CHECK(std::abs(e1_bar(1e-4) - 8.6332247045747054) < 1e-8);
}
