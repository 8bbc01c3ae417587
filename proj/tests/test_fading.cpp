// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>

#include "latdpc/errors.hpp"
#include "latdpc/fading.hpp"
#include "latdpc/mc.hpp"

using namespace latdpc;
using cplx = std::complex<double>;

TEST_CASE("deterministic spec is a passthrough") {
    Eigen::MatrixXcd h(1, 1);
    h(0, 0) = 1.0;
    const FadingSpec spec = FadingSpec::deterministic(h);
    RandomStream s(0);
    CHECK(sample_channel(spec, s) == h);
    CHECK(sample_channel(spec, s) == h);
}

TEST_CASE("unit average power per entry") {
    const std::int64_t n = 100000;
    SUBCASE("rayleigh 1x1") {
        const FadingSpec spec = FadingSpec::rayleigh(1, 1);
        RandomStream s = RandomStream::derive(42, stream_domain::generic, 1);
        double acc = 0;
        for (std::int64_t i = 0; i < n; ++i) acc += std::norm(sample_channel(spec, s)(0, 0));
        CHECK(acc / n == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("nakagami m=2") {
        const FadingSpec spec = FadingSpec::nakagami(2.0);
        RandomStream s = RandomStream::derive(42, stream_domain::generic, 2);
        double acc = 0;
        for (std::int64_t i = 0; i < n; ++i) acc += std::norm(sample_channel(spec, s)(0, 0));
        CHECK(acc / n == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("rayleigh 2x3 entries") {
        const FadingSpec spec = FadingSpec::rayleigh(2, 3);
        RandomStream s = RandomStream::derive(42, stream_domain::generic, 3);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(3, 2);
        const std::int64_t nn = 100000;
        for (std::int64_t i = 0; i < nn; ++i) acc += sample_channel(spec, s).cwiseAbs2();
        acc /= static_cast<double>(nn);
        // se of |h|^2 is 1/sqrt(nn) per entry
        const double tol = 3.0 / std::sqrt(static_cast<double>(nn));
        CHECK((acc.array() - 1.0).abs().maxCoeff() < tol);
    }
}

TEST_CASE("rayleigh isotropy: E[H^H H] = N I_M") {
    const int m = 2, nx = 3;
    const auto est = mc_matrix(
        [](const Eigen::MatrixXcd& h) -> Eigen::MatrixXcd { return h.adjoint() * h; },
        FadingSpec::rayleigh(m, nx), 100000, {42, 4096});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const cplx target = i == j ? cplx(nx, 0) : cplx(0, 0);
            CHECK(std::abs(est.mean(i, j) - target) < 3.0 * est.std_error(i, j) + 1e-12);
        }
}

TEST_CASE("real_equivalent block structure") {
    Eigen::MatrixXcd h1(1, 1);
    h1(0, 0) = 1.0;
    Eigen::MatrixXd r1 = real_equivalent(h1);
    CHECK(r1 == Eigen::MatrixXd::Identity(2, 2));

    Eigen::MatrixXcd hj(1, 1);
    hj(0, 0) = cplx(0, 1);
    Eigen::MatrixXd rj = real_equivalent(hj);
    CHECK(rj(0, 0) == 0.0);
    CHECK(rj(0, 1) == -1.0);
    CHECK(rj(1, 0) == 1.0);
    CHECK(rj(1, 1) == 0.0);
}

TEST_CASE("real_equivalent determinant identity") {
    RandomStream s(17);
    const FadingSpec spec = FadingSpec::rayleigh(2, 2);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::MatrixXcd h = sample_channel(spec, s);
        const Eigen::MatrixXd ht = real_equivalent(h);
        for (double c : {0.0, 0.3, 1.0, 12.5}) {
            const double lhs =
                (Eigen::MatrixXd::Identity(4, 4) + c * ht.transpose() * ht).determinant();
            const cplx det_c =
                (Eigen::MatrixXcd::Identity(2, 2) + c * h.adjoint() * h).determinant();
            CHECK(lhs == doctest::Approx(std::norm(det_c)).epsilon(1e-10));
        }
    }
}

TEST_CASE("gram eigenvalues") {
    CHECK(gram_eigenvalues(Eigen::MatrixXcd::Identity(2, 2)).isApprox(Eigen::VectorXd::Ones(2)));
    Eigen::MatrixXcd h(1, 1);
    h(0, 0) = 3.0;
    CHECK(gram_eigenvalues(h)(0) == doctest::Approx(9.0));

    // Characteristic-polynomial oracle for a random 3x2 channel: the
    // eigenvalues of the 2x2 Gram matrix solve x^2 - tr x + det = 0.
    RandomStream s(23);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::MatrixXcd g = sample_channel(FadingSpec::rayleigh(2, 3), s);
        const Eigen::MatrixXcd gram = g.adjoint() * g;
        const double tr = gram.trace().real();
        const double det = gram.determinant().real();
        const double disc = std::sqrt(tr * tr / 4.0 - det);
        const Eigen::VectorXd ev = gram_eigenvalues(g);
        CHECK(ev(0) == doctest::Approx(tr / 2.0 - disc).epsilon(1e-8));
        CHECK(ev(1) == doctest::Approx(tr / 2.0 + disc).epsilon(1e-8));
    }
}

TEST_CASE("invalid specs are rejected") {
    FadingSpec bad;
    bad.kind = FadingKind::nakagami;
    bad.tx = 2;
    bad.rx = 1;
    bad.m_shape = 2.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(FadingSpec::nakagami(0.0), ConfigError);
    CHECK_THROWS_AS(FadingSpec::rayleigh(0, 1), ConfigError);
}
