// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "latdpc/errors.hpp"
#include "latdpc/lattice.hpp"
#include "latdpc/numerics.hpp"

using namespace latdpc;

namespace {

Eigen::VectorXd vec1(double a) {
    Eigen::VectorXd v(1);
    v << a;
    return v;
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

Eigen::MatrixXi gen_row(std::initializer_list<int> vals) {
    Eigen::MatrixXi g(1, static_cast<Eigen::Index>(vals.size()));
    int j = 0;
    for (int v : vals) g(0, j++) = v;
    return g;
}

constexpr double kSphereBound = 0.058549831524319168;  // 1/(2*pi*e)

}  // namespace

TEST_CASE("scaled-integer quantize and fold") {
    const Lattice lat = Lattice::scaled_integer(1, 4.0);
    CHECK(lat.quantize(vec1(5.0))(0) == 4.0);
    CHECK(lat.quantize(vec1(2.0))(0) == 4.0);  // tie rounds up
    CHECK(lat.fold(vec1(5.0))(0) == 1.0);
    CHECK(lat.fold(vec1(-2.0))(0) == -2.0);
    const Lattice z2 = Lattice::scaled_integer(2, 1.0);
    CHECK(z2.quantize(vec2(0.4, -0.6)) == vec2(0.0, -1.0));
}

TEST_CASE("modulo distributive law") {
    const Lattice lat = Lattice::scaled_integer(3, 2.5);
    RandomStream s(9);
    for (int rep = 0; rep < 1000; ++rep) {
        Eigen::VectorXd a(3), b(3);
        for (int j = 0; j < 3; ++j) {
            a[j] = s.uniform(-50.0, 50.0);
            b[j] = s.uniform(-50.0, 50.0);
        }
        const Eigen::VectorXd lhs = lat.fold(a + lat.fold(b));
        const Eigen::VectorXd rhs = lat.fold(a + b);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("second moments") {
    CHECK(Lattice::scaled_integer(3, 4.0).second_moment() == doctest::Approx(16.0 / 12.0));
    CHECK(Lattice::scaled_integer(5, 1.0).second_moment() == doctest::Approx(1.0 / 12.0));
    CHECK_THROWS_AS(Lattice::construction_a(2, 5, gen_row({1, 2}), 1.0).second_moment(), ConfigError);

    // Construction-A p=5, G=[1 2]: the lattice is a rotated sqrt(5) Z^2, so
    // the exact second moment is 5/12. Monte Carlo against a fine-grid
    // integration of one fundamental cell.
    const Lattice a5 = Lattice::construction_a(2, 5, gen_row({1, 2}), 1.0);
    RandomStream s = RandomStream::derive(11, stream_domain::lattice_mc, 0);
    const double mc = a5.second_moment_mc(100000, s);
    const int g = 250;
    double grid = 0.0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            grid += a5.fold(vec2((i + 0.5) * 5.0 / g, (j + 0.5) * 5.0 / g)).squaredNorm();
    grid /= static_cast<double>(g) * g * 2.0;
    CHECK(mc == doctest::Approx(grid).epsilon(0.01));
    CHECK(grid == doctest::Approx(5.0 / 12.0).epsilon(1e-3));
}

TEST_CASE("normalized second moment") {
    CHECK(Lattice::scaled_integer(2, 4.0).normalized_second_moment() == doctest::Approx(1.0 / 12.0));
    CHECK(Lattice::scaled_integer(7, 0.25).normalized_second_moment() == doctest::Approx(1.0 / 12.0));
    CHECK(Lattice::scaled_integer(2, 4.0).normalized_second_moment() > kSphereBound);
    // The body-centered cubic lattice (construction A, p=2, G=[1 1 1]) beats
    // the cubic lattice: G ~ 0.0785 < 1/12.
    const Lattice bcc = Lattice::construction_a(3, 2, gen_row({1, 1, 1}), 1.0);
    const double g = bcc.normalized_second_moment(200000, 5);
    CHECK(g < 1.0 / 12.0);
    CHECK(g > kSphereBound);
    CHECK(g == doctest::Approx(0.078543).epsilon(0.01));
}

TEST_CASE("code rate and nesting") {
    CHECK(NestedLatticeCode(Lattice::scaled_integer(1, 4.0), Lattice::scaled_integer(1, 1.0))
              .rate_bits_per_dim() == doctest::Approx(2.0));
    CHECK(NestedLatticeCode(Lattice::scaled_integer(2, 4.0), Lattice::scaled_integer(2, 1.0))
              .rate_bits_per_dim() == doctest::Approx(2.0));
    for (int b = 1; b <= 4; ++b) {
        const double q = 3.7;
        CHECK(NestedLatticeCode(Lattice::scaled_integer(2, q),
                                Lattice::scaled_integer(2, q / (1 << b)))
                  .rate_bits_per_dim() == doctest::Approx(static_cast<double>(b)));
    }
    CHECK_THROWS_AS(NestedLatticeCode(Lattice::scaled_integer(1, 4.0), Lattice::scaled_integer(1, 3.0)),
                    ConfigError);
    // Coarse must be nested in fine, not merely commensurate.
    CHECK_THROWS_AS(NestedLatticeCode(Lattice::scaled_integer(1, 1.0), Lattice::scaled_integer(1, 4.0)),
                    ConfigError);
}

TEST_CASE("codebook enumeration") {
    const NestedLatticeCode c1(Lattice::scaled_integer(1, 4.0), Lattice::scaled_integer(1, 1.0));
    std::multiset<double> pts;
    for (const auto& t : c1.codebook()) pts.insert(t(0));
    CHECK(pts == std::multiset<double>{-2.0, -1.0, 0.0, 1.0});

    const NestedLatticeCode c2(Lattice::scaled_integer(2, 4.0), Lattice::scaled_integer(2, 1.0));
    CHECK(c2.codebook().size() == 16);
    for (const auto& t : c2.codebook()) CHECK((c2.coarse().fold(t) - t).cwiseAbs().maxCoeff() == 0.0);

    // Construction-A fine over a 2p Z^n coarse: p^k * 2^n points.
    const Lattice fine = Lattice::construction_a(2, 3, gen_row({1, 1}), 1.0);
    const NestedLatticeCode c3(Lattice::scaled_integer(2, 6.0), fine);
    CHECK(c3.codebook().size() == 3 * 4);
    CHECK(c3.codebook_size() == 12);

    const NestedLatticeCode capped(Lattice::scaled_integer(2, 4.0), Lattice::scaled_integer(2, 1.0), 8);
    CHECK_THROWS_AS(capped.codebook(), ResourceError);
}

TEST_CASE("dither statistics") {
    const double q = 4.0;
    const Lattice lat = Lattice::scaled_integer(2, q);
    RandomStream s = RandomStream::derive(42, stream_domain::lattice_mc, 1);
    const std::int64_t n = 100000;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(2, 2);
    bool member = true;
    for (std::int64_t i = 0; i < n; ++i) {
        const Eigen::VectorXd d = lat.sample_dither(s);
        mean += d;
        corr += d * d.transpose();
        if ((lat.fold(d) - d).cwiseAbs().maxCoeff() != 0.0) member = false;
    }
    mean /= static_cast<double>(n);
    corr /= static_cast<double>(n);
    const double sigma2 = q * q / 12.0;
    const double se_mean = std::sqrt(sigma2 / static_cast<double>(n));
    CHECK(member);
    CHECK(mean.cwiseAbs().maxCoeff() < 3.0 * se_mean);
    CHECK(corr(0, 0) == doctest::Approx(sigma2).epsilon(0.02));
    CHECK(corr(1, 1) == doctest::Approx(sigma2).epsilon(0.02));
    // Whiteness: off-diagonal correlation within 3 standard errors of zero.
    const double se_off = sigma2 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(corr(0, 1)) < 3.0 * se_off);
}

TEST_CASE("crypto lemma: mod(g - d) is uniform over the cell") {
    const double q = 4.0;
    const Lattice lat = Lattice::scaled_integer(1, q);
    RandomStream s = RandomStream::derive(42, stream_domain::lattice_mc, 2);
    const Eigen::VectorXd g = vec1(1.234);
    const std::int64_t n = 100000;
    std::vector<std::int64_t> hist(16, 0);
    for (std::int64_t i = 0; i < n; ++i) {
        const double v = lat.fold(g - lat.sample_dither(s))(0);
        int bin = static_cast<int>((v / q + 0.5) * 16.0);
        bin = std::clamp(bin, 0, 15);
        ++hist[static_cast<std::size_t>(bin)];
    }
    const double expect = static_cast<double>(n) / 16.0;
    double chi2 = 0.0;
    for (auto h : hist) chi2 += (h - expect) * (h - expect) / expect;
    CHECK(chi2 < 30.577914166892494);  // chi-square(15) upper 0.01 quantile
}

TEST_CASE("construction-A quantizer agrees with brute force") {
    const Lattice lat = Lattice::construction_a(2, 5, gen_row({1, 2}), 1.0);
    RandomStream s(77);
    for (int rep = 0; rep < 200; ++rep) {
        const Eigen::VectorXd y = vec2(s.uniform(-12.0, 12.0), s.uniform(-12.0, 12.0));
        const Eigen::VectorXd fast = lat.quantize(y);
        // Brute force over all lattice points in a generous box.
        double best = 1e300;
        Eigen::VectorXd best_pt = Eigen::VectorXd::Zero(2);
        for (int a = -20; a <= 20; ++a)
            for (int b = -20; b <= 20; ++b) {
                if (((b - 2 * a) % 5 + 5) % 5 != 0) continue;  // row span of [1 2] mod 5
                const Eigen::VectorXd pt = vec2(a, b);
                const double d = (y - pt).squaredNorm();
                if (d < best - 1e-12) {
                    best = d;
                    best_pt = pt;
                }
            }
        CHECK((y - fast).squaredNorm() == doctest::Approx(best).epsilon(1e-12));
        CHECK((lat.fold(y) - (y - best_pt)).norm() < 1e-9);
    }
}

TEST_CASE("lattice validation") {
    CHECK_THROWS_AS(Lattice::scaled_integer(0, 1.0), ConfigError);
    CHECK_THROWS_AS(Lattice::scaled_integer(1, 0.0), ConfigError);
    CHECK_THROWS_AS(Lattice::construction_a(2, 4, gen_row({1, 2}), 1.0), ConfigError);  // p not prime
    CHECK_THROWS_AS(Lattice::construction_a(13, 2, Eigen::MatrixXi::Ones(1, 13), 1.0), ResourceError);
    Eigen::MatrixXi rank_def(2, 2);
    rank_def << 1, 2, 2, 4;
    CHECK_THROWS_AS(Lattice::construction_a(2, 5, rank_def, 1.0), ConfigError);
}
