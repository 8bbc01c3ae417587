// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "latdpc/bounds.hpp"
#include "latdpc/numerics.hpp"

using namespace latdpc;

namespace {

const SeedSpec kSeed{42, 4096};

PowerConfig cfg_of(double px, double ps, double pw, int m, int n) {
    PowerConfig c;
    c.px = px;
    c.ps = ps;
    c.pw = pw;
    c.m = m;
    c.n = n;
    return c;
}

FadingSpec scalar_one() {
    return FadingSpec::deterministic(Eigen::MatrixXcd::Identity(1, 1));
}

}  // namespace

TEST_CASE("outer bound closed cases") {
    CHECK(outer_bound(cfg_of(1, 0, 1, 1, 1), scalar_one(), 10, kSeed).mean ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(outer_bound(cfg_of(0, 0, 1, 1, 1), scalar_one(), 10, kSeed).mean == 0.0);
    // Rayleigh scalar at rho = 10: log2(e) e^{0.1} E1(0.1) = 2.9065148084148050
    const auto est = outer_bound(cfg_of(10, 0, 1, 1, 1), FadingSpec::rayleigh(1, 1), 100000, kSeed);
    CHECK(std::abs(est.mean - 2.9065148084148050) < 4.0 * est.std_error);
}

TEST_CASE("dpc inner closed cases and the Ps=0 collapse") {
    CHECK(dpc_inner(cfg_of(1, 1, 1, 1, 1), scalar_one(), 10, kSeed).mean ==
          doctest::Approx(0.5849625007211562).epsilon(1e-12));
    // Ps = 0 collapses to the outer bound bit for bit on a shared seed.
    const auto spec = FadingSpec::rayleigh(2, 2);
    const auto cfg = cfg_of(25, 0, 1, 2, 2);
    CHECK(dpc_inner(cfg, spec, 20000, kSeed).mean == outer_bound(cfg, spec, 20000, kSeed).mean);
    // Degenerate zero-power case.
    CHECK(dpc_inner(cfg_of(0, 5, 1, 1, 1), FadingSpec::rayleigh(1, 1), 100, kSeed).mean == 0.0);
}

TEST_CASE("lattice inner closed cases") {
    CHECK(lattice_inner(cfg_of(1, 1, 1, 1, 1), scalar_one(), 10, kSeed).mean ==
          doctest::Approx(0.5849625007211562).epsilon(1e-9));
    // Rayleigh scalar, rho = 10, Ps = 0: -log2(0.20146425447084517) = 2.3114042088505640
    const auto est = lattice_inner(cfg_of(10, 0, 1, 1, 1), FadingSpec::rayleigh(1, 1), 100000, kSeed);
    CHECK(std::abs(est.mean - 2.3114042088505640) < std::max(4.0 * est.std_error, 0.01));
    CHECK(lattice_inner(cfg_of(0, 0, 1, 1, 1), FadingSpec::rayleigh(1, 1), 100, kSeed).mean == 0.0);
}

TEST_CASE("ordering chain on shared samples") {
    for (auto [m, n, px, ps] : {std::tuple{1, 1, 10.0, 3.0}, {2, 2, 100.0, 1e8}, {2, 3, 5.0, 0.5}}) {
        const auto spec = FadingSpec::rayleigh(m, n);
        const auto cfg = cfg_of(px, ps, 1.0, m, n);
        const double outer = outer_bound(cfg, spec, 20000, kSeed).mean;
        const double dpc = dpc_inner(cfg, spec, 20000, kSeed).mean;
        const double lat = lattice_inner(cfg, spec, 20000, kSeed).mean;
        CHECK(lat <= dpc);
        CHECK(dpc <= outer);
    }
}

TEST_CASE("monotonicity in Ps and Px on shared seeds") {
    const auto spec = FadingSpec::rayleigh(1, 1);
    double prev_dpc = 1e300, prev_lat = 1e300;
    for (double ps : {0.0, 1.0, 10.0, 1000.0}) {
        const double dpc = dpc_inner(cfg_of(10, ps, 1, 1, 1), spec, 20000, kSeed).mean;
        const double lat = lattice_inner(cfg_of(10, ps, 1, 1, 1), spec, 20000, kSeed).mean;
        CHECK(dpc <= prev_dpc + 1e-12);
        CHECK(lat <= prev_lat + 1e-12);
        prev_dpc = dpc;
        prev_lat = lat;
    }
    double prev = -1.0;
    for (double px : {1.0, 5.0, 50.0}) {
        const double dpc = dpc_inner(cfg_of(px, 2.0, 1, 1, 1), spec, 20000, kSeed).mean;
        CHECK(dpc >= prev - 1e-12);
        prev = dpc;
    }
}

TEST_CASE("constant DPC gap guarantee") {
    CHECK(dpc_constant_gap(cfg_of(1, 1, 1, 1, 1)) == 1.0);
    CHECK(dpc_constant_gap(cfg_of(1, 1, 1, 4, 4)) == 4.0);
    // Empirical: outer - dpc <= M + 3 se on a hard configuration.
    const auto spec = FadingSpec::rayleigh(2, 2);
    const auto cfg = cfg_of(200, 1e8, 1, 2, 2);
    const auto o = outer_bound(cfg, spec, 100000, kSeed);
    const auto d = dpc_inner(cfg, spec, 100000, kSeed);
    CHECK(o.mean - d.mean <= 2.0 + 3.0 * (o.std_error + d.std_error));
}

TEST_CASE("gap_general") {
    CHECK(gap_general(cfg_of(2, 0, 1, 2, 2), FadingSpec::deterministic(Eigen::MatrixXcd::Identity(2, 2)),
                      10, kSeed)
              .mean == doctest::Approx(2.0).epsilon(1e-12));
    const auto g24 = gap_general(cfg_of(20, 0, 1, 2, 4), FadingSpec::rayleigh(2, 4), 100000, kSeed);
    CHECK(std::abs(g24.mean - 2.6438561897747247) < std::max(4.0 * g24.std_error, 0.05));
    const auto g12 = gap_general(cfg_of(10, 0, 1, 1, 2), FadingSpec::rayleigh(1, 2), 100000, kSeed);
    CHECK(std::abs(g12.mean - 1.5849625007211562) < std::max(4.0 * g12.std_error, 0.05));
    // rho < 1 is rejected unless explicitly allowed.
    CHECK_THROWS_AS(gap_general(cfg_of(0.5, 0, 1, 1, 2), FadingSpec::rayleigh(1, 2), 100, kSeed),
                    ConfigError);
    CHECK_NOTHROW(gap_general(cfg_of(0.5, 0, 1, 1, 2), FadingSpec::rayleigh(1, 2), 20000, kSeed, 0, true));
    // N < M rejected; divergent inverse moments are detected.
    CHECK_THROWS_AS(gap_general(cfg_of(4, 0, 1, 2, 1), FadingSpec::rayleigh(2, 1), 100, kSeed),
                    ConfigError);
    CHECK_THROWS_AS(gap_general(cfg_of(1, 0, 1, 1, 1), FadingSpec::rayleigh(1, 1), 100000, kSeed),
                    NumericalError);
}

TEST_CASE("closed-form gap expressions") {
    CHECK(gap_rayleigh_mimo(1, 2) == doctest::Approx(1.5849625007211562).epsilon(1e-12));
    CHECK(gap_rayleigh_mimo(2, 4) == doctest::Approx(2.6438561897747247).epsilon(1e-12));
    CHECK(gap_rayleigh_mimo(1, 8) == doctest::Approx(0.36257007938470823).epsilon(1e-12));
    CHECK(gap_rayleigh_mimo(4, 40) == doctest::Approx(0.75050801270308532).epsilon(1e-12));
    CHECK_THROWS_AS(gap_rayleigh_mimo(2, 2), ConfigError);
    // Strictly decreasing in N for fixed M.
    for (int m : {1, 2, 3, 4}) {
        double prev = 1e300;
        for (int n = m + 1; n <= 64; ++n) {
            const double g = gap_rayleigh_mimo(m, n);
            CHECK(g < prev);
            prev = g;
        }
    }

    CHECK(gap_nakagami(2.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(gap_nakagami(3.0) == doctest::Approx(1.5849625007211562).epsilon(1e-12));
    CHECK(gap_nakagami(1e9) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(gap_nakagami(1.0), ConfigError);

    CHECK(gap_rayleigh_scalar(cfg_of(100, 1, 1, 1, 1)) ==
          doctest::Approx(4.2151346950909301).epsilon(1e-12));
    CHECK(gap_rayleigh_scalar(cfg_of(1, 1, 1, 1, 1)) == doctest::Approx(1.48).epsilon(1e-12));
    CHECK(gap_rayleigh_scalar(cfg_of(1, 1e8, 1, 1, 1)) ==
          doctest::Approx(6.2120208464278125).epsilon(1e-12));
    CHECK_THROWS_AS(gap_rayleigh_scalar(cfg_of(1, 1, 1, 2, 2)), ConfigError);
}

TEST_CASE("high-SNR scalar gap") {
    CHECK(high_snr_scalar_gap(cfg_of(1, 0, 1, 1, 1), scalar_one(), 10, kSeed).mean ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(high_snr_scalar_gap(cfg_of(1000, 0, 1, 1, 1), scalar_one(), 10, kSeed).mean ==
          doctest::Approx(std::log2(1.001)).epsilon(1e-12));
    const auto spec = FadingSpec::rayleigh(1, 1);
    const double hi = high_snr_scalar_gap(cfg_of(1000, 0, 1, 1, 1), spec, 50000, kSeed).mean;
    const double lo = high_snr_scalar_gap(cfg_of(10, 0, 1, 1, 1), spec, 50000, kSeed).mean;
    CHECK(hi < lo);
}

TEST_CASE("closed-form moments") {
    CHECK(wishart_inverse_mean(2, 4) == Eigen::MatrixXd::Identity(2, 2) * 0.5);
    CHECK(wishart_inverse_mean(1, 2) == Eigen::MatrixXd::Identity(1, 1));
    CHECK(wishart_inverse_mean(3, 4) == Eigen::MatrixXd::Identity(3, 3));
    CHECK_THROWS_AS(wishart_inverse_mean(2, 2), ConfigError);

    CHECK(nakagami_inverse_moment(2.0) == doctest::Approx(2.0));
    CHECK(nakagami_inverse_moment(11.0) == doctest::Approx(1.1));
    CHECK_THROWS_AS(nakagami_inverse_moment(1.0), ConfigError);
    const auto est = mc_scalar([](const Eigen::MatrixXcd& h) { return 1.0 / std::norm(h(0, 0)); },
                               FadingSpec::nakagami(2.0), 100000, kSeed);
    CHECK(std::abs(est.mean - 2.0) < 0.02 * 2.0);
}

TEST_CASE("complex rate equals the sum of the two real sub-channel rates") {
    RandomStream s(31);
    const Eigen::MatrixXcd h = sample_channel(FadingSpec::rayleigh(2, 3), s);
    const double rho = 7.5;
    const double complex_rate =
        outer_bound(cfg_of(rho * 2, 0, 1, 2, 3), FadingSpec::deterministic(h), 10, kSeed).mean;
    // Real-equivalent channel at the same per-antenna SNR coefficient. Real
    // signaling halves the log-det; each of the two sub-channel codewords
    // carries half of that, and the two together give the complex rate.
    const Eigen::MatrixXcd ht = real_equivalent(h).cast<std::complex<double>>();
    const double real_logdet =
        outer_bound(cfg_of(rho * 4, 0, 1, 4, 6), FadingSpec::deterministic(ht), 10, kSeed).mean;
    const double sub_rate = 0.25 * real_logdet;
    CHECK(sub_rate + sub_rate == doctest::Approx(complex_rate).epsilon(1e-10));
}

TEST_CASE("dimension mismatch is a configuration error") {
    CHECK_THROWS_AS(outer_bound(cfg_of(1, 0, 1, 2, 2), FadingSpec::rayleigh(1, 1), 10, kSeed),
                    ConfigError);
    CHECK_THROWS_AS(cfg_of(1, 0, 0, 1, 1).validate(), ConfigError);
}
