// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "latdpc/rng.hpp"

using namespace latdpc;

TEST_CASE("streams are reproducible and derivation separates domains") {
    RandomStream a = RandomStream::derive(42, stream_domain::mc_block, 3);
    RandomStream b = RandomStream::derive(42, stream_domain::mc_block, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RandomStream c = RandomStream::derive(42, stream_domain::mc_block, 4);
    RandomStream d = RandomStream::derive(42, stream_domain::dpc_frame, 3);
    RandomStream e = RandomStream::derive(43, stream_domain::mc_block, 3);
    RandomStream a2 = RandomStream::derive(42, stream_domain::mc_block, 3);
    bool all_equal_c = true, all_equal_d = true, all_equal_e = true;
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t ref = a2.next_u64();
        all_equal_c &= (c.next_u64() == ref);
        all_equal_d &= (d.next_u64() == ref);
        all_equal_e &= (e.next_u64() == ref);
    }
    CHECK(!all_equal_c);
    CHECK(!all_equal_d);
    CHECK(!all_equal_e);
}

TEST_CASE("uniform01 stays in [0,1) and uniform_index in range") {
    RandomStream s(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(s.uniform_index(7) < 7);
    }
    const double v = s.uniform01_pos();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
}

TEST_CASE("normal moments") {
    RandomStream s(2);
    const int n = 200000;
    double sum = 0, sum2 = 0, sum4 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        sum += x;
        sum2 += x * x;
        sum4 += x * x * x * x;
    }
    CHECK(std::abs(sum / n) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("gamma moments for shapes above and below one") {
    RandomStream s(3);
    for (double shape : {0.7, 1.0, 2.0, 5.5}) {
        const double scale = 1.0 / shape;
        const int n = 200000;
        double sum = 0, sum2 = 0;
        for (int i = 0; i < n; ++i) {
            const double x = s.gamma(shape, scale);
            CHECK(x > 0.0);
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        CHECK(mean == doctest::Approx(1.0).epsilon(0.02));          // shape*scale
        CHECK(var == doctest::Approx(1.0 / shape).epsilon(0.05));   // shape*scale^2
    }
}
