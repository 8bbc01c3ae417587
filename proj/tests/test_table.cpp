// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <nlohmann/json.hpp>
#include <sstream>

#include "latdpc/rng.hpp"
#include "latdpc/table.hpp"

using namespace latdpc;

TEST_CASE("format_g17 round-trips doubles") {
    RandomStream s(19);
    for (int i = 0; i < 1000; ++i) {
        const double x = s.normal() * std::pow(10.0, static_cast<double>(static_cast<int>(s.next_u64() % 41) - 20));
        CHECK(std::strtod(format_g17(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("csv layout") {
    ResultTable t;
    t.add_meta("seed", "42");
    t.header = {"a", "b"};
    t.add_row({1.0, 0.5});
    t.add_row({2.0, 0.25});
    std::ostringstream os;
    t.write_csv(os);
    CHECK(os.str() == "# seed: 42\na,b\n1,0.5\n2,0.25\n");
}

TEST_CASE("csv with row labels") {
    ResultTable t;
    t.header = {"measured", "pass"};
    t.row_labels = {"alpha", "beta"};
    t.add_row({1.5, 1.0});
    t.add_row({2.5, 0.0});
    std::ostringstream os;
    t.write_csv(os);
    CHECK(os.str() == "check,measured,pass\nalpha,1.5,1\nbeta,2.5,0\n");
}

TEST_CASE("json structure parses back") {
    ResultTable t;
    t.add_meta("seed", "7");
    t.header = {"x", "y"};
    t.add_row({3.0, -0.125});
    std::ostringstream os;
    t.write_json(os);
    const auto j = nlohmann::json::parse(os.str());
    CHECK(j["metadata"]["seed"] == "7");
    CHECK(j["metadata"]["columns"][1] == "y");
    CHECK(j["rows"][0][0] == 3.0);
    CHECK(j["rows"][0][1] == -0.125);
}

TEST_CASE("row width mismatch is rejected") {
    ResultTable t;
    t.header = {"x"};
    t.add_row({1.0, 2.0});
    std::ostringstream os;
    CHECK_THROWS(t.write_csv(os));
}
