/**************************************************************************
 * test_channel.cpp
 *
 * Copyright 2026 The nbldpc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 **************************************************************************/

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include <nbldpc/channel.hpp>

using nbldpc::galois_field;
using nbldpc::symbol;

TEST_CASE("noise variance follows the energy-per-bit convention") {
    // sigma^2 = 1 / (2 R 10^(EbN0/10)); at 0 dB and R = 1/3 that is 1.5.
    const auto p = nbldpc::make_channel_params(0.0, 1.0 / 3.0, 2);
    CHECK(p.sigma2 == Catch::Approx(1.5).epsilon(1e-12));
    const auto p2 = nbldpc::make_channel_params(3.0103, 0.5, 2);
    CHECK(p2.sigma2 == Catch::Approx(0.5).epsilon(1e-4));   // doubling the SNR halves it
    CHECK_THROWS_AS(nbldpc::make_channel_params(1.0, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(nbldpc::make_channel_params(1.0, 1.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(nbldpc::make_channel_params(1.0, 0.5, 0), std::invalid_argument);
}

TEST_CASE("sweep endpoints are inclusive and step through evenly") {
    const auto pts = nbldpc::ebn0_sweep(1.0, 3.0, 0.5, 0.5, 2);
    REQUIRE(pts.size() == 5);
    CHECK(pts.front().ebn0_db == Catch::Approx(1.0));
    CHECK(pts.back().ebn0_db == Catch::Approx(3.0));
    // A stop that fractionally undershoots still lands on the endpoint.
    const auto pts2 = nbldpc::ebn0_sweep(0.0, 2.9999999, 1.0, 0.5, 2);
    CHECK(pts2.size() == 4);
    const auto one = nbldpc::ebn0_sweep(2.0, 2.0, 0.5, 0.5, 2);
    CHECK(one.size() == 1);
    CHECK_THROWS_AS(nbldpc::ebn0_sweep(3.0, 1.0, 0.5, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(nbldpc::ebn0_sweep(1.0, 3.0, 0.0, 0.5, 2), std::invalid_argument);
    // Non-finite bounds would otherwise defeat the termination test.
    const double nan = std::nan("");
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(nbldpc::ebn0_sweep(nan, 3.0, 0.5, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(nbldpc::ebn0_sweep(1.0, inf, 0.5, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(nbldpc::ebn0_sweep(1.0, 3.0, nan, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(nbldpc::make_channel_params(nan, 0.5, 2), std::invalid_argument);
}

TEST_CASE("modulation maps symbols to antipodal bits, high bit first") {
    galois_field f8(8);
    const auto amps = nbldpc::modulate(f8, std::vector<symbol>{5, 0});
    // 5 = 101b: bits 1,0,1 -> -1,+1,-1; 0 -> +1,+1,+1.
    REQUIRE(amps.size() == 6);
    CHECK(amps[0] == -1.0);
    CHECK(amps[1] == 1.0);
    CHECK(amps[2] == -1.0);
    CHECK(amps[3] == 1.0);
    CHECK(amps[4] == 1.0);
    CHECK(amps[5] == 1.0);

    galois_field f9(9);
    CHECK_THROWS_AS(nbldpc::modulate(f9, std::vector<symbol>{1}), std::invalid_argument);
}

TEST_CASE("received samples are deterministic in the seed") {
    const auto p = nbldpc::make_channel_params(2.0, 0.5, 2);
    const std::vector<double> amps = {1.0, -1.0, 1.0, 1.0};
    const auto a = nbldpc::transmit(amps, p, 77);
    const auto b = nbldpc::transmit(amps, p, 77);
    const auto c = nbldpc::transmit(amps, p, 78);
    CHECK(a == b);
    CHECK(a != c);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(a[i] != amps[i]);
}

TEST_CASE("symbol costs accumulate per-bit squared distances, anchored at zero") {
    galois_field f4(4);
    nbldpc::channel_params p{};
    p.sigma2 = 0.5;
    // Noiseless +1,+1 observation: symbol b1 b0 costs 2*(b1+b0) with this
    // variance, so the table reads 0, 4, 4, 8.
    const auto tables = nbldpc::symbol_costs(f4, std::vector<double>{1.0, 1.0}, p);
    REQUIRE(tables.size() == 1);
    CHECK(tables[0][0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(tables[0][1] == Catch::Approx(4.0).epsilon(1e-12));
    CHECK(tables[0][2] == Catch::Approx(4.0).epsilon(1e-12));
    CHECK(tables[0][3] == Catch::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("every cost table is anchored with a zero minimum") {
    galois_field f8(8);
    const auto p = nbldpc::make_channel_params(1.5, 0.5, 3);
    const auto amps = nbldpc::modulate(f8, std::vector<symbol>{3, 6, 1, 0});
    const auto rx = nbldpc::transmit(amps, p, 5);
    const auto tables = nbldpc::symbol_costs(f8, rx, p);
    REQUIRE(tables.size() == 4);
    for (const auto& t : tables) {
        double mn = t[0];
        for (double v : t) {
            mn = std::min(mn, v);
            CHECK(v >= 0.0);
        }
        CHECK(mn == 0.0);
    }
}

TEST_CASE("cost computation validates its geometry") {
    galois_field f4(4);
    const auto p = nbldpc::make_channel_params(1.0, 0.5, 2);
    // 3 samples is not a whole number of 2-bit symbols.
    CHECK_THROWS_AS(nbldpc::symbol_costs(f4, std::vector<double>{1.0, 1.0, 1.0}, p),
                    std::invalid_argument);
    nbldpc::channel_params bad{};
    bad.sigma2 = 0.0;
    CHECK_THROWS_AS(nbldpc::symbol_costs(f4, std::vector<double>{1.0, 1.0}, bad),
                    std::invalid_argument);
}
