/**************************************************************************
 * test_trellis.cpp
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
#include <vector>

#include <nbldpc/rng.hpp>
#include <nbldpc/trellis.hpp>

using nbldpc::cost_table;
using nbldpc::galois_field;
using nbldpc::infinite_cost;
using nbldpc::prob_table;
using nbldpc::symbol;

namespace {

std::vector<symbol> random_coeffs(const galois_field& gf, int d, nbldpc::rng64& rng) {
    std::vector<symbol> h(d);
    for (auto& c : h) c = symbol(1 + rng.next_below(std::uint64_t(gf.order() - 1)));
    return h;
}

std::vector<cost_table> random_int_costs(int d, int q, nbldpc::rng64& rng,
                                         int lo = 0, int hi = 99) {
    std::vector<cost_table> g(d, cost_table(q));
    for (auto& t : g)
        for (auto& v : t) v = double(lo + int(rng.next_below(std::uint64_t(hi - lo + 1))));
    return g;
}

bool tables_equal(const std::vector<cost_table>& a, const std::vector<cost_table>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t x = 0; x < a[i].size(); ++x) {
            const bool ia = std::isinf(a[i][x]), ib = std::isinf(b[i][x]);
            if (ia != ib) return false;
            if (!ia && a[i][x] != b[i][x]) return false;
        }
    }
    return true;
}

// Probability-domain reference by full enumeration, for small instances.
std::vector<prob_table> sumproduct_enumeration(const galois_field& gf,
                                               const std::vector<symbol>& h,
                                               const std::vector<prob_table>& p) {
    const int q = gf.order();
    const int d = int(h.size());
    std::vector<prob_table> out(d, prob_table(q, 0.0));
    std::vector<int> x(d, 0);
    while (true) {
        symbol s = 0;
        for (int e = 0; e < d; ++e) s = gf.add(s, gf.mul(h[e], symbol(x[e])));
        if (s == 0) {
            for (int e = 0; e < d; ++e) {
                double w = 1.0;
                for (int i = 0; i < d; ++i)
                    if (i != e) w *= p[i][x[i]];
                out[e][x[e]] += w;
            }
        }
        int k = 0;
        while (k < d && ++x[k] == q) x[k++] = 0;
        if (k == d) break;
    }
    for (auto& t : out) {
        double total = 0.0;
        for (double v : t) total += v;
        REQUIRE(total > 0.0);
        for (double& v : t) v /= total;
    }
    return out;
}

}  // namespace

TEST_CASE("single-position scan relabels the input through the coefficient") {
    galois_field gf(4);
    const std::vector<symbol> h = {2};
    const std::vector<cost_table> g = {{0.0, 1.0, 2.0, 3.0}};
    const auto blocks = nbldpc::left_scan(gf, h, g);
    REQUIRE(blocks.size() == 1);
    // State 2*x: symbol 1 lands on state 2, 2 on 3, 3 on 1.
    CHECK(blocks[0] == cost_table{0.0, 3.0, 1.0, 2.0});
}

TEST_CASE("two-sided scans agree with hand-worked binary examples") {
    galois_field gf(2);
    const std::vector<symbol> h = {1, 1, 1};
    const std::vector<cost_table> g = {{0.0, 3.0}, {0.0, 5.0}, {0.0, 2.0}};

    const auto fwd = nbldpc::left_scan(gf, h, g);
    REQUIRE(fwd.size() == 2);
    CHECK(fwd[0] == cost_table{0.0, 3.0});
    CHECK(fwd[1] == cost_table{0.0, 3.0});   // min(0+5, 3+0) reaches state 1 at 3

    const auto bwd = nbldpc::right_scan(gf, h, g);
    REQUIRE(bwd.size() == 2);
    CHECK(bwd[0] == cost_table{0.0, 2.0});
    CHECK(bwd[1] == cost_table{0.0, 2.0});   // positions 1..2: min(0+2, 5+0)

    const auto out = nbldpc::checknode_minsum(gf, h, g);
    // Excluding the first edge: best pair with x2+x3 = x1.
    CHECK(out[0] == cost_table{0.0, 2.0});
    CHECK(out[1] == cost_table{0.0, 2.0});
    CHECK(out[2] == cost_table{0.0, 3.0});
}

TEST_CASE("backward scan is a forward scan of the reversed constraint") {
    nbldpc::rng64 rng(41);
    for (int q : {4, 5, 8}) {
        galois_field gf(q);
        for (int d : {2, 3, 5}) {
            auto h = random_coeffs(gf, d, rng);
            auto g = random_int_costs(d, q, rng);
            auto rev_h = h;
            auto rev_g = g;
            std::reverse(rev_h.begin(), rev_h.end());
            std::reverse(rev_g.begin(), rev_g.end());
            const auto bwd = nbldpc::right_scan(gf, h, g);
            const auto fwd = nbldpc::left_scan(gf, rev_h, rev_g);
            REQUIRE(bwd.size() == fwd.size());
            for (std::size_t i = 0; i < bwd.size(); ++i)
                CHECK(bwd[i] == fwd[i]);
        }
    }
}

TEST_CASE("degree-1 update pins the variable to zero") {
    galois_field gf(4);
    const auto out = nbldpc::checknode_minsum(gf, std::vector<symbol>{3},
                                              std::vector<cost_table>{{7.0, 1.0, 2.0, 3.0}});
    REQUIRE(out.size() == 1);
    CHECK(out[0][0] == 0.0);
    for (int x = 1; x < 4; ++x) CHECK(std::isinf(out[0][x]));

    const auto pout = nbldpc::checknode_sumproduct(
        gf, std::vector<symbol>{3}, std::vector<prob_table>{{0.25, 0.25, 0.25, 0.25}});
    CHECK(pout[0][0] == 1.0);
    CHECK(pout[0][1] == 0.0);
}

TEST_CASE("sweep update matches the enumeration reference") {
    nbldpc::rng64 rng(7);
    int instances = 0;
    for (int q : {2, 3, 4, 5, 7, 8, 9, 16}) {
        galois_field gf(q);
        for (int d : {2, 3, 4}) {
            if (std::pow(double(q), d - 1) > 1e5) continue;
            for (int rep = 0; rep < 30; ++rep) {
                auto h = random_coeffs(gf, d, rng);
                auto g = random_int_costs(d, q, rng);
                // A few unreachable symbols to exercise saturation.
                if (rep % 3 == 0)
                    for (auto& t : g)
                        t[rng.next_below(q)] = infinite_cost;
                const auto want = nbldpc::checknode_oracle(gf, h, g);
                const auto got = nbldpc::checknode_minsum(gf, h, g);
                REQUIRE(tables_equal(got, want));
                ++instances;
            }
        }
    }
    CHECK(instances >= 500);
}

TEST_CASE("enumeration reference refuses oversized instances") {
    galois_field gf(16);
    std::vector<symbol> h(7, 1);
    std::vector<cost_table> g(7, cost_table(16, 0.0));
    REQUIRE_THROWS_AS(nbldpc::checknode_oracle(gf, h, g), std::invalid_argument);
}

TEST_CASE("binary update reduces to the sign and min-magnitude rule") {
    nbldpc::rng64 rng(11);
    galois_field gf(2);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + int(rng.next_below(5));
        std::vector<symbol> h(d, 1);
        std::vector<cost_table> g(d, cost_table(2));
        for (auto& t : g) {
            t[0] = rng.next_unit() * 20.0 - 10.0;
            t[1] = rng.next_unit() * 20.0 - 10.0;
        }
        const auto out = nbldpc::checknode_minsum(gf, h, g);
        for (int e = 0; e < d; ++e) {
            double sign = 1.0, mag = infinite_cost;
            for (int i = 0; i < d; ++i) {
                if (i == e) continue;
                const double lam = g[i][1] - g[i][0];
                if (lam < 0) sign = -sign;
                mag = std::min(mag, std::fabs(lam));
            }
            const double lam_out = out[e][1] - out[e][0];
            CHECK(lam_out == Catch::Approx(sign * mag).margin(1e-9));
        }
    }
}

TEST_CASE("characteristic-2 shortcut equals the general negation path") {
    nbldpc::rng64 rng(13);
    for (int q : {2, 4, 8, 16, 256}) {
        galois_field gf(q);
        for (int rep = 0; rep < 25; ++rep) {
            const int d = 2 + int(rng.next_below(4));
            auto h = random_coeffs(gf, d, rng);
            auto g = random_int_costs(d, q, rng);
            const auto fast = nbldpc::checknode_minsum(gf, h, g);
            const auto general = nbldpc::detail::checknode_minsum_general(gf, h, g);
            REQUIRE(tables_equal(fast, general));
        }
    }
}

TEST_CASE("odd characteristic needs the negation") {
    // A constraint where x1 + x2 = 0 differs from x1 = x2.
    galois_field gf(3);
    const std::vector<symbol> h = {1, 1};
    const std::vector<cost_table> g = {{9.0, 0.0, 9.0}, {9.0, 9.0, 0.0}};
    // x1 = 1 forces x2 = 2 and vice versa.
    const auto out = nbldpc::checknode_minsum(gf, h, g);
    CHECK(out[0] == cost_table{9.0, 0.0, 9.0});
    CHECK(out[1] == cost_table{9.0, 9.0, 0.0});
}

TEST_CASE("keeping all candidates is bit-identical to the full update") {
    nbldpc::rng64 rng(17);
    for (int q : {4, 8, 16}) {
        galois_field gf(q);
        for (int rep = 0; rep < 20; ++rep) {
            const int d = 2 + int(rng.next_below(4));
            auto h = random_coeffs(gf, d, rng);
            std::vector<cost_table> g(d, cost_table(q));
            for (auto& t : g)
                for (auto& v : t) v = rng.next_unit() * 50.0;
            const auto full = nbldpc::checknode_minsum(gf, h, g);
            const auto trunc = nbldpc::checknode_minsum_truncated(gf, h, g, q);
            REQUIRE(full == trunc);   // exact, including every bit
        }
    }
}

TEST_CASE("single-candidate truncation keeps only each side's best symbol") {
    galois_field gf(4);
    const std::vector<symbol> h = {1, 1};
    const std::vector<cost_table> g = {{4.0, 0.0, 6.0, 8.0}, {5.0, 0.0, 7.0, 9.0}};
    const auto out = nbldpc::checknode_minsum_truncated(gf, h, g, 1);
    // Both inputs prefer symbol 1; everything else drops out of the support.
    CHECK(out[0][1] == 0.0);
    CHECK(std::isinf(out[0][0]));
    CHECK(std::isinf(out[0][2]));
    CHECK(std::isinf(out[0][3]));
    CHECK(out[1][1] == 0.0);
    CHECK(std::isinf(out[1][0]));
}

TEST_CASE("truncation restricts the output support to own candidates") {
    nbldpc::rng64 rng(19);
    galois_field gf(8);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = 3;
        auto h = random_coeffs(gf, d, rng);
        std::vector<cost_table> g(d, cost_table(8));
        for (auto& t : g)
            for (auto& v : t) v = rng.next_unit() * 50.0;
        const int nm = 3;
        const auto out = nbldpc::checknode_minsum_truncated(gf, h, g, nm);
        for (int e = 0; e < d; ++e) {
            // The nm cheapest symbols of this edge's own input.
            std::vector<int> order(8);
            for (int i = 0; i < 8; ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                if (g[e][a] != g[e][b]) return g[e][a] < g[e][b];
                return a < b;
            });
            std::vector<bool> kept(8, false);
            for (int i = 0; i < nm; ++i) kept[order[i]] = true;
            for (int x = 0; x < 8; ++x)
                if (!kept[x]) CHECK(std::isinf(out[e][x]));
        }
    }
}

TEST_CASE("scaling every coefficient by a common factor changes nothing") {
    nbldpc::rng64 rng(23);
    for (int q : {5, 8, 9}) {
        galois_field gf(q);
        for (int rep = 0; rep < 20; ++rep) {
            const int d = 2 + int(rng.next_below(3));
            auto h = random_coeffs(gf, d, rng);
            auto g = random_int_costs(d, q, rng);
            const symbol c = symbol(2 + rng.next_below(std::uint64_t(q - 2)));
            auto h2 = h;
            for (auto& v : h2) v = gf.mul(v, c);
            CHECK(tables_equal(nbldpc::checknode_minsum(gf, h, g),
                               nbldpc::checknode_minsum(gf, h2, g)));
        }
    }
}

TEST_CASE("adding a constant to one input shifts every other output by it") {
    nbldpc::rng64 rng(29);
    galois_field gf(4);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 3 + int(rng.next_below(2));
        auto h = random_coeffs(gf, d, rng);
        auto g = random_int_costs(d, 4, rng);
        const auto base = nbldpc::checknode_minsum(gf, h, g);
        const int j = int(rng.next_below(d));
        const double shift = 7.0;
        auto g2 = g;
        for (auto& v : g2[j]) v += shift;
        const auto moved = nbldpc::checknode_minsum(gf, h, g2);
        for (int e = 0; e < d; ++e)
            for (int x = 0; x < 4; ++x) {
                if (std::isinf(base[e][x])) {
                    CHECK(std::isinf(moved[e][x]));
                } else if (e == j) {
                    CHECK(moved[e][x] == base[e][x]);
                } else {
                    CHECK(moved[e][x] == base[e][x] + shift);
                }
            }
    }
}

TEST_CASE("probability-domain update matches its enumeration") {
    nbldpc::rng64 rng(31);
    for (int q : {2, 3, 4, 8}) {
        galois_field gf(q);
        for (int d : {2, 3}) {
            for (int rep = 0; rep < 10; ++rep) {
                auto h = random_coeffs(gf, d, rng);
                std::vector<prob_table> p(d, prob_table(q));
                for (auto& t : p) {
                    double total = 0.0;
                    for (auto& v : t) {
                        v = rng.next_unit();
                        total += v;
                    }
                    for (auto& v : t) v /= total;
                }
                const auto want = sumproduct_enumeration(gf, h, p);
                const auto got = nbldpc::checknode_sumproduct(gf, h, p);
                for (int e = 0; e < d; ++e)
                    for (int x = 0; x < q; ++x)
                        CHECK(got[e][x] == Catch::Approx(want[e][x]).margin(1e-12));
            }
        }
    }
}

TEST_CASE("update input validation") {
    galois_field gf(4);
    const std::vector<cost_table> g2 = {{0, 1, 2, 3}, {0, 1, 2, 3}};
    // Zero coefficient.
    REQUIRE_THROWS_AS(nbldpc::checknode_minsum(gf, std::vector<symbol>{1, 0}, g2),
                      std::invalid_argument);
    // Table size mismatch.
    REQUIRE_THROWS_AS(
        nbldpc::checknode_minsum(gf, std::vector<symbol>{1, 1},
                                 std::vector<cost_table>{{0, 1}, {0, 1}}),
        std::invalid_argument);
    // Count mismatch.
    REQUIRE_THROWS_AS(nbldpc::checknode_minsum(gf, std::vector<symbol>{1}, g2),
                      std::invalid_argument);
    // Empty constraint.
    REQUIRE_THROWS_AS(nbldpc::checknode_minsum(gf, std::vector<symbol>{},
                                               std::vector<cost_table>{}),
                      std::invalid_argument);
    // Candidate count out of range.
    REQUIRE_THROWS_AS(nbldpc::checknode_minsum_truncated(gf, std::vector<symbol>{1, 1}, g2, 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(nbldpc::checknode_minsum_truncated(gf, std::vector<symbol>{1, 1}, g2, 5),
                      std::invalid_argument);
    // Probability tables must be distributions.
    REQUIRE_THROWS_AS(
        nbldpc::checknode_sumproduct(gf, std::vector<symbol>{1, 1},
                                     std::vector<prob_table>{{0.5, 0.5, 0.25, 0.25},
                                                             {0.25, 0.25, 0.25, 0.25}}),
        std::invalid_argument);
}
