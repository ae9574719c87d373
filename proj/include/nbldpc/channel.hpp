/**************************************************************************
 * channel.hpp
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

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "cost.hpp"
#include "galois.hpp"
#include "rng.hpp"

namespace nbldpc {

// BPSK over AWGN.  A GF(2^m) symbol is sent as its m bits, most significant
// first, bit b mapping to amplitude 1 - 2b.  With code rate R (information
// bits per channel bit), Eb/N0 fixes the per-dimension noise variance as
//
//     sigma^2 = 1 / (2 * R * 10^(ebn0_db / 10)).

struct channel_params {
    double ebn0_db;
    double rate;
    int bits_per_symbol;
    double sigma2;
};

inline channel_params make_channel_params(double ebn0_db, double rate, int bits_per_symbol) {
    if (!std::isfinite(ebn0_db))
        throw std::invalid_argument("channel: ebn0_db must be finite");
    if (rate <= 0.0 || rate > 1.0)
        throw std::invalid_argument("channel: rate must be in (0, 1]");
    if (bits_per_symbol < 1)
        throw std::invalid_argument("channel: bits_per_symbol must be >= 1");
    const double sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
    return {ebn0_db, rate, bits_per_symbol, sigma2};
}

// Inclusive Eb/N0 grid from start to stop; the endpoint is kept when it lands
// within half a step, so fractional steps do not drop it to rounding.
inline std::vector<channel_params> ebn0_sweep(double start, double stop, double step,
                                              double rate, int bits_per_symbol) {
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
        throw std::invalid_argument("channel: sweep bounds must be finite");
    if (step <= 0.0)
        throw std::invalid_argument("channel: sweep step must be positive");
    if (stop < start)
        throw std::invalid_argument("channel: sweep stop below start");
    std::vector<channel_params> points;
    for (int k = 0;; ++k) {
        const double v = start + k * step;
        if (v > stop + step * 0.5) break;
        points.push_back(make_channel_params(v, rate, bits_per_symbol));
    }
    return points;
}

namespace detail {

inline int bits_for_order(const galois_field& gf) {
    if (gf.characteristic() != 2)
        throw std::invalid_argument("channel: BPSK mapping needs a power-of-two field");
    return gf.degree();
}

inline void modulate_into(const galois_field& gf, std::span<const symbol> word,
                          double* amps) {
    const int m = bits_for_order(gf);
    std::size_t k = 0;
    for (symbol v : word)
        for (int b = m - 1; b >= 0; --b)
            amps[k++] = ((v >> b) & 1) ? -1.0 : 1.0;
}

inline void transmit_into(std::span<const double> amps, const channel_params& params,
                          std::uint64_t seed, double* received) {
    const double sigma = std::sqrt(params.sigma2);
    rng64 rng(seed);
    for (std::size_t i = 0; i < amps.size(); ++i)
        received[i] = amps[i] + sigma * rng.next_gaussian();
}

// Squared-distance costs per symbol, anchored so each table's minimum is 0.
inline void symbol_costs_into(const galois_field& gf, std::span<const double> received,
                              const channel_params& params, double* costs) {
    const int m = bits_for_order(gf);
    const int q = gf.order();
    if (params.sigma2 <= 0.0)
        throw std::invalid_argument("channel: noise variance must be positive");
    if (received.size() % m != 0)
        throw std::invalid_argument("channel: sample count not a multiple of bits per symbol");
    const double scale = 1.0 / (2.0 * params.sigma2);
    const std::size_t n = received.size() / m;
    for (std::size_t i = 0; i < n; ++i) {
        double* t = costs + i * q;
        for (int v = 0; v < q; ++v) {
            double c = 0.0;
            for (int b = 0; b < m; ++b) {
                const double amp = ((v >> (m - 1 - b)) & 1) ? -1.0 : 1.0;
                const double d = received[i * m + b] - amp;
                c += d * d * scale;
            }
            t[v] = c;
        }
        anchor_min_zero(std::span<double>(t, q));
    }
}

}  // namespace detail

inline std::vector<double> modulate(const galois_field& gf, std::span<const symbol> word) {
    std::vector<double> amps(word.size() * std::size_t(detail::bits_for_order(gf)));
    detail::modulate_into(gf, word, amps.data());
    return amps;
}

inline std::vector<double> transmit(std::span<const double> amps,
                                    const channel_params& params, std::uint64_t seed) {
    std::vector<double> received(amps.size());
    detail::transmit_into(amps, params, seed, received.data());
    return received;
}

inline std::vector<cost_table> symbol_costs(const galois_field& gf,
                                            std::span<const double> received,
                                            const channel_params& params) {
    const int m = detail::bits_for_order(gf);
    if (received.size() % m != 0)
        throw std::invalid_argument("channel: sample count not a multiple of bits per symbol");
    const std::size_t n = received.size() / m;
    std::vector<double> flat(n * std::size_t(gf.order()));
    detail::symbol_costs_into(gf, received, params, flat.data());
    std::vector<cost_table> out(n, cost_table(gf.order()));
    for (std::size_t i = 0; i < n; ++i)
        std::copy(flat.begin() + i * gf.order(), flat.begin() + (i + 1) * gf.order(),
                  out[i].begin());
    return out;
}

}  // namespace nbldpc
