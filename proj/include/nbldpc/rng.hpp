/**************************************************************************
 * rng.hpp
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
#include <cstdint>
#include <random>
#include <vector>

namespace nbldpc {

// Seed derivation and sampling helpers built on mt19937_64 only.  The standard
// pins the engine output exactly but not the distributions, so everything that
// feeds reproducible results (noise, shuffles, bounded draws) is implemented
// here instead of with <random> distribution classes.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed.  Used to give every
// Monte-Carlo trial (and every sub-purpose within a trial) its own generator
// so results do not depend on scheduling or worker count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master + 0x9e3779b97f4a7c15ull * (stream + 1);
    splitmix64(s);
    return splitmix64(s);
}

class rng64 {
public:
    explicit rng64(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform double in (0, 1]; never returns 0 so it is safe under log().
    double next_unit() {
        return double((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (0ull - bound) % bound;
        for (;;) {
            std::uint64_t v = eng_();
            if (v >= threshold) return v % bound;
        }
    }

    // Standard normal via the Box-Muller transform, pair-cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Fisher-Yates with the rejection sampler above; std::shuffle is
    // implementation-defined and would break cross-platform reproducibility.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = std::size_t(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace nbldpc
