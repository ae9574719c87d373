/**************************************************************************
 * cost.hpp
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
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace nbldpc {

// A cost table holds one nonnegative cost per field symbol (negative
// log-likelihood up to an additive constant).  Excluded symbols carry
// infinite_cost: IEEE infinity is a real marker, it saturates under addition
// and loses every minimum, so long accumulations cannot corrupt it the way a
// "big number" sentinel would.
inline constexpr double infinite_cost = std::numeric_limits<double>::infinity();

using cost_table = std::vector<double>;
using prob_table = std::vector<double>;

inline bool is_infinite(double c) { return std::isinf(c); }

// Smallest finite entry, or infinite_cost if there is none.
inline double min_finite(std::span<const double> t) {
    double m = infinite_cost;
    for (double v : t)
        if (v < m) m = v;
    return m;
}

// Index of the smallest entry; ties resolve to the smaller symbol.
inline int argmin_symbol(std::span<const double> t) {
    int best = 0;
    for (int i = 1; i < int(t.size()); ++i)
        if (t[i] < t[best]) best = i;
    return best;
}

// Shifts the table so its minimum finite entry becomes 0.  Infinite entries
// stay infinite.  Returns the shift.  A table with no finite entry is left
// alone.
inline double anchor_min_zero(std::span<double> t) {
    double m = min_finite(t);
    if (is_infinite(m)) return 0.0;
    for (double& v : t)
        v -= m;
    return m;
}

// Converts anchored costs to a normalized probability table.
inline prob_table costs_to_probs(std::span<const double> costs) {
    prob_table p(costs.size());
    double anchor = min_finite(costs);
    if (is_infinite(anchor))
        throw std::invalid_argument("costs_to_probs: no finite entry");
    double total = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        p[i] = std::exp(-(costs[i] - anchor));
        total += p[i];
    }
    for (double& v : p)
        v /= total;
    return p;
}

}  // namespace nbldpc
