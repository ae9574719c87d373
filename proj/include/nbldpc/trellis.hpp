/**************************************************************************
 * trellis.hpp
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

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cost.hpp"
#include "galois.hpp"

namespace nbldpc {

// Check-node updates for a single GF(q) parity constraint
//
//     sum_n h_n * x_n = 0,   h_n nonzero,
//
// computed by two sweeps over a state trellis whose state is the running
// partial sum of h_n * x_n.  A forward sweep accumulates prefixes, a backward
// sweep accumulates suffixes, and each edge's outgoing table combines the two
// sweeps around that edge.  The same trellis serves two algebras:
//
//   min-sum      combine = min, extend = +        (cost domain)
//   sum-product  combine = +,   extend = *        (probability domain)
//
// so both decoders share one kernel and differ only in the algebra plugged in.
// Per constraint the work is O(d * q^2); restricting each variable to its
// n_m best candidate symbols brings it down to O(d * n_m * q).

struct minsum_algebra {
    static constexpr double combine_identity() { return infinite_cost; }
    static constexpr double extend_identity() { return 0.0; }
    static double combine(double a, double b) { return b < a ? b : a; }
    static double extend(double a, double b) { return a + b; }
    // An infinite input cost can never win a minimum; skipping it keeps the
    // sweeps proportional to the number of live symbols.
    static bool skip_input(double g) { return is_infinite(g); }
};

struct sumproduct_algebra {
    static constexpr double combine_identity() { return 0.0; }
    static constexpr double extend_identity() { return 1.0; }
    static double combine(double a, double b) { return a + b; }
    static double extend(double a, double b) { return a * b; }
    static bool skip_input(double g) { return g == 0.0; }
};

// Scratch reused across updates so per-constraint work allocates nothing.
struct checknode_workspace {
    std::vector<double> forward;        // (d-1) state blocks of q costs
    std::vector<double> backward;       // (d-1) state blocks of q costs
    std::vector<int> identity;          // 0..q-1
    std::vector<int> candidates;        // flattened per-edge candidate symbols
    std::vector<int> candidate_count;
    std::vector<int> order;             // selection scratch
    std::vector<const double*> in_ptrs;
    std::vector<double*> out_ptrs;
    std::vector<const int*> cand_ptrs;

    void prepare(int q, int degree) {
        if (int(identity.size()) != q) {
            identity.resize(q);
            for (int i = 0; i < q; ++i) identity[i] = i;
        }
        std::size_t blocks = degree > 1 ? std::size_t(degree - 1) * q : 1;
        if (forward.size() < blocks) forward.resize(blocks);
        if (backward.size() < blocks) backward.resize(blocks);
        if (int(in_ptrs.size()) < degree) {
            in_ptrs.resize(degree);
            out_ptrs.resize(degree);
            cand_ptrs.resize(degree);
            candidate_count.resize(degree);
        }
    }
};

namespace detail {

template <class Algebra>
void scan_forward(const galois_field& gf, const symbol* coeffs, int degree,
                  const double* const* in, const int* const* cand,
                  const int* cand_n, double* fwd) {
    const int q = gf.order();
    const symbol* addt = gf.add_table();
    const symbol* mult = gf.mul_table();

    double* first = fwd;
    std::fill(first, first + q, Algebra::combine_identity());
    const symbol* mrow0 = mult + std::size_t(coeffs[0]) * q;
    for (int k = 0; k < cand_n[0]; ++k) {
        const int x = cand[0][k];
        const double g = in[0][x];
        if (Algebra::skip_input(g)) continue;
        first[mrow0[x]] = g;     // state relabeling, x -> h*x is a bijection
    }

    for (int i = 1; i <= degree - 2; ++i) {
        const double* prev = fwd + std::size_t(i - 1) * q;
        double* cur = fwd + std::size_t(i) * q;
        std::fill(cur, cur + q, Algebra::combine_identity());
        const symbol* mrow = mult + std::size_t(coeffs[i]) * q;
        for (int k = 0; k < cand_n[i]; ++k) {
            const int x = cand[i][k];
            const double g = in[i][x];
            if (Algebra::skip_input(g)) continue;
            const symbol* arow = addt + std::size_t(mrow[x]) * q;
            for (int s = 0; s < q; ++s) {
                double v = Algebra::extend(g, prev[s]);
                double& slot = cur[arow[s]];
                slot = Algebra::combine(slot, v);
            }
        }
    }
}

// Suffix blocks are stored in sweep order: block i covers the last i+1
// positions, i.e. the suffix starting at degree-1-i.
template <class Algebra>
void scan_backward(const galois_field& gf, const symbol* coeffs, int degree,
                   const double* const* in, const int* const* cand,
                   const int* cand_n, double* bwd) {
    const int q = gf.order();
    const symbol* addt = gf.add_table();
    const symbol* mult = gf.mul_table();

    double* first = bwd;
    std::fill(first, first + q, Algebra::combine_identity());
    const symbol* mrowl = mult + std::size_t(coeffs[degree - 1]) * q;
    for (int k = 0; k < cand_n[degree - 1]; ++k) {
        const int x = cand[degree - 1][k];
        const double g = in[degree - 1][x];
        if (Algebra::skip_input(g)) continue;
        first[mrowl[x]] = g;
    }

    for (int j = degree - 2; j >= 1; --j) {
        const double* prev = bwd + std::size_t(degree - 2 - j) * q;
        double* cur = bwd + std::size_t(degree - 1 - j) * q;
        std::fill(cur, cur + q, Algebra::combine_identity());
        const symbol* mrow = mult + std::size_t(coeffs[j]) * q;
        for (int k = 0; k < cand_n[j]; ++k) {
            const int x = cand[j][k];
            const double g = in[j][x];
            if (Algebra::skip_input(g)) continue;
            const symbol* arow = addt + std::size_t(mrow[x]) * q;
            for (int s = 0; s < q; ++s) {
                double v = Algebra::extend(g, prev[s]);
                double& slot = cur[arow[s]];
                slot = Algebra::combine(slot, v);
            }
        }
    }
}

// The two sweeps meet at edge n: prefix state s and suffix state s' must
// cancel the edge term, s + h_n x + s' = 0.  Outside characteristic 2 that
// requires a negation lookup; with characteristic 2 every element is its own
// negative and the lookup can be dropped.  `use_negation` keeps the general
// path selectable on characteristic-2 fields so both routes can be compared.
template <class Algebra>
void combine_outputs(const galois_field& gf, const symbol* coeffs, int degree,
                     double* const* out, const int* const* cand,
                     const int* cand_n, const double* fwd, const double* bwd,
                     bool use_negation) {
    const int q = gf.order();
    const symbol* addt = gf.add_table();
    const symbol* mult = gf.mul_table();

    {   // first edge: suffix block alone decides
        double* o = out[0];
        std::fill(o, o + q, Algebra::combine_identity());
        const double* suffix1 = bwd + std::size_t(degree - 2) * q;
        const symbol* mrow = mult + std::size_t(coeffs[0]) * q;
        for (int k = 0; k < cand_n[0]; ++k) {
            const int x = cand[0][k];
            const symbol s = mrow[x];
            o[x] = suffix1[use_negation ? gf.neg(s) : s];
        }
    }
    {   // last edge: prefix block alone decides
        double* o = out[degree - 1];
        std::fill(o, o + q, Algebra::combine_identity());
        const double* prefix = fwd + std::size_t(degree - 2) * q;
        const symbol* mrow = mult + std::size_t(coeffs[degree - 1]) * q;
        for (int k = 0; k < cand_n[degree - 1]; ++k) {
            const int x = cand[degree - 1][k];
            const symbol s = mrow[x];
            o[x] = prefix[use_negation ? gf.neg(s) : s];
        }
    }
    for (int n = 1; n <= degree - 2; ++n) {
        double* o = out[n];
        std::fill(o, o + q, Algebra::combine_identity());
        const double* fw = fwd + std::size_t(n - 1) * q;
        const double* bw = bwd + std::size_t(degree - 2 - n) * q;
        const symbol* mrow = mult + std::size_t(coeffs[n]) * q;
        for (int k = 0; k < cand_n[n]; ++k) {
            const int x = cand[n][k];
            const symbol* arow = addt + std::size_t(mrow[x]) * q;
            double acc = Algebra::combine_identity();
            if (use_negation) {
                for (int s = 0; s < q; ++s)
                    acc = Algebra::combine(acc, Algebra::extend(fw[s], bw[gf.neg(arow[s])]));
            } else {
                for (int s = 0; s < q; ++s)
                    acc = Algebra::combine(acc, Algebra::extend(fw[s], bw[arow[s]]));
            }
            o[x] = acc;
        }
    }
}

template <class Algebra>
void checknode_kernel(const galois_field& gf, const symbol* coeffs, int degree,
                      const double* const* in, double* const* out,
                      const int* const* cand, const int* cand_n,
                      bool force_general_negation, checknode_workspace& ws) {
    const int q = gf.order();
    if (degree == 1) {
        // h*x = 0 forces x = 0 whatever the input says.
        std::fill(out[0], out[0] + q, Algebra::combine_identity());
        out[0][0] = Algebra::extend_identity();
        return;
    }
    ws.prepare(q, degree);
    scan_forward<Algebra>(gf, coeffs, degree, in, cand, cand_n, ws.forward.data());
    scan_backward<Algebra>(gf, coeffs, degree, in, cand, cand_n, ws.backward.data());
    const bool use_negation = !(gf.characteristic_two() && !force_general_negation);
    combine_outputs<Algebra>(gf, coeffs, degree, out, cand, cand_n,
                             ws.forward.data(), ws.backward.data(), use_negation);
}

inline void validate_checknode(const galois_field& gf,
                               std::span<const symbol> coeffs,
                               std::size_t num_inputs,
                               std::size_t table_size) {
    if (coeffs.empty())
        throw std::invalid_argument("checknode: constraint of degree zero");
    if (coeffs.size() != num_inputs)
        throw std::invalid_argument("checknode: coefficient/input count mismatch");
    for (symbol c : coeffs)
        if (c == 0 || int(c) >= gf.order())
            throw std::invalid_argument("checknode: coefficient outside GF(q)*");
    if (int(table_size) != gf.order())
        throw std::invalid_argument("checknode: table size does not match field order");
}

inline void check_table_sizes(const galois_field& gf, std::span<const cost_table> inputs) {
    for (const auto& t : inputs)
        if (int(t.size()) != gf.order())
            throw std::invalid_argument("checknode: table size does not match field order");
}

// Keeps the n_m cheapest symbols of each input table; ties go to the smaller
// symbol so the selection is deterministic, and the cheapest symbol is always
// kept.  Selected lists drive both the sweeps and each edge's output support.
inline void select_candidates(std::span<const double> table, int keep,
                              std::vector<int>& order, int* out) {
    const int q = int(table.size());
    order.resize(q);
    for (int i = 0; i < q; ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                      [&table](int a, int b) {
                          if (table[a] != table[b]) return table[a] < table[b];
                          return a < b;
                      });
    std::copy(order.begin(), order.begin() + keep, out);
}

inline std::vector<cost_table> run_minsum(const galois_field& gf,
                                          std::span<const symbol> coeffs,
                                          std::span<const cost_table> inputs,
                                          int num_candidates,
                                          bool force_general_negation) {
    validate_checknode(gf, coeffs, inputs.size(),
                       inputs.empty() ? gf.order() : inputs[0].size());
    check_table_sizes(gf, inputs);
    const int q = gf.order();
    const int d = int(coeffs.size());
    if (num_candidates < 1 || num_candidates > q)
        throw std::invalid_argument("checknode: candidate count outside [1, q]");

    checknode_workspace ws;
    ws.prepare(q, d);
    std::vector<cost_table> out(d, cost_table(q));
    for (int e = 0; e < d; ++e) {
        ws.in_ptrs[e] = inputs[e].data();
        ws.out_ptrs[e] = out[e].data();
    }
    if (num_candidates == q) {
        for (int e = 0; e < d; ++e) {
            ws.cand_ptrs[e] = ws.identity.data();
            ws.candidate_count[e] = q;
        }
    } else {
        ws.candidates.resize(std::size_t(d) * num_candidates);
        for (int e = 0; e < d; ++e) {
            int* slot = ws.candidates.data() + std::size_t(e) * num_candidates;
            select_candidates(inputs[e], num_candidates, ws.order, slot);
            ws.cand_ptrs[e] = slot;
            ws.candidate_count[e] = num_candidates;
        }
    }
    checknode_kernel<minsum_algebra>(gf, coeffs.data(), d, ws.in_ptrs.data(),
                                     ws.out_ptrs.data(), ws.cand_ptrs.data(),
                                     ws.candidate_count.data(),
                                     force_general_negation, ws);
    return out;
}

}  // namespace detail

/// Forward sweep only: returns the d-1 prefix state blocks, block i covering
// positions 0..i.
inline std::vector<cost_table> left_scan(const galois_field& gf,
                                         std::span<const symbol> coeffs,
                                         std::span<const cost_table> inputs) {
    detail::validate_checknode(gf, coeffs, inputs.size(),
                               inputs.empty() ? gf.order() : inputs[0].size());
    detail::check_table_sizes(gf, inputs);
    const int q = gf.order();
    const int d = int(coeffs.size());
    checknode_workspace ws;
    ws.prepare(q, d);
    for (int e = 0; e < d; ++e) {
        ws.in_ptrs[e] = inputs[e].data();
        ws.cand_ptrs[e] = ws.identity.data();
        ws.candidate_count[e] = q;
    }
    const int blocks = d > 1 ? d - 1 : 1;
    std::vector<double> fwd(std::size_t(blocks) * q);
    detail::scan_forward<minsum_algebra>(gf, coeffs.data(), d, ws.in_ptrs.data(),
                                         ws.cand_ptrs.data(), ws.candidate_count.data(),
                                         fwd.data());
    std::vector<cost_table> out(blocks, cost_table(q));
    for (int i = 0; i < blocks; ++i)
        std::copy(fwd.begin() + std::size_t(i) * q, fwd.begin() + std::size_t(i + 1) * q,
                  out[i].begin());
    return out;
}

// Backward sweep only: block i covers the last i+1 positions, so the list
// mirrors left_scan applied to the reversed constraint.
inline std::vector<cost_table> right_scan(const galois_field& gf,
                                          std::span<const symbol> coeffs,
                                          std::span<const cost_table> inputs) {
    detail::validate_checknode(gf, coeffs, inputs.size(),
                               inputs.empty() ? gf.order() : inputs[0].size());
    detail::check_table_sizes(gf, inputs);
    const int q = gf.order();
    const int d = int(coeffs.size());
    checknode_workspace ws;
    ws.prepare(q, d);
    for (int e = 0; e < d; ++e) {
        ws.in_ptrs[e] = inputs[e].data();
        ws.cand_ptrs[e] = ws.identity.data();
        ws.candidate_count[e] = q;
    }
    const int blocks = d > 1 ? d - 1 : 1;
    std::vector<double> bwd(std::size_t(blocks) * q);
    detail::scan_backward<minsum_algebra>(gf, coeffs.data(), d, ws.in_ptrs.data(),
                                          ws.cand_ptrs.data(), ws.candidate_count.data(),
                                          bwd.data());
    std::vector<cost_table> out(blocks, cost_table(q));
    for (int i = 0; i < blocks; ++i)
        std::copy(bwd.begin() + std::size_t(i) * q, bwd.begin() + std::size_t(i + 1) * q,
                  out[i].begin());
    return out;
}

// Min-sum update for one constraint: out[n][x] is the cheapest way to satisfy
// the constraint with variable n pinned to x, counting every other edge's
// input cost.  Raw costs, no normalization.
inline std::vector<cost_table> checknode_minsum(const galois_field& gf,
                                                std::span<const symbol> coeffs,
                                                std::span<const cost_table> inputs) {
    return detail::run_minsum(gf, coeffs, inputs, gf.order(), false);
}

// Same update with every variable restricted to its n_m cheapest symbols.
// The restriction applies to the sweeps and to each edge's own output
// support, which is what makes the update O(d * n_m * q); pruned symbols
// come back as infinite_cost.  With num_candidates == q the result is
// bit-identical to checknode_minsum.
inline std::vector<cost_table> checknode_minsum_truncated(const galois_field& gf,
                                                          std::span<const symbol> coeffs,
                                                          std::span<const cost_table> inputs,
                                                          int num_candidates) {
    return detail::run_minsum(gf, coeffs, inputs, num_candidates, false);
}

namespace detail {

// General-negation route forced on, regardless of characteristic.  Exists so
// the characteristic-2 shortcut can be validated against it.
inline std::vector<cost_table> checknode_minsum_general(const galois_field& gf,
                                                        std::span<const symbol> coeffs,
                                                        std::span<const cost_table> inputs) {
    return run_minsum(gf, coeffs, inputs, gf.order(), true);
}

}  // namespace detail

// Brute-force reference: enumerates every satisfying assignment.  The free
// variables run over all q^(d-1) configurations and the remaining one is
// solved from the constraint, so this is exact by construction and
// independent of the sweep implementation.
inline std::vector<cost_table> checknode_oracle(const galois_field& gf,
                                                std::span<const symbol> coeffs,
                                                std::span<const cost_table> inputs) {
    detail::validate_checknode(gf, coeffs, inputs.size(),
                               inputs.empty() ? gf.order() : inputs[0].size());
    detail::check_table_sizes(gf, inputs);
    const int q = gf.order();
    const int d = int(coeffs.size());

    double configs = 1.0;
    for (int i = 0; i < d - 1; ++i) configs *= q;
    if (configs > 1e6)
        throw std::invalid_argument("checknode_oracle: q^(d-1) exceeds enumeration guard");

    std::vector<cost_table> out(d, cost_table(q, infinite_cost));
    if (d == 1) {
        out[0][0] = 0.0;
        return out;
    }

    const symbol h0_inv = gf.inv(coeffs[0]);
    std::vector<int> x(d, 0);          // x[1..d-1] free, x[0] solved
    for (;;) {
        symbol partial = 0;
        for (int i = 1; i < d; ++i)
            partial = gf.add(partial, gf.mul(coeffs[i], symbol(x[i])));
        x[0] = gf.mul(h0_inv, gf.neg(partial));

        // One pass collects the finite total and the infinite-entry count so
        // leave-one-out sums stay exact even with pruned inputs.
        double finite_sum = 0.0;
        int infinite_count = 0;
        for (int i = 0; i < d; ++i) {
            double g = inputs[i][x[i]];
            if (is_infinite(g)) ++infinite_count;
            else finite_sum += g;
        }
        for (int n = 0; n < d; ++n) {
            double g = inputs[n][x[n]];
            double excl;
            if (is_infinite(g))
                excl = infinite_count > 1 ? infinite_cost : finite_sum;
            else
                excl = infinite_count > 0 ? infinite_cost : finite_sum - g;
            double& slot = out[n][x[n]];
            if (excl < slot) slot = excl;
        }

        int i = 1;
        while (i < d && ++x[i] == q) x[i++] = 0;
        if (i == d) break;
    }
    return out;
}

// Sum-product update on the same trellis: out[n][x] is proportional to the
// total probability of the other edges completing the constraint, normalized
// to sum to 1.
inline std::vector<prob_table> checknode_sumproduct(const galois_field& gf,
                                                    std::span<const symbol> coeffs,
                                                    std::span<const prob_table> inputs) {
    detail::validate_checknode(gf, coeffs, inputs.size(),
                               inputs.empty() ? gf.order() : inputs[0].size());
    const int q = gf.order();
    const int d = int(coeffs.size());
    for (const auto& t : inputs) {
        if (int(t.size()) != q)
            throw std::invalid_argument("checknode: table size does not match field order");
        double total = 0.0;
        for (double v : t) {
            if (v < 0.0)
                throw std::invalid_argument("checknode_sumproduct: negative probability");
            total += v;
        }
        if (total < 1.0 - 1e-6 || total > 1.0 + 1e-6)
            throw std::invalid_argument("checknode_sumproduct: table does not sum to 1");
    }

    checknode_workspace ws;
    ws.prepare(q, d);
    std::vector<prob_table> out(d, prob_table(q));
    for (int e = 0; e < d; ++e) {
        ws.in_ptrs[e] = inputs[e].data();
        ws.out_ptrs[e] = out[e].data();
        ws.cand_ptrs[e] = ws.identity.data();
        ws.candidate_count[e] = q;
    }
    detail::checknode_kernel<sumproduct_algebra>(gf, coeffs.data(), d, ws.in_ptrs.data(),
                                                 ws.out_ptrs.data(), ws.cand_ptrs.data(),
                                                 ws.candidate_count.data(), false, ws);
    for (auto& t : out) {
        double total = 0.0;
        for (double v : t) total += v;
        if (total <= 0.0)
            throw std::runtime_error("checknode_sumproduct: constraint left zero mass");
        for (double& v : t) v /= total;
    }
    return out;
}

}  // namespace nbldpc
