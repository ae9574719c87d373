/**************************************************************************
 * decoder.hpp
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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "code.hpp"
#include "cost.hpp"
#include "galois.hpp"
#include "trellis.hpp"

namespace nbldpc {

// Iterative flooding decoder.  Each iteration runs every check-node update
// (horizontal step), then refreshes the variable-to-check tables and the
// posterior (vertical step), then takes a hard decision and stops once the
// syndrome clears.
//
// Variants differ only in how check-to-variable costs enter the vertical
// step: `plain` sums them as-is, `normalized` scales the sum by alpha,
// `offset` shrinks each cost toward zero by beta before summing.

enum class decoder_variant { plain, normalized, offset };

struct decoder_config {
    decoder_variant variant = decoder_variant::plain;
    double alpha = 1.0;
    double beta = 0.0;
    int max_iterations = 300;
    int num_candidates = 0;     // 0 keeps all q symbols per edge
    bool check_at_zero = true;  // try the channel hard decision before iterating

    void validate(const galois_field& gf) const {
        if (max_iterations < 0 || max_iterations > 1'000'000)
            throw std::invalid_argument("decoder: max_iterations out of range");
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw std::invalid_argument("decoder: alpha must be in (0, 1]");
        if (beta < 0.0)
            throw std::invalid_argument("decoder: beta must be >= 0");
        if (variant != decoder_variant::normalized && alpha != 1.0)
            throw std::invalid_argument("decoder: alpha only applies to the normalized variant");
        if (variant != decoder_variant::offset && beta != 0.0)
            throw std::invalid_argument("decoder: beta only applies to the offset variant");
        if (num_candidates != 0 &&
            (num_candidates < 1 || num_candidates > gf.order()))
            throw std::invalid_argument("decoder: candidate count outside [1, q]");
    }
};

// Flat per-edge message storage; edge e owns [e*q, (e+1)*q).  The same
// buffers serve the cost-domain decoder and the probability-domain one.
struct message_state {
    int q = 0;
    std::vector<double> var_to_check;
    std::vector<double> check_to_var;
    std::vector<double> channel;     // anchored per-variable tables, N*q
    std::vector<double> posterior;   // N*q
    std::vector<symbol> decision;
    std::vector<int> edge_var;       // edge id -> variable index
    std::vector<double> tau;         // per-incident-edge scratch
    std::vector<symbol> coeffs;      // per-check scratch
    checknode_workspace ws;
    std::uint64_t infinite_normalizations = 0;  // L(0) was unreachable
    std::uint64_t support_resets = 0;           // a table lost every symbol
};

struct decode_result {
    std::vector<symbol> codeword;
    bool converged = false;
    int iterations_used = 0;
    std::vector<cost_table> posterior;
    std::uint64_t infinite_normalizations = 0;
    std::uint64_t support_resets = 0;
    bool degenerate = false;   // probability decoder ran out of mass somewhere
};

namespace detail {

inline void flatten_tables(const ldpc_code& code, std::span<const cost_table> tables,
                           std::vector<double>& flat, bool anchor) {
    const int q = code.field().order();
    if (int(tables.size()) != code.num_vars())
        throw std::invalid_argument("decoder: table count does not match code length");
    flat.resize(std::size_t(code.num_vars()) * q);
    for (int n = 0; n < code.num_vars(); ++n) {
        if (int(tables[n].size()) != q)
            throw std::invalid_argument("decoder: table size does not match field order");
        double* row = flat.data() + std::size_t(n) * q;
        std::copy(tables[n].begin(), tables[n].end(), row);
        if (anchor) anchor_min_zero(std::span<double>(row, q));
    }
}

inline void setup_state(const ldpc_code& code, message_state& st) {
    const int q = code.field().order();
    st.q = q;
    st.var_to_check.assign(std::size_t(code.num_edges()) * q, 0.0);
    st.check_to_var.assign(std::size_t(code.num_edges()) * q, 0.0);
    st.posterior.assign(std::size_t(code.num_vars()) * q, 0.0);
    st.decision.assign(code.num_vars(), 0);
    st.edge_var.assign(code.num_edges(), 0);
    st.tau.assign(code.max_var_degree(), 0.0);
    st.coeffs.assign(code.max_check_degree(), 0);
    st.ws.prepare(q, code.max_check_degree());
    for (int n = 0; n < code.num_vars(); ++n) {
        const double* row = st.channel.data() + std::size_t(n) * q;
        for (const code_entry& e : code.var_col(n)) {
            st.edge_var[e.edge] = n;
            std::copy(row, row + q, st.var_to_check.data() + std::size_t(e.edge) * q);
        }
    }
}

inline void horizontal_core(const ldpc_code& code, message_state& st, int num_candidates) {
    const galois_field& gf = code.field();
    const int q = st.q;
    checknode_workspace& ws = st.ws;
    const int dc_max = int(st.coeffs.size());
    ws.prepare(q, dc_max);
    const bool full = num_candidates >= q;
    if (!full) ws.candidates.resize(std::size_t(dc_max) * num_candidates);

    for (int m = 0; m < code.num_checks(); ++m) {
        auto row = code.check_row(m);
        const int d = int(row.size());
        for (int k = 0; k < d; ++k) {
            const code_entry& e = row[k];
            ws.in_ptrs[k] = st.var_to_check.data() + std::size_t(e.edge) * q;
            ws.out_ptrs[k] = st.check_to_var.data() + std::size_t(e.edge) * q;
            st.coeffs[k] = e.coeff;
            if (full) {
                ws.cand_ptrs[k] = ws.identity.data();
                ws.candidate_count[k] = q;
            } else {
                int* slot = ws.candidates.data() + std::size_t(k) * num_candidates;
                select_candidates(std::span<const double>(ws.in_ptrs[k], q),
                                  num_candidates, ws.order, slot);
                ws.cand_ptrs[k] = slot;
                ws.candidate_count[k] = num_candidates;
            }
        }
        checknode_kernel<minsum_algebra>(gf, st.coeffs.data(), d, ws.in_ptrs.data(),
                                         ws.out_ptrs.data(), ws.cand_ptrs.data(),
                                         ws.candidate_count.data(), false, ws);
        // Anchor each outgoing table at symbol zero.  When pruning removed
        // every configuration with x = 0, fall back to the cheapest surviving
        // entry; a fully dead table turns into "no information".
        for (int k = 0; k < d; ++k) {
            double* L = ws.out_ptrs[k];
            double base = L[0];
            if (is_infinite(base)) {
                base = min_finite(std::span<const double>(L, q));
                if (is_infinite(base)) {
                    std::fill(L, L + q, 0.0);
                    ++st.support_resets;
                    continue;
                }
                ++st.infinite_normalizations;
            }
            for (int x = 0; x < q; ++x)
                L[x] -= base;
        }
    }
}

inline void vertical_core(const ldpc_code& code, message_state& st,
                          const decoder_config& cfg) {
    const int q = st.q;
    const double alpha = cfg.variant == decoder_variant::normalized ? cfg.alpha : 1.0;
    const bool use_offset = cfg.variant == decoder_variant::offset;
    const double beta = cfg.beta;

    for (int n = 0; n < code.num_vars(); ++n) {
        auto col = code.var_col(n);
        const int dv = int(col.size());
        const double* f = st.channel.data() + std::size_t(n) * q;
        for (int x = 0; x < q; ++x) {
            double finite_sum = 0.0;
            int infinite_count = 0;
            for (int j = 0; j < dv; ++j) {
                double v = st.check_to_var[std::size_t(col[j].edge) * q + x];
                if (use_offset) {
                    v -= beta;
                    if (v < 0.0) v = 0.0;
                }
                st.tau[j] = v;
                if (is_infinite(v)) ++infinite_count;
                else finite_sum += v;
            }
            for (int j = 0; j < dv; ++j) {
                const double v = st.tau[j];
                double excl;
                if (is_infinite(v))
                    excl = infinite_count > 1 ? infinite_cost : finite_sum;
                else
                    excl = infinite_count > 0 ? infinite_cost : finite_sum - v;
                st.var_to_check[std::size_t(col[j].edge) * q + x] = f[x] + alpha * excl;
            }
        }
    }
    // Re-anchor every outgoing table; pruning can empty one, in which case the
    // channel table is restored so the edge keeps carrying information.
    for (int e = 0; e < code.num_edges(); ++e) {
        double* z = st.var_to_check.data() + std::size_t(e) * q;
        const double mn = min_finite(std::span<const double>(z, q));
        if (is_infinite(mn)) {
            const double* f = st.channel.data() + std::size_t(st.edge_var[e]) * q;
            std::copy(f, f + q, z);
            ++st.support_resets;
        } else if (mn != 0.0) {
            for (int x = 0; x < q; ++x)
                z[x] -= mn;
        }
    }
}

inline void posterior_core(const ldpc_code& code, message_state& st,
                           const decoder_config& cfg) {
    const int q = st.q;
    const double alpha = cfg.variant == decoder_variant::normalized ? cfg.alpha : 1.0;
    const bool use_offset = cfg.variant == decoder_variant::offset;
    const double beta = cfg.beta;

    for (int n = 0; n < code.num_vars(); ++n) {
        auto col = code.var_col(n);
        const double* f = st.channel.data() + std::size_t(n) * q;
        double* post = st.posterior.data() + std::size_t(n) * q;
        bool any_finite = false;
        for (int x = 0; x < q; ++x) {
            double s = 0.0;
            for (const code_entry& e : col) {
                double v = st.check_to_var[std::size_t(e.edge) * q + x];
                if (use_offset) {
                    v -= beta;
                    if (v < 0.0) v = 0.0;
                }
                s += v;   // infinities saturate
            }
            post[x] = f[x] + alpha * s;
            if (!is_infinite(post[x])) any_finite = true;
        }
        if (!any_finite) {
            std::copy(f, f + q, post);
            ++st.support_resets;
        }
        st.decision[n] = symbol(argmin_symbol(std::span<const double>(post, q)));
    }
}

struct decode_status {
    bool converged;
    int iterations;
};

inline decode_status decode_core(const ldpc_code& code, const decoder_config& cfg,
                                 message_state& st) {
    const int q = st.q;
    const int num_candidates = cfg.num_candidates == 0 ? q : cfg.num_candidates;

    std::copy(st.channel.begin(), st.channel.end(), st.posterior.begin());
    for (int n = 0; n < code.num_vars(); ++n)
        st.decision[n] = symbol(argmin_symbol(
            std::span<const double>(st.channel.data() + std::size_t(n) * q, q)));
    if (cfg.check_at_zero && is_codeword(code, st.decision))
        return {true, 0};

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        horizontal_core(code, st, num_candidates);
        vertical_core(code, st, cfg);
        posterior_core(code, st, cfg);
        if (is_codeword(code, st.decision))
            return {true, iter};
    }
    return {false, cfg.max_iterations};
}

}  // namespace detail

// --- composable steps -----------------------------------------------------

inline message_state init_messages(const ldpc_code& code,
                                   std::span<const cost_table> channel_costs) {
    message_state st;
    detail::flatten_tables(code, channel_costs, st.channel, true);
    detail::setup_state(code, st);
    return st;
}

// One full sweep of check-node updates.  Outgoing tables end up anchored so
// the cost of symbol 0 is zero.  num_candidates <= 0 keeps all symbols.
inline void horizontal_step(const ldpc_code& code, message_state& st,
                            int num_candidates = 0) {
    const int q = code.field().order();
    if (num_candidates == 0) num_candidates = q;
    if (num_candidates < 1 || num_candidates > q)
        throw std::invalid_argument("horizontal_step: candidate count outside [1, q]");
    detail::horizontal_core(code, st, num_candidates);
}

inline void vertical_step(const ldpc_code& code, message_state& st,
                          std::span<const cost_table> channel_costs,
                          const decoder_config& cfg) {
    cfg.validate(code.field());
    detail::flatten_tables(code, channel_costs, st.channel, true);
    detail::vertical_core(code, st, cfg);
}

inline std::pair<std::vector<symbol>, std::vector<cost_table>> posterior_and_decide(
    const ldpc_code& code, message_state& st,
    std::span<const cost_table> channel_costs, const decoder_config& cfg) {
    cfg.validate(code.field());
    detail::flatten_tables(code, channel_costs, st.channel, true);
    detail::posterior_core(code, st, cfg);
    const int q = st.q;
    std::vector<cost_table> posterior(code.num_vars(), cost_table(q));
    for (int n = 0; n < code.num_vars(); ++n)
        std::copy(st.posterior.begin() + std::size_t(n) * q,
                  st.posterior.begin() + std::size_t(n + 1) * q, posterior[n].begin());
    return {std::vector<symbol>(st.decision), std::move(posterior)};
}

// --- whole decoders -------------------------------------------------------

inline decode_result decode(const ldpc_code& code,
                            std::span<const cost_table> channel_costs,
                            const decoder_config& cfg) {
    cfg.validate(code.field());
    message_state st = init_messages(code, channel_costs);
    const detail::decode_status s = detail::decode_core(code, cfg, st);

    decode_result r;
    r.codeword = st.decision;
    r.converged = s.converged;
    r.iterations_used = s.iterations;
    r.infinite_normalizations = st.infinite_normalizations;
    r.support_resets = st.support_resets;
    const int q = st.q;
    r.posterior.assign(code.num_vars(), cost_table(q));
    for (int n = 0; n < code.num_vars(); ++n)
        std::copy(st.posterior.begin() + std::size_t(n) * q,
                  st.posterior.begin() + std::size_t(n + 1) * q, r.posterior[n].begin());
    return r;
}

namespace detail {

// Probability-domain reference decoder on the same trellis kernel with the
// (+, *) algebra.  Message tables are kept normalized; if a constraint wipes
// out all mass the decode is flagged degenerate and continues with flat
// tables.
inline decode_status sumproduct_core(const ldpc_code& code, int max_iterations,
                                     message_state& st, bool& degenerate) {
    const galois_field& gf = code.field();
    const int q = st.q;
    checknode_workspace& ws = st.ws;

    auto argmax_prob = [q](const double* t) {
        int best = 0;
        for (int x = 1; x < q; ++x)
            if (t[x] > t[best]) best = x;
        return symbol(best);
    };

    std::copy(st.channel.begin(), st.channel.end(), st.posterior.begin());
    for (int n = 0; n < code.num_vars(); ++n)
        st.decision[n] = argmax_prob(st.channel.data() + std::size_t(n) * q);
    if (is_codeword(code, st.decision))
        return {true, 0};

    for (int iter = 1; iter <= max_iterations; ++iter) {
        for (int m = 0; m < code.num_checks(); ++m) {
            auto row = code.check_row(m);
            const int d = int(row.size());
            for (int k = 0; k < d; ++k) {
                const code_entry& e = row[k];
                ws.in_ptrs[k] = st.var_to_check.data() + std::size_t(e.edge) * q;
                ws.out_ptrs[k] = st.check_to_var.data() + std::size_t(e.edge) * q;
                st.coeffs[k] = e.coeff;
                ws.cand_ptrs[k] = ws.identity.data();
                ws.candidate_count[k] = q;
            }
            checknode_kernel<sumproduct_algebra>(gf, st.coeffs.data(), d,
                                                 ws.in_ptrs.data(), ws.out_ptrs.data(),
                                                 ws.cand_ptrs.data(),
                                                 ws.candidate_count.data(), false, ws);
            for (int k = 0; k < d; ++k) {
                double* t = ws.out_ptrs[k];
                double total = 0.0;
                for (int x = 0; x < q; ++x) total += t[x];
                if (total <= 0.0) {
                    std::fill(t, t + q, 1.0 / q);
                    degenerate = true;
                } else {
                    for (int x = 0; x < q; ++x) t[x] /= total;
                }
            }
        }

        for (int n = 0; n < code.num_vars(); ++n) {
            auto col = code.var_col(n);
            const int dv = int(col.size());
            const double* p = st.channel.data() + std::size_t(n) * q;
            double* post = st.posterior.data() + std::size_t(n) * q;
            for (int x = 0; x < q; ++x) {
                for (int j = 0; j < dv; ++j)
                    st.tau[j] = st.check_to_var[std::size_t(col[j].edge) * q + x];
                for (int j = 0; j < dv; ++j) {
                    double prod = p[x];
                    for (int j2 = 0; j2 < dv; ++j2)
                        if (j2 != j) prod *= st.tau[j2];
                    st.var_to_check[std::size_t(col[j].edge) * q + x] = prod;
                }
                double full = p[x];
                for (int j = 0; j < dv; ++j) full *= st.tau[j];
                post[x] = full;
            }
            double total = 0.0;
            for (int x = 0; x < q; ++x) total += post[x];
            if (total <= 0.0) {
                std::copy(p, p + q, post);
                degenerate = true;
            } else {
                for (int x = 0; x < q; ++x) post[x] /= total;
            }
            st.decision[n] = argmax_prob(post);
        }
        for (auto col_n = 0; col_n < code.num_vars(); ++col_n) {
            for (const code_entry& e : code.var_col(col_n)) {
                double* z = st.var_to_check.data() + std::size_t(e.edge) * q;
                double total = 0.0;
                for (int x = 0; x < q; ++x) total += z[x];
                if (total <= 0.0) {
                    const double* p = st.channel.data() + std::size_t(col_n) * q;
                    std::copy(p, p + q, z);
                    degenerate = true;
                } else {
                    for (int x = 0; x < q; ++x) z[x] /= total;
                }
            }
        }
        if (is_codeword(code, st.decision))
            return {true, iter};
    }
    return {false, max_iterations};
}

}  // namespace detail

inline decode_result decode_sumproduct(const ldpc_code& code,
                                       std::span<const prob_table> channel_probs,
                                       int max_iterations = 300) {
    if (max_iterations < 0 || max_iterations > 1'000'000)
        throw std::invalid_argument("decoder: max_iterations out of range");
    const int q = code.field().order();
    if (int(channel_probs.size()) != code.num_vars())
        throw std::invalid_argument("decoder: table count does not match code length");
    for (const auto& t : channel_probs) {
        if (int(t.size()) != q)
            throw std::invalid_argument("decoder: table size does not match field order");
        double total = 0.0;
        for (double v : t) {
            if (v < 0.0)
                throw std::invalid_argument("decoder: negative probability");
            total += v;
        }
        if (total < 1.0 - 1e-6 || total > 1.0 + 1e-6)
            throw std::invalid_argument("decoder: probability table does not sum to 1");
    }

    message_state st;
    detail::flatten_tables(code, channel_probs, st.channel, false);
    detail::setup_state(code, st);
    bool degenerate = false;
    const detail::decode_status s =
        detail::sumproduct_core(code, max_iterations, st, degenerate);

    decode_result r;
    r.codeword = st.decision;
    r.converged = s.converged;
    r.iterations_used = s.iterations;
    r.degenerate = degenerate;
    r.posterior.assign(code.num_vars(), cost_table(q));
    for (int n = 0; n < code.num_vars(); ++n)
        std::copy(st.posterior.begin() + std::size_t(n) * q,
                  st.posterior.begin() + std::size_t(n + 1) * q, r.posterior[n].begin());
    return r;
}

}  // namespace nbldpc
