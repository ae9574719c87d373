/**************************************************************************
 * sim.hpp
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
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "channel.hpp"
#include "code.hpp"
#include "decoder.hpp"
#include "rng.hpp"

namespace nbldpc {

// Frame-error-rate measurement over an Eb/N0 sweep.  Reproducibility rules:
// every trial derives its own generator seeds from (master seed, sweep point,
// trial index), trials are scheduled in fixed-size batches whose boundaries do
// not depend on the worker count, and all accumulators are integers, so the
// same configuration always produces byte-identical reports, with any number
// of workers.

struct trial_report {
    double ebn0_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t sum_iterations = 0;
    double ber = 0.0;
    double ser = 0.0;
    double fer = 0.0;
    double avg_iterations = 0.0;
};

struct run_config {
    std::string code_path;                 // file source ...
    bool use_random_code = false;          // ... or seeded random regular code
    int random_n = 0, random_m = 0, random_dv = 0, random_q = 0;

    decoder_config decoder;
    bool use_spa = false;

    double snr_start = 1.0, snr_stop = 3.0, snr_step = 0.5;
    std::uint64_t min_frame_errors = 100;  // 0 disables early stopping
    std::uint64_t max_trials = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    bool random_codewords = false;         // default sends the all-zero word

    // Observer only; the results do not depend on it.
    std::function<void(const trial_report&)> progress;
};

namespace detail {

constexpr std::uint64_t seed_stream_code = 0xC0DEull;
constexpr std::uint64_t seed_stream_point = 0x505000ull;
constexpr std::uint64_t trial_batch_size = 256;

struct trial_context {
    message_state st;
    std::vector<symbol> sent;
    std::vector<double> amps, received;

    trial_context(const ldpc_code& code) {
        const int q = code.field().order();
        st.channel.assign(std::size_t(code.num_vars()) * q, 0.0);
        setup_state(code, st);
        sent.assign(code.num_vars(), 0);
        const std::size_t samples = std::size_t(code.num_vars()) * code.field().degree();
        amps.assign(samples, 0.0);
        received.assign(samples, 0.0);
    }
};

// Re-seeds the variable-to-check tables from a freshly written channel block.
inline void reset_messages(const ldpc_code& code, message_state& st) {
    const int q = st.q;
    for (int n = 0; n < code.num_vars(); ++n) {
        const double* row = st.channel.data() + std::size_t(n) * q;
        for (const code_entry& e : code.var_col(n))
            std::copy(row, row + q, st.var_to_check.data() + std::size_t(e.edge) * q);
    }
}

struct trial_counts {
    std::uint64_t bits = 0, symbols = 0, frames = 0, iterations = 0;
};

inline trial_counts run_one_trial(const ldpc_code& code, const channel_params& params,
                                  const run_config& cfg,
                                  const codeword_sampler* sampler,
                                  std::uint64_t trial_seed, trial_context& ctx) {
    const galois_field& gf = code.field();
    const int q = gf.order();
    const int n_vars = code.num_vars();

    if (sampler)
        ctx.sent = sampler->sample(derive_seed(trial_seed, 1));
    else
        std::fill(ctx.sent.begin(), ctx.sent.end(), symbol(0));

    modulate_into(gf, ctx.sent, ctx.amps.data());
    transmit_into(ctx.amps, params, derive_seed(trial_seed, 0), ctx.received.data());
    symbol_costs_into(gf, ctx.received, params, ctx.st.channel.data());

    decode_status status{};
    if (cfg.use_spa) {
        // Costs to normalized probabilities, row by row, in place.
        for (int n = 0; n < n_vars; ++n) {
            double* row = ctx.st.channel.data() + std::size_t(n) * q;
            double total = 0.0;
            for (int x = 0; x < q; ++x) {
                row[x] = std::exp(-row[x]);
                total += row[x];
            }
            for (int x = 0; x < q; ++x) row[x] /= total;
        }
        reset_messages(code, ctx.st);
        bool degenerate = false;
        status = sumproduct_core(code, cfg.decoder.max_iterations, ctx.st, degenerate);
    } else {
        reset_messages(code, ctx.st);
        status = decode_core(code, cfg.decoder, ctx.st);
    }

    trial_counts counts;
    counts.iterations = std::uint64_t(status.iterations);
    for (int n = 0; n < n_vars; ++n) {
        const unsigned diff = unsigned(ctx.st.decision[n]) ^ unsigned(ctx.sent[n]);
        if (diff) {
            ++counts.symbols;
            counts.bits += std::uint64_t(std::popcount(diff));
        }
    }
    if (counts.symbols) counts.frames = 1;
    return counts;
}

}  // namespace detail

inline std::vector<trial_report> run_ber_sweep(const ldpc_code& code,
                                               const run_config& cfg) {
    if (cfg.workers < 1 || cfg.workers > 256)
        throw std::invalid_argument("simulation: worker count outside [1, 256]");
    if (cfg.max_trials < 1)
        throw std::invalid_argument("simulation: max_trials must be >= 1");
    cfg.decoder.validate(code.field());

    const int bits_per_symbol = code.field().degree();   // rejects odd characteristic
    if (code.field().characteristic() != 2)
        throw std::invalid_argument("simulation: BPSK mapping needs a power-of-two field");
    const auto points = ebn0_sweep(cfg.snr_start, cfg.snr_stop, cfg.snr_step,
                                   code.rate(), bits_per_symbol);

    std::optional<codeword_sampler> sampler;
    if (cfg.random_codewords) sampler.emplace(code);
    const codeword_sampler* sampler_ptr = sampler ? &*sampler : nullptr;

    const int workers = cfg.workers;
    std::vector<detail::trial_context> contexts;
    contexts.reserve(workers);
    for (int w = 0; w < workers; ++w) contexts.emplace_back(code);

    std::vector<trial_report> reports;
    for (std::size_t ip = 0; ip < points.size(); ++ip) {
        const channel_params& params = points[ip];
        const std::uint64_t point_seed =
            derive_seed(cfg.seed, detail::seed_stream_point + ip);

        trial_report rep;
        rep.ebn0_db = params.ebn0_db;
        std::uint64_t done = 0;
        while (done < cfg.max_trials &&
               (cfg.min_frame_errors == 0 || rep.frame_errors < cfg.min_frame_errors)) {
            const std::uint64_t batch =
                std::min<std::uint64_t>(detail::trial_batch_size, cfg.max_trials - done);

            std::vector<detail::trial_counts> partial(workers);
            std::vector<std::exception_ptr> errors(workers);
            auto work = [&](int w) {
                try {
                    detail::trial_counts& acc = partial[w];
                    for (std::uint64_t i = w; i < batch; i += std::uint64_t(workers)) {
                        const std::uint64_t trial_seed = derive_seed(point_seed, done + i);
                        const detail::trial_counts c = detail::run_one_trial(
                            code, params, cfg, sampler_ptr, trial_seed, contexts[w]);
                        acc.bits += c.bits;
                        acc.symbols += c.symbols;
                        acc.frames += c.frames;
                        acc.iterations += c.iterations;
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            };
            if (workers == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(workers);
                for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
                for (auto& t : pool) t.join();
            }
            for (int w = 0; w < workers; ++w)
                if (errors[w]) std::rethrow_exception(errors[w]);
            for (int w = 0; w < workers; ++w) {
                rep.bit_errors += partial[w].bits;
                rep.symbol_errors += partial[w].symbols;
                rep.frame_errors += partial[w].frames;
                rep.sum_iterations += partial[w].iterations;
            }
            done += batch;
        }
        rep.trials = done;
        const double denom_bits = double(done) * code.num_vars() * bits_per_symbol;
        const double denom_syms = double(done) * code.num_vars();
        rep.ber = done ? double(rep.bit_errors) / denom_bits : 0.0;
        rep.ser = done ? double(rep.symbol_errors) / denom_syms : 0.0;
        rep.fer = done ? double(rep.frame_errors) / double(done) : 0.0;
        rep.avg_iterations = done ? double(rep.sum_iterations) / double(done) : 0.0;
        reports.push_back(rep);
        if (cfg.progress) cfg.progress(rep);
    }
    return reports;
}

inline ldpc_code build_code(const run_config& cfg) {
    if (cfg.use_random_code) {
        if (!cfg.code_path.empty())
            throw std::invalid_argument("simulation: both a code file and a random code given");
        galois_field gf(cfg.random_q);
        return random_regular_code(gf, cfg.random_n, cfg.random_m, cfg.random_dv,
                                   derive_seed(cfg.seed, detail::seed_stream_code));
    }
    if (cfg.code_path.empty())
        throw std::invalid_argument("simulation: no code source given");
    return load_code_file(cfg.code_path);
}

inline std::vector<trial_report> run_ber_sweep(const run_config& cfg) {
    const ldpc_code code = build_code(cfg);
    return run_ber_sweep(code, cfg);
}

namespace detail {

inline std::string format_g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

inline void write_csv(std::span<const trial_report> reports, std::ostream& out) {
    std::vector<trial_report> sorted(reports.begin(), reports.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const trial_report& a, const trial_report& b) { return a.ebn0_db < b.ebn0_db; });
    out << "ebn0_db,trials,bit_errors,symbol_errors,frame_errors,ber,ser,fer,avg_iterations\n";
    for (const trial_report& r : sorted) {
        out << detail::format_g6(r.ebn0_db) << ',' << r.trials << ',' << r.bit_errors << ','
            << r.symbol_errors << ',' << r.frame_errors << ',' << detail::format_g6(r.ber)
            << ',' << detail::format_g6(r.ser) << ',' << detail::format_g6(r.fer) << ','
            << detail::format_g6(r.avg_iterations) << '\n';
    }
}

inline std::string csv_string(std::span<const trial_report> reports) {
    std::ostringstream out;
    write_csv(reports, out);
    return out.str();
}

inline void write_csv_file(std::span<const trial_report> reports, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    write_csv(reports, out);
}

// --- check-node timing ----------------------------------------------------

namespace detail {

// One prebuilt random instance plus the buffers a timed update needs.
struct bench_instance {
    galois_field gf;
    int degree;
    std::vector<symbol> coeffs;
    std::vector<double> in_flat, out_flat;
    std::vector<const double*> in_ptrs;
    std::vector<double*> out_ptrs;
    std::vector<cost_table> in_tables;
    checknode_workspace ws;

    bench_instance(int q, int d, std::uint64_t seed) : gf(q), degree(d) {
        rng64 rng(derive_seed(seed, 0x3E));
        coeffs.resize(d);
        in_flat.resize(std::size_t(d) * q);
        out_flat.resize(std::size_t(d) * q);
        in_ptrs.resize(d);
        out_ptrs.resize(d);
        in_tables.assign(d, cost_table(q));
        for (int e = 0; e < d; ++e) {
            coeffs[e] = symbol(1 + rng.next_below(std::uint64_t(q - 1)));
            for (int x = 0; x < q; ++x) {
                const double c = double(rng.next_below(100000)) / 1000.0;
                in_flat[std::size_t(e) * q + x] = c;
                in_tables[e][x] = c;
            }
            in_ptrs[e] = in_flat.data() + std::size_t(e) * q;
            out_ptrs[e] = out_flat.data() + std::size_t(e) * q;
        }
        ws.prepare(q, d);
    }
};

// Runs `reps` min-sum updates and returns nanoseconds per update.
// num_candidates == 0 times the full update; 1..q times the truncated one,
// candidate selection included.
inline double time_minsum_update(bench_instance& inst, int num_candidates,
                                 std::uint64_t reps, double* sink_out = nullptr) {
    const int q = inst.gf.order();
    const int d = inst.degree;
    checknode_workspace& ws = inst.ws;
    const bool truncated = num_candidates >= 1 && num_candidates < q;
    if (truncated)
        ws.candidates.resize(std::size_t(d) * num_candidates);

    auto update = [&] {
        for (int e = 0; e < d; ++e) {
            if (truncated) {
                int* slot = ws.candidates.data() + std::size_t(e) * num_candidates;
                select_candidates(std::span<const double>(inst.in_ptrs[e], q),
                                  num_candidates, ws.order, slot);
                ws.cand_ptrs[e] = slot;
                ws.candidate_count[e] = num_candidates;
            } else {
                ws.cand_ptrs[e] = ws.identity.data();
                ws.candidate_count[e] = q;
            }
        }
        checknode_kernel<minsum_algebra>(inst.gf, inst.coeffs.data(), d,
                                         inst.in_ptrs.data(), inst.out_ptrs.data(),
                                         ws.cand_ptrs.data(), ws.candidate_count.data(),
                                         false, ws);
    };

    update();   // warm caches and tables
    double sink = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t r = 0; r < reps; ++r) {
        update();
        sink += inst.out_flat[0];
    }
    const auto t1 = std::chrono::steady_clock::now();
    if (sink_out) *sink_out = sink;
    const double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    return ns / double(reps);
}

inline double time_oracle_update(bench_instance& inst, std::uint64_t reps,
                                 double* sink_out = nullptr) {
    double sink = 0.0;
    std::span<const symbol> coeffs(inst.coeffs);
    std::span<const cost_table> inputs(inst.in_tables);
    auto warm = checknode_oracle(inst.gf, coeffs, inputs);
    sink += warm[0][0];
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t r = 0; r < reps; ++r) {
        auto out = checknode_oracle(inst.gf, coeffs, inputs);
        sink += out[0][0];
    }
    const auto t1 = std::chrono::steady_clock::now();
    if (sink_out) *sink_out = sink;
    const double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    return ns / double(reps);
}

}  // namespace detail

struct bench_row {
    int q = 0;
    int check_degree = 0;
    std::string method;       // "full", "truncated", "oracle"
    int num_candidates = 0;   // 0 where it does not apply
    std::uint64_t reps = 0;
    double ns_per_update = 0.0;
};

// Times the full DP update, the truncated update for each requested candidate
// count, and the enumeration reference when the instance is small enough for
// it.
inline std::vector<bench_row> run_checknode_bench(int q, int check_degree,
                                                  std::span<const int> candidate_counts,
                                                  std::uint64_t reps,
                                                  std::uint64_t seed = 1) {
    if (check_degree < 1 || check_degree > 64)
        throw std::invalid_argument("bench: check degree outside [1, 64]");
    if (reps < 1)
        throw std::invalid_argument("bench: reps must be >= 1");
    detail::bench_instance inst(q, check_degree, seed);

    std::vector<bench_row> rows;
    rows.push_back({q, check_degree, "full", 0, reps,
                    detail::time_minsum_update(inst, 0, reps)});
    for (int nm : candidate_counts) {
        if (nm < 1 || nm > q)
            throw std::invalid_argument("bench: candidate count outside [1, q]");
        rows.push_back({q, check_degree, "truncated", nm, reps,
                        detail::time_minsum_update(inst, nm, reps)});
    }
    double configs = 1.0;
    for (int i = 0; i < check_degree - 1; ++i) configs *= q;
    if (configs <= 1e6) {
        const std::uint64_t oracle_reps = std::max<std::uint64_t>(
            1, std::min<std::uint64_t>(reps, std::uint64_t(2e7 / configs) + 1));
        rows.push_back({q, check_degree, "oracle", 0, oracle_reps,
                        detail::time_oracle_update(inst, oracle_reps)});
    }
    return rows;
}

inline void write_bench_csv(std::span<const bench_row> rows, std::ostream& out) {
    out << "q,check_degree,method,num_candidates,reps,ns_per_update\n";
    for (const bench_row& r : rows)
        out << r.q << ',' << r.check_degree << ',' << r.method << ',' << r.num_candidates
            << ',' << r.reps << ',' << detail::format_g6(r.ns_per_update) << '\n';
}

}  // namespace nbldpc
