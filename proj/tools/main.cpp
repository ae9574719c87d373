/**************************************************************************
 * main.cpp - nbldpc command line front end
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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nbldpc/sim.hpp>

namespace {

// Exit codes: 0 success, 2 bad usage or configuration, 1 runtime failure.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

long long parse_int(const std::string& s, const char* what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw usage_error(std::string("cannot parse ") + what + ": '" + s + "'");
    }
    if (used != s.size())
        throw usage_error(std::string("cannot parse ") + what + ": '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw usage_error(std::string("cannot parse ") + what + ": '" + s + "'");
    }
    if (used != s.size())
        throw usage_error(std::string("cannot parse ") + what + ": '" + s + "'");
    return v;
}

int run_simulate(const std::string& code_path, const std::string& random_spec,
                 const std::string& variant, double alpha, double beta,
                 int max_iter, int nm, const std::string& snr_spec,
                 std::uint64_t min_frame_errors, std::uint64_t max_trials,
                 std::uint64_t seed, int workers, bool spa, bool random_codewords,
                 bool quiet, const std::string& out_path) {
    nbldpc::run_config cfg;
    cfg.code_path = code_path;
    if (!random_spec.empty()) {
        const auto parts = split(random_spec, ',');
        if (parts.size() != 4)
            throw usage_error("--random wants N,M,dv,q");
        cfg.use_random_code = true;
        cfg.random_n = int(parse_int(parts[0], "--random N"));
        cfg.random_m = int(parse_int(parts[1], "--random M"));
        cfg.random_dv = int(parse_int(parts[2], "--random dv"));
        cfg.random_q = int(parse_int(parts[3], "--random q"));
    }

    if (variant == "plain")
        cfg.decoder.variant = nbldpc::decoder_variant::plain;
    else if (variant == "normalized")
        cfg.decoder.variant = nbldpc::decoder_variant::normalized;
    else if (variant == "offset")
        cfg.decoder.variant = nbldpc::decoder_variant::offset;
    else
        throw usage_error("unknown variant: " + variant);
    cfg.decoder.alpha = alpha;
    cfg.decoder.beta = beta;
    cfg.decoder.max_iterations = max_iter;
    cfg.decoder.num_candidates = nm;
    cfg.use_spa = spa;

    const auto snr_parts = split(snr_spec, ':');
    if (snr_parts.size() != 3)
        throw usage_error("--snr wants START:STOP:STEP in dB");
    cfg.snr_start = parse_double(snr_parts[0], "--snr start");
    cfg.snr_stop = parse_double(snr_parts[1], "--snr stop");
    cfg.snr_step = parse_double(snr_parts[2], "--snr step");

    cfg.min_frame_errors = min_frame_errors;
    cfg.max_trials = max_trials;
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.random_codewords = random_codewords;
    if (!quiet)
        cfg.progress = [](const nbldpc::trial_report& r) {
            std::fprintf(stderr,
                         "%.6g dB: trials=%llu frame_errors=%llu fer=%.3g ber=%.3g avg_it=%.3g\n",
                         r.ebn0_db, (unsigned long long)r.trials,
                         (unsigned long long)r.frame_errors, r.fer, r.ber,
                         r.avg_iterations);
        };

    const auto reports = nbldpc::run_ber_sweep(cfg);
    nbldpc::write_csv_file(reports, out_path);
    return 0;
}

int run_bench(int q, int dc, const std::string& nm_list, std::uint64_t reps,
              const std::string& out_path) {
    std::vector<int> counts;
    if (!nm_list.empty())
        for (const std::string& p : split(nm_list, ','))
            counts.push_back(int(parse_int(p, "--nm entry")));
    const auto rows = nbldpc::run_checknode_bench(q, dc, counts, reps);
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + out_path);
    nbldpc::write_bench_csv(rows, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-binary LDPC decoding toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a BER/FER sweep over an AWGN channel");
    std::string code_path, random_spec, variant = "plain", snr_spec, out_path;
    double alpha = 1.0, beta = 0.0;
    int max_iter = 300, nm = 0, workers = 1;
    std::uint64_t min_frame_errors = 100, max_trials = 100000, seed = 1;
    bool spa = false, random_codewords = false, quiet = false;
    sim->add_option("--code", code_path, "parity-check matrix file");
    sim->add_option("--random", random_spec,
                    "random regular code N,M,dv,q (seeded from --seed)");
    sim->add_option("--variant", variant, "plain|normalized|offset")
        ->check(CLI::IsMember({"plain", "normalized", "offset"}));
    sim->add_option("--alpha", alpha, "scale factor for the normalized variant");
    sim->add_option("--beta", beta, "offset for the offset variant");
    sim->add_option("--max-iter", max_iter, "decoding iteration cap");
    sim->add_option("--nm", nm, "candidate symbols per edge (0 keeps all q)");
    sim->add_option("--snr", snr_spec, "Eb/N0 sweep START:STOP:STEP in dB")->required();
    sim->add_option("--min-frame-errors", min_frame_errors,
                    "stop a point after this many frame errors (0: never stop early)");
    sim->add_option("--max-trials", max_trials, "frame cap per point");
    sim->add_option("--seed", seed, "master seed");
    sim->add_option("--workers", workers, "worker threads (results do not depend on this)");
    sim->add_flag("--spa", spa, "use the sum-product decoder instead of min-sum");
    sim->add_flag("--random-codewords", random_codewords,
                  "send random codewords instead of the all-zero word");
    sim->add_flag("--quiet", quiet, "suppress per-point progress on stderr");
    sim->add_option("--out", out_path, "output CSV path")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "time check-node updates");
    int bq = 0, bdc = 0;
    std::string bnm;
    std::uint64_t breps = 1000;
    std::string bout;
    bench->add_option("--q", bq, "field order")->required();
    bench->add_option("--dc", bdc, "check degree")->required();
    bench->add_option("--nm", bnm, "comma list of candidate counts to time");
    bench->add_option("--reps", breps, "updates per measurement");
    bench->add_option("--out", bout, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed())
            return run_simulate(code_path, random_spec, variant, alpha, beta, max_iter,
                                nm, snr_spec, min_frame_errors, max_trials, seed,
                                workers, spa, random_codewords, quiet, out_path);
        return run_bench(bq, bdc, bnm, breps, bout);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
