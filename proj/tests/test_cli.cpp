/**************************************************************************
 * test_cli.cpp
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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(NBLDPC_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kSweepArgs =
    "simulate --random 16,8,2,4 --snr 6:7:1 --min-frame-errors 2 "
    "--max-trials 64 --seed 3 --max-iter 20 --quiet";

}  // namespace

TEST_CASE("the sweep command writes a well-formed csv and exits cleanly") {
    const std::string out = "/tmp/nbldpc_cli_a.csv";
    std::remove(out.c_str());
    REQUIRE(run_cli(std::string(kSweepArgs) + " --out " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.rfind("ebn0_db,trials,bit_errors,symbol_errors,frame_errors,"
                     "ber,ser,fer,avg_iterations\n", 0) == 0);
    // Header plus the two sweep points.
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 3);
}

TEST_CASE("repeated runs and different worker counts give identical files") {
    const std::string a = "/tmp/nbldpc_cli_b1.csv";
    const std::string b = "/tmp/nbldpc_cli_b2.csv";
    const std::string c = "/tmp/nbldpc_cli_b3.csv";
    REQUIRE(run_cli(std::string(kSweepArgs) + " --out " + a) == 0);
    REQUIRE(run_cli(std::string(kSweepArgs) + " --out " + b) == 0);
    REQUIRE(run_cli(std::string(kSweepArgs) + " --workers 4 --out " + c) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == slurp(c));
}

TEST_CASE("usage problems exit with status 2") {
    CHECK(run_cli("") == 2);                       // no subcommand
    CHECK(run_cli("simulate --out /tmp/x.csv") == 2);   // missing --snr
    CHECK(run_cli("simulate --snr 1:2:1") == 2);        // missing --out
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli(std::string(kSweepArgs) + " --wat --out /tmp/x.csv") == 2);
    CHECK(run_cli("simulate --random 16,8,2 --snr 1:1:1 --out /tmp/x.csv") == 2);
    CHECK(run_cli("simulate --random 16,8,2,4 --snr nope --out /tmp/x.csv") == 2);
    CHECK(run_cli("simulate --random 16,8,2,4 --snr nan:3:0.5 --out /tmp/x.csv") == 2);
    CHECK(run_cli("simulate --random 16,8,2,4 --snr 1:1:1 --variant sideways "
                  "--out /tmp/x.csv") == 2);
    // alpha is reserved for the normalized variant
    CHECK(run_cli("simulate --random 16,8,2,4 --snr 1:1:1 --alpha 0.8 "
                  "--out /tmp/x.csv") == 2);
    CHECK(run_cli("simulate --random 16,8,2,4 --snr 1:1:1 --nm 9 "
                  "--out /tmp/x.csv") == 2);
    CHECK(run_cli("bench --dc 3 --out /tmp/x.csv") == 2);      // missing --q
    CHECK(run_cli("bench --q 9999 --dc 3 --out /tmp/x.csv") == 2);
}

TEST_CASE("runtime failures exit with status 1") {
    CHECK(run_cli("simulate --code /tmp/nbldpc_definitely_missing.txt "
                  "--snr 1:1:1 --quiet --out /tmp/x.csv") == 1);
    CHECK(run_cli(std::string(kSweepArgs) + " --out /no-such-dir/x.csv") == 1);
}

TEST_CASE("help is not an error") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("simulate --help") == 0);
}

TEST_CASE("the bench command emits one row per method") {
    const std::string out = "/tmp/nbldpc_cli_bench.csv";
    std::remove(out.c_str());
    REQUIRE(run_cli("bench --q 8 --dc 3 --nm 2,4 --reps 64 --out " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.rfind("q,check_degree,method,num_candidates,reps,ns_per_update\n", 0) == 0);
    CHECK(text.find("full") != std::string::npos);
    CHECK(text.find("truncated") != std::string::npos);
    CHECK(text.find("oracle") != std::string::npos);
}
