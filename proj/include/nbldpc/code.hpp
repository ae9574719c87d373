/**************************************************************************
 * code.hpp
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
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cost.hpp"
#include "galois.hpp"
#include "rng.hpp"

namespace nbldpc {

// One nonzero entry of the parity-check matrix seen from a row or a column.
// `index` is the variable index in a row view and the check index in a column
// view; `edge` is a global edge id, assigned row-major, shared by both views.
struct code_entry {
    int index;
    symbol coeff;
    int edge;
};

class ldpc_code {
public:
    // `rows[m]` lists (variable index, coefficient) in file order.
    ldpc_code(galois_field field, int num_vars,
              std::vector<std::vector<std::pair<int, symbol>>> rows)
        : field_(std::move(field)), n_vars_(num_vars), n_checks_(int(rows.size())) {
        if (n_vars_ < 1 || n_checks_ < 1)
            throw std::invalid_argument("ldpc_code: empty code");
        check_rows_.resize(n_checks_);
        var_cols_.resize(n_vars_);
        int edge = 0;
        for (int m = 0; m < n_checks_; ++m) {
            if (rows[m].empty())
                throw std::invalid_argument("ldpc_code: check with no variables");
            std::set<int> seen;
            for (auto [n, h] : rows[m]) {
                if (n < 0 || n >= n_vars_)
                    throw std::invalid_argument("ldpc_code: variable index out of range");
                if (h == 0 || int(h) >= field_.order())
                    throw std::invalid_argument("ldpc_code: coefficient outside GF(q)*");
                if (!seen.insert(n).second)
                    throw std::invalid_argument("ldpc_code: parallel edge");
                check_rows_[m].push_back({n, h, edge});
                var_cols_[n].push_back({m, h, edge});
                ++edge;
            }
        }
        n_edges_ = edge;
        rate_ = double(n_vars_ - n_checks_) / double(n_vars_);
    }

    const galois_field& field() const { return field_; }
    int num_vars() const { return n_vars_; }
    int num_checks() const { return n_checks_; }
    int num_edges() const { return n_edges_; }
    double rate() const { return rate_; }

    std::span<const code_entry> check_row(int m) const { return check_rows_[m]; }
    std::span<const code_entry> var_col(int n) const { return var_cols_[n]; }

    int max_check_degree() const {
        std::size_t d = 0;
        for (const auto& r : check_rows_) d = std::max(d, r.size());
        return int(d);
    }
    int max_var_degree() const {
        std::size_t d = 0;
        for (const auto& c : var_cols_) d = std::max(d, c.size());
        return int(d);
    }

private:
    galois_field field_;
    int n_vars_, n_checks_, n_edges_ = 0;
    double rate_;
    std::vector<std::vector<code_entry>> check_rows_;
    std::vector<std::vector<code_entry>> var_cols_;
};

inline std::vector<symbol> syndrome(const ldpc_code& code, std::span<const symbol> x) {
    if (int(x.size()) != code.num_vars())
        throw std::invalid_argument("syndrome: word length does not match code");
    const galois_field& gf = code.field();
    std::vector<symbol> s(code.num_checks(), 0);
    for (int m = 0; m < code.num_checks(); ++m)
        for (const code_entry& e : code.check_row(m))
            s[m] = gf.add(s[m], gf.mul(e.coeff, x[e.index]));
    return s;
}

inline bool is_codeword(const ldpc_code& code, std::span<const symbol> x) {
    auto s = syndrome(code, x);
    return std::all_of(s.begin(), s.end(), [](symbol v) { return v == 0; });
}

struct energy_result {
    bool satisfied;
    double value;
};

// Total cost of a word under per-symbol cost tables.  Constraint violation is
// reported through the flag, not folded into the value.
inline energy_result energy(const ldpc_code& code, std::span<const symbol> x,
                            std::span<const cost_table> costs) {
    if (int(costs.size()) != code.num_vars())
        throw std::invalid_argument("energy: table count does not match code");
    double total = 0.0;
    for (int n = 0; n < code.num_vars(); ++n) {
        if (int(costs[n].size()) != code.field().order())
            throw std::invalid_argument("energy: table size does not match field order");
        total += costs[n][x[n]];
    }
    return {is_codeword(code, x), total};
}

namespace detail {

// Integer tokenizer that remembers line numbers so parse errors can point at
// the offending line.
class token_reader {
public:
    explicit token_reader(std::istream& in) : in_(in) {}

    int line() const { return line_; }

    bool try_next(long& value) {
        int c = in_.get();
        while (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            if (c == '\n') ++line_;
            c = in_.get();
        }
        if (c == std::istream::traits_type::eof()) return false;
        bool negative = false;
        if (c == '-') {
            negative = true;
            c = in_.get();
        }
        if (c < '0' || c > '9')
            throw std::invalid_argument("line " + std::to_string(line_) +
                                        ": unexpected character in code file");
        long v = 0;
        while (c >= '0' && c <= '9') {
            v = v * 10 + (c - '0');
            if (v > 1'000'000'000)
                throw std::invalid_argument("line " + std::to_string(line_) +
                                            ": number out of range");
            c = in_.get();
        }
        if (c != std::istream::traits_type::eof()) in_.unget();
        value = negative ? -v : v;
        return true;
    }

    long next(const char* what) {
        long v;
        if (!try_next(v))
            throw std::invalid_argument("line " + std::to_string(line_) +
                                        ": unexpected end of file, expected " + what);
        return v;
    }

private:
    std::istream& in_;
    int line_ = 1;
};

}  // namespace detail

// Text format, 1-based indices:
//   line 1: N M q
//   line 2: dv_max dc_max
//   line 3: N column degrees
//   line 4: M row degrees
//   then N column blocks of dv_max "check value" pairs, padded with "0 0",
//   then M row blocks of dc_max "variable value" pairs, padded with "0 0".
// Row and column lists must describe the same matrix, coefficient for
// coefficient.
inline ldpc_code parse_code_file(std::istream& in,
                                 std::vector<std::string>* warnings = nullptr) {
    detail::token_reader tok(in);
    auto fail = [&tok](const std::string& msg) -> std::invalid_argument {
        return std::invalid_argument("line " + std::to_string(tok.line()) + ": " + msg);
    };

    const long n_vars = tok.next("variable count");
    const long n_checks = tok.next("check count");
    const long q = tok.next("field order");
    if (n_vars < 1 || n_vars > 1'000'000) throw fail("bad variable count");
    if (n_checks < 1 || n_checks > 1'000'000) throw fail("bad check count");
    galois_field gf = [&] {
        try {
            return galois_field(int(q));
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
    }();

    const long dv_max = tok.next("maximum variable degree");
    const long dc_max = tok.next("maximum check degree");
    if (dv_max < 1 || dv_max > n_checks) throw fail("bad maximum variable degree");
    if (dc_max < 1 || dc_max > n_vars) throw fail("bad maximum check degree");

    std::vector<long> col_deg(n_vars), row_deg(n_checks);
    for (long n = 0; n < n_vars; ++n) {
        col_deg[n] = tok.next("column degree");
        if (col_deg[n] < 0 || col_deg[n] > dv_max) throw fail("column degree out of range");
    }
    for (long m = 0; m < n_checks; ++m) {
        row_deg[m] = tok.next("row degree");
        if (row_deg[m] < 1 || row_deg[m] > dc_max) throw fail("row degree out of range");
        if (row_deg[m] == 1 && warnings)
            warnings->push_back("check " + std::to_string(m + 1) +
                                " has degree 1 and pins its variable to zero");
    }

    using edge_key = std::tuple<long, long, long>;  // (check, var, value)
    std::set<edge_key> from_cols;
    for (long n = 0; n < n_vars; ++n) {
        for (long k = 0; k < dv_max; ++k) {
            long check = tok.next("check index");
            long value = tok.next("coefficient");
            if (k < col_deg[n]) {
                if (check < 1 || check > n_checks) throw fail("check index out of range");
                if (value < 1 || value >= q) throw fail("coefficient outside GF(q)*");
                if (!from_cols.insert({check - 1, n, value}).second)
                    throw fail("parallel edge in column list");
            } else if (check != 0 || value != 0) {
                throw fail("column block does not match its stated degree");
            }
        }
    }

    std::vector<std::vector<std::pair<int, symbol>>> rows(n_checks);
    std::set<std::pair<long, long>> row_positions;
    std::set<edge_key> from_rows;
    for (long m = 0; m < n_checks; ++m) {
        for (long k = 0; k < dc_max; ++k) {
            long var = tok.next("variable index");
            long value = tok.next("coefficient");
            if (k < row_deg[m]) {
                if (var < 1 || var > n_vars) throw fail("variable index out of range");
                if (value < 1 || value >= q) throw fail("coefficient outside GF(q)*");
                if (!row_positions.insert({m, var - 1}).second)
                    throw fail("parallel edge in row list");
                from_rows.insert({m, var - 1, value});
                rows[m].push_back({int(var - 1), symbol(value)});
            } else if (var != 0 || value != 0) {
                throw fail("row block does not match its stated degree");
            }
        }
    }

    long extra;
    if (tok.try_next(extra)) throw fail("trailing data after code description");
    if (from_cols != from_rows)
        throw std::invalid_argument("code file: row list disagrees with column list");

    return ldpc_code(std::move(gf), int(n_vars), std::move(rows));
}

inline ldpc_code parse_code_file(const std::string& text,
                                 std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    return parse_code_file(in, warnings);
}

inline ldpc_code load_code_file(const std::string& path,
                                std::vector<std::string>* warnings = nullptr) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open code file: " + path);
    return parse_code_file(in, warnings);
}

inline void serialize_code(const ldpc_code& code, std::ostream& out) {
    const int dv_max = code.max_var_degree();
    const int dc_max = code.max_check_degree();
    out << code.num_vars() << ' ' << code.num_checks() << ' ' << code.field().order() << '\n';
    out << dv_max << ' ' << dc_max << '\n';
    for (int n = 0; n < code.num_vars(); ++n)
        out << code.var_col(n).size() << (n + 1 < code.num_vars() ? ' ' : '\n');
    for (int m = 0; m < code.num_checks(); ++m)
        out << code.check_row(m).size() << (m + 1 < code.num_checks() ? ' ' : '\n');
    for (int n = 0; n < code.num_vars(); ++n) {
        auto col = code.var_col(n);
        for (int k = 0; k < dv_max; ++k) {
            if (k) out << ' ';
            if (k < int(col.size()))
                out << col[k].index + 1 << ' ' << int(col[k].coeff);
            else
                out << "0 0";
        }
        out << '\n';
    }
    for (int m = 0; m < code.num_checks(); ++m) {
        auto row = code.check_row(m);
        for (int k = 0; k < dc_max; ++k) {
            if (k) out << ' ';
            if (k < int(row.size()))
                out << row[k].index + 1 << ' ' << int(row[k].coeff);
            else
                out << "0 0";
        }
        out << '\n';
    }
}

inline std::string serialize_code(const ldpc_code& code) {
    std::ostringstream out;
    serialize_code(code, out);
    return out.str();
}

// Random (d_v, d_c)-regular code.  Check sockets are dealt to columns by a
// seeded shuffle; collisions inside a column are repaired by swapping the
// offending socket with a randomly chosen one until the graph is simple.
// Coefficients are uniform over GF(q)*.
inline ldpc_code random_regular_code(const galois_field& gf, int num_vars,
                                     int num_checks, int var_degree,
                                     std::uint64_t seed) {
    if (num_vars < 2 || num_checks < 1)
        throw std::invalid_argument("random_regular_code: bad size");
    if (var_degree < 2)
        throw std::invalid_argument("random_regular_code: variable degree must be >= 2");
    if (var_degree > num_checks)
        throw std::invalid_argument("random_regular_code: variable degree exceeds check count");
    const long long sockets = (long long)num_vars * var_degree;
    if (sockets % num_checks != 0)
        throw std::invalid_argument("random_regular_code: N*d_v not divisible by M");
    const long long check_degree = sockets / num_checks;
    if (check_degree < 2 || check_degree > num_vars)
        throw std::invalid_argument("random_regular_code: infeasible check degree");

    rng64 rng(derive_seed(seed, 0));
    std::vector<int> assign(sockets);
    for (long long i = 0; i < sockets; ++i)
        assign[i] = int(i / check_degree);    // check id per socket
    rng.shuffle(assign);

    // Column n owns sockets [n*d_v, (n+1)*d_v).
    for (int pass = 0; pass < 1000; ++pass) {
        bool clean = true;
        for (int n = 0; n < num_vars; ++n) {
            for (int a = 0; a < var_degree; ++a) {
                for (int b = a + 1; b < var_degree; ++b) {
                    long long ia = (long long)n * var_degree + a;
                    long long ib = (long long)n * var_degree + b;
                    if (assign[ia] != assign[ib]) continue;
                    clean = false;
                    std::swap(assign[ib], assign[rng.next_below(sockets)]);
                }
            }
        }
        if (clean) {
            std::vector<std::vector<std::pair<int, symbol>>> rows(num_checks);
            for (int n = 0; n < num_vars; ++n)
                for (int a = 0; a < var_degree; ++a) {
                    symbol coeff = symbol(1 + rng.next_below(std::uint64_t(gf.order() - 1)));
                    rows[assign[(long long)n * var_degree + a]].push_back({n, coeff});
                }
            return ldpc_code(gf, num_vars, std::move(rows));
        }
    }
    throw std::runtime_error("random_regular_code: could not repair duplicate edges");
}

// Draws uniform codewords.  Construction runs one Gauss-Jordan elimination
// over GF(q); sampling then assigns free symbols uniformly and solves the
// pivots, so repeated draws are cheap.
class codeword_sampler {
public:
    explicit codeword_sampler(const ldpc_code& code)
        : gf_(code.field()), n_(code.num_vars()), m_(code.num_checks()),
          a_(std::size_t(m_) * n_, 0) {
        for (int m = 0; m < m_; ++m)
            for (const code_entry& e : code.check_row(m))
                at(m, e.index) = e.coeff;

        int rank = 0;
        for (int col = 0; col < n_; ++col) {
            int pivot = -1;
            if (rank < m_)
                for (int r = rank; r < m_; ++r)
                    if (at(r, col) != 0) { pivot = r; break; }
            if (pivot < 0) {
                free_cols_.push_back(col);
                continue;
            }
            if (pivot != rank)
                for (int c = 0; c < n_; ++c)
                    std::swap(at(pivot, c), at(rank, c));
            const symbol scale = gf_.inv(at(rank, col));
            for (int c = 0; c < n_; ++c)
                at(rank, c) = gf_.mul(at(rank, c), scale);
            for (int r = 0; r < m_; ++r) {
                if (r == rank || at(r, col) == 0) continue;
                const symbol f = at(r, col);
                for (int c = 0; c < n_; ++c)
                    at(r, c) = gf_.sub(at(r, c), gf_.mul(f, at(rank, c)));
            }
            pivot_cols_.push_back(col);
            ++rank;
        }
    }

    std::vector<symbol> sample(std::uint64_t seed) const {
        rng64 rng(derive_seed(seed, 1));
        std::vector<symbol> x(n_, 0);
        for (int col : free_cols_)
            x[col] = symbol(rng.next_below(std::uint64_t(gf_.order())));
        for (int r = int(pivot_cols_.size()) - 1; r >= 0; --r) {
            const int pc = pivot_cols_[r];
            symbol acc = 0;
            for (int c = 0; c < n_; ++c) {
                if (c == pc) continue;
                const symbol h = at_const(r, c);
                if (h != 0) acc = gf_.add(acc, gf_.mul(h, x[c]));
            }
            x[pc] = gf_.neg(acc);
        }
        return x;
    }

private:
    symbol& at(int r, int c) { return a_[std::size_t(r) * n_ + c]; }
    symbol at_const(int r, int c) const { return a_[std::size_t(r) * n_ + c]; }

    galois_field gf_;
    int n_, m_;
    std::vector<symbol> a_;
    std::vector<int> pivot_cols_, free_cols_;
};

inline std::vector<symbol> random_codeword(const ldpc_code& code, std::uint64_t seed) {
    return codeword_sampler(code).sample(seed);
}

}  // namespace nbldpc
