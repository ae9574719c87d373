/**************************************************************************
 * galois.hpp
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

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbldpc {

// Field elements are labels 0..q-1.  For GF(p^m) a label encodes the digit
// vector of a polynomial: value = sum_i c_i * p^i, so for characteristic 2
// the label is the usual bit-vector form and addition is XOR.
using symbol = std::uint8_t;

namespace detail {

// Dense polynomials over GF(p), index = degree, used only while building
// field tables.
using gfp_poly = std::vector<int>;

inline int gfp_poly_deg(const gfp_poly& a) {
    for (int i = int(a.size()) - 1; i >= 0; --i)
        if (a[i] != 0) return i;
    return -1;
}

inline gfp_poly gfp_poly_mul(const gfp_poly& a, const gfp_poly& b, int p) {
    gfp_poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    return r;
}

// In-place remainder of a by monic-leading b.
inline void gfp_poly_mod(gfp_poly& a, const gfp_poly& b, int p) {
    int db = gfp_poly_deg(b);
    assert(db >= 0);
    // multiplicative inverse of b's leading coefficient mod p
    int lead_inv = 1;
    for (int c = 1; c < p; ++c)
        if (b[db] * c % p == 1) { lead_inv = c; break; }
    for (int da = gfp_poly_deg(a); da >= db; da = gfp_poly_deg(a)) {
        int factor = a[da] * lead_inv % p;
        int shift = da - db;
        for (int i = 0; i <= db; ++i)
            a[i + shift] = ((a[i + shift] - factor * b[i]) % p + p) % p;
    }
}

inline bool gfp_poly_is_irreducible(const gfp_poly& f, int p) {
    int m = gfp_poly_deg(f);
    if (m < 1) return false;
    // Trial division by every monic polynomial of degree 1..m/2.  Degrees
    // here are tiny (m <= 8), so brute force beats anything cleverer.
    for (int d = 1; 2 * d <= m; ++d) {
        std::int64_t count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (std::int64_t enc = 0; enc < count; ++enc) {
            gfp_poly g(d + 1, 0);
            std::int64_t e = enc;
            for (int i = 0; i < d; ++i) { g[i] = int(e % p); e /= p; }
            g[d] = 1;
            gfp_poly rem = f;
            gfp_poly_mod(rem, g, p);
            if (gfp_poly_deg(rem) < 0) return false;
        }
    }
    return true;
}

}  // namespace detail

// Table-driven arithmetic for GF(q), 2 <= q <= 256, q a prime power.
// Characteristic-2 extension fields use fixed conventional defining
// polynomials so labels are stable across builds; odd-characteristic
// extensions use the smallest irreducible monic polynomial in digit-encoding
// order, which is equally deterministic.
class galois_field {
public:
    explicit galois_field(int order) : q_(order) {
        if (order < 2 || order > 256)
            throw std::invalid_argument("galois_field: order must be in [2, 256]");
        factorize(order);
        if (m_ == 1) {
            poly_encoding_ = 0;
            build_prime_tables();
        } else {
            detail::gfp_poly f = defining_polynomial();
            poly_encoding_ = encode_poly(f);
            build_extension_tables(f);
        }
        build_inverse_table();
    }

    int order() const { return q_; }
    int characteristic() const { return p_; }
    int degree() const { return m_; }
    bool characteristic_two() const { return p_ == 2; }

    // Digit encoding of the defining polynomial (bit encoding for
    // characteristic 2); 0 for prime fields, which need none.
    std::uint32_t defining_poly() const { return poly_encoding_; }

    symbol add(symbol a, symbol b) const {
        assert(a < q_ && b < q_);
        return add_tab_[std::size_t(a) * q_ + b];
    }

    symbol mul(symbol a, symbol b) const {
        assert(a < q_ && b < q_);
        return mul_tab_[std::size_t(a) * q_ + b];
    }

    symbol neg(symbol a) const {
        assert(a < q_);
        return neg_tab_[a];
    }

    symbol sub(symbol a, symbol b) const { return add(a, neg(b)); }

    symbol inv(symbol a) const {
        assert(a < q_);
        if (a == 0) throw std::domain_error("galois_field: inverse of zero");
        return inv_tab_[a];
    }

    // Raw table access for hot loops that index manually.
    const symbol* add_table() const { return add_tab_.data(); }
    const symbol* mul_table() const { return mul_tab_.data(); }

private:
    void factorize(int order) {
        for (int p = 2; p <= order; ++p) {
            if (order % p != 0) continue;
            int m = 0, v = order;
            while (v % p == 0) { v /= p; ++m; }
            if (v != 1)
                throw std::invalid_argument("galois_field: order " + std::to_string(order) +
                                            " is not a prime power");
            p_ = p;
            m_ = m;
            return;
        }
        throw std::invalid_argument("galois_field: bad order");
    }

    detail::gfp_poly defining_polynomial() const {
        if (p_ == 2) {
            // Conventional choices, bit-encoded low degree first:
            // m=2: x^2+x+1, m=3: x^3+x+1, m=4: x^4+x+1, m=5: x^5+x^2+1,
            // m=6: x^6+x+1, m=7: x^7+x+1, m=8: x^8+x^4+x^3+x+1.
            static constexpr std::uint32_t fixed[9] = {0, 0, 0b111, 0b1011, 0b10011,
                                                       0b100101, 0b1000011, 0b10000011,
                                                       0b100011011};
            std::uint32_t enc = fixed[m_];
            detail::gfp_poly f(m_ + 1, 0);
            for (int i = 0; i <= m_; ++i) f[i] = int((enc >> i) & 1u);
            if (!detail::gfp_poly_is_irreducible(f, 2))
                throw std::logic_error("galois_field: defining polynomial table broken");
            return f;
        }
        // Smallest irreducible monic polynomial of degree m over GF(p).
        std::int64_t count = 1;
        for (int i = 0; i < m_; ++i) count *= p_;
        for (std::int64_t enc = 0; enc < count; ++enc) {
            detail::gfp_poly f(m_ + 1, 0);
            std::int64_t e = enc;
            for (int i = 0; i < m_; ++i) { f[i] = int(e % p_); e /= p_; }
            f[m_] = 1;
            if (detail::gfp_poly_is_irreducible(f, p_)) return f;
        }
        throw std::logic_error("galois_field: no irreducible polynomial found");
    }

    std::uint32_t encode_poly(const detail::gfp_poly& f) const {
        std::uint32_t enc = 0, base = 1;
        for (std::size_t i = 0; i < f.size(); ++i) {
            enc += std::uint32_t(f[i]) * base;
            base *= std::uint32_t(p_);
        }
        return enc;
    }

    void build_prime_tables() {
        add_tab_.resize(std::size_t(q_) * q_);
        mul_tab_.resize(std::size_t(q_) * q_);
        neg_tab_.resize(q_);
        for (int a = 0; a < q_; ++a) {
            neg_tab_[a] = symbol((q_ - a) % q_);
            for (int b = 0; b < q_; ++b) {
                add_tab_[std::size_t(a) * q_ + b] = symbol((a + b) % q_);
                mul_tab_[std::size_t(a) * q_ + b] = symbol(a * b % q_);
            }
        }
    }

    void digits_of(int value, detail::gfp_poly& out) const {
        out.assign(m_, 0);
        for (int i = 0; i < m_; ++i) { out[i] = value % p_; value /= p_; }
    }

    int value_of(const detail::gfp_poly& digits) const {
        int v = 0, base = 1;
        for (int i = 0; i < m_; ++i) { v += digits[i] * base; base *= p_; }
        return v;
    }

    void build_extension_tables(const detail::gfp_poly& f) {
        add_tab_.resize(std::size_t(q_) * q_);
        mul_tab_.resize(std::size_t(q_) * q_);
        neg_tab_.resize(q_);
        detail::gfp_poly da, db;
        for (int a = 0; a < q_; ++a) {
            digits_of(a, da);
            detail::gfp_poly dn(m_, 0);
            for (int i = 0; i < m_; ++i) dn[i] = (p_ - da[i]) % p_;
            neg_tab_[a] = symbol(value_of(dn));
            for (int b = 0; b < q_; ++b) {
                digits_of(b, db);
                detail::gfp_poly s(m_, 0);
                for (int i = 0; i < m_; ++i) s[i] = (da[i] + db[i]) % p_;
                add_tab_[std::size_t(a) * q_ + b] = symbol(value_of(s));
                detail::gfp_poly prod = detail::gfp_poly_mul(da, db, p_);
                detail::gfp_poly_mod(prod, f, p_);
                prod.resize(m_, 0);
                mul_tab_[std::size_t(a) * q_ + b] = symbol(value_of(prod));
            }
        }
    }

    void build_inverse_table() {
        inv_tab_.assign(q_, 0);
        for (int a = 1; a < q_; ++a) {
            int found = -1;
            for (int b = 1; b < q_; ++b) {
                if (mul(symbol(a), symbol(b)) == 1) { found = b; break; }
            }
            if (found < 0)
                throw std::logic_error("galois_field: element without inverse");
            inv_tab_[a] = symbol(found);
        }
    }

    int q_, p_ = 0, m_ = 0;
    std::uint32_t poly_encoding_ = 0;
    std::vector<symbol> add_tab_, mul_tab_, inv_tab_, neg_tab_;
};

}  // namespace nbldpc
