#pragma once

// Shared plumbing: error kinds, exponent integers, dynamic bit vectors and
// bit matrices over GF(2).

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace debruijn {

enum class Errc {
    invalid_modulus,
    unsupported_degree,
    ambiguity,
    resource,
    unsupported_seed,
    corrupt_table,
    missing_entry,
    invalid_subfield,
    domain,
    not_found,
    budget,
    invalid_input,
    disconnected,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::invalid_modulus: return "invalid-modulus";
        case Errc::unsupported_degree: return "unsupported-degree";
        case Errc::ambiguity: return "ambiguity";
        case Errc::resource: return "resource";
        case Errc::unsupported_seed: return "unsupported-seed";
        case Errc::corrupt_table: return "corrupt-table";
        case Errc::missing_entry: return "missing-entry";
        case Errc::invalid_subfield: return "invalid-subfield";
        case Errc::domain: return "domain";
        case Errc::not_found: return "not-found";
        case Errc::budget: return "budget";
        case Errc::invalid_input: return "invalid-input";
        case Errc::disconnected: return "disconnected";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Exponents live modulo 2^n - 1 and n reaches the hundreds.
using ExpInt = mpz_class;

inline ExpInt mersenne(unsigned n) {
    ExpInt m;
    mpz_ui_pow_ui(m.get_mpz_t(), 2, n);
    return m - 1;
}

inline ExpInt mod_nonneg(const ExpInt& a, const ExpInt& m) {
    ExpInt r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool fits_u64(const ExpInt& a) {
    return a >= 0 && mpz_sizeinbase(a.get_mpz_t(), 2) <= 64;
}

inline uint64_t to_u64(const ExpInt& a) {
    if (!fits_u64(a)) throw Error(Errc::domain, "value does not fit 64 bits");
    uint64_t lo = 0;
    mpz_export(&lo, nullptr, -1, sizeof(lo), 0, 0, a.get_mpz_t());
    return lo;
}

inline ExpInt from_u64(uint64_t v) {
    ExpInt r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return r;
}

inline ExpInt parse_exp(const std::string& s) {
    ExpInt r;
    if (s.empty() || r.set_str(s, 10) != 0) throw Error(Errc::invalid_input, "bad integer '" + s + "'");
    return r;
}

inline std::string to_dec(const ExpInt& a) { return a.get_str(10); }

// Dynamic bit string, bit i stored in word i/64.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(size_t nbits) : n_(nbits), w_((nbits + 63) / 64, 0) {}

    static BitVec from_u64(uint64_t v, size_t nbits) {
        BitVec b(nbits);
        for (size_t i = 0; i < nbits && i < 64; ++i)
            if ((v >> i) & 1) b.set(i);
        return b;
    }

    // "1011" means bit0=1, bit1=0, ...
    static BitVec from_string(const std::string& s) {
        BitVec b(s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') b.set(i);
            else if (s[i] != '0') throw Error(Errc::invalid_input, "bad bit string '" + s + "'");
        }
        return b;
    }

    size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    bool operator[](size_t i) const { return get(i); }
    void set(size_t i, bool v = true) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v) w_[i >> 6] |= m;
        else w_[i >> 6] &= ~m;
    }
    void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    void push_back(bool v) {
        if ((n_ & 63) == 0) w_.push_back(0);
        ++n_;
        set(n_ - 1, v);
    }

    void resize(size_t nbits) {
        w_.resize((nbits + 63) / 64, 0);
        size_t old = n_;
        n_ = nbits;
        if (nbits < old) trim();
    }

    BitVec& operator^=(const BitVec& o) {
        for (size_t i = 0; i < w_.size() && i < o.w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    BitVec& operator&=(const BitVec& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= i < o.w_.size() ? o.w_[i] : 0;
        return *this;
    }
    friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }

    size_t popcount() const {
        size_t c = 0;
        for (uint64_t x : w_) c += std::popcount(x);
        return c;
    }
    bool parity() const {
        uint64_t x = 0;
        for (uint64_t y : w_) x ^= y;
        return std::popcount(x) & 1;
    }
    bool dot(const BitVec& o) const {
        uint64_t x = 0;
        for (size_t i = 0; i < w_.size() && i < o.w_.size(); ++i) x ^= w_[i] & o.w_[i];
        return std::popcount(x) & 1;
    }
    bool subset_of(const BitVec& o) const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~(i < o.w_.size() ? o.w_[i] : 0)) return false;
        return true;
    }
    bool intersects(const BitVec& o) const {
        for (size_t i = 0; i < w_.size() && i < o.w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    BitVec& operator|=(const BitVec& o) {
        for (size_t i = 0; i < w_.size() && i < o.w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    bool any() const {
        for (uint64_t x : w_)
            if (x) return true;
        return false;
    }
    bool none() const { return !any(); }

    // Highest set bit, or -1.
    long highest() const {
        for (size_t i = w_.size(); i-- > 0;)
            if (w_[i]) return long(i * 64 + 63 - std::countl_zero(w_[i]));
        return -1;
    }

    uint64_t to_u64() const { return w_.empty() ? 0 : w_[0]; }

    // Bits [from, from+len) as a new vector.
    BitVec slice(size_t from, size_t len) const {
        BitVec r(len);
        for (size_t i = 0; i < len; ++i)
            if (get(from + i)) r.set(i);
        return r;
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for (size_t i = 0; i < n_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    // Hex of the bit string read left to right in nibbles (bit0 is the MSB of
    // the first nibble); trailing partial nibble padded with zeros.
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        for (size_t i = 0; i < n_; i += 4) {
            int v = 0;
            for (size_t k = 0; k < 4; ++k) v = (v << 1) | ((i + k < n_ && get(i + k)) ? 1 : 0);
            s.push_back(digits[v]);
        }
        return s;
    }

    static BitVec from_hex(const std::string& hex, size_t nbits) {
        if (hex.size() * 4 < nbits) throw Error(Errc::invalid_input, "hex string too short");
        BitVec b(nbits);
        for (size_t d = 0; d < hex.size(); ++d) {
            char c = hex[d];
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else throw Error(Errc::invalid_input, "bad hex digit");
            for (size_t k = 0; k < 4; ++k)
                if (d * 4 + k < nbits && ((v >> (3 - k)) & 1)) b.set(d * 4 + k);
        }
        return b;
    }

    const std::vector<uint64_t>& words() const { return w_; }

    friend bool operator==(const BitVec& a, const BitVec& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
    friend bool operator!=(const BitVec& a, const BitVec& b) { return !(a == b); }
    // Orders by length, then lexicographically on bit0, bit1, ...
    friend bool operator<(const BitVec& a, const BitVec& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        for (size_t i = 0; i < a.n_; ++i)
            if (a.get(i) != b.get(i)) return !a.get(i);
        return false;
    }

    size_t hash() const {
        size_t h = n_;
        for (uint64_t x : w_) h = h * 1000003u ^ std::hash<uint64_t>{}(x);
        return h;
    }

private:
    void trim() {
        if (n_ & 63) w_.back() &= (uint64_t(1) << (n_ & 63)) - 1;
    }

    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

struct BitVecHash {
    size_t operator()(const BitVec& b) const { return b.hash(); }
};

// Square matrix over GF(2), stored by rows.  Row vectors multiply from the
// left: (v*A)_j = sum_i v_i A_ij.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(size_t n) : n_(n), rows_(n, BitVec(n)) {}

    static BitMatrix identity(size_t n) {
        BitMatrix m(n);
        for (size_t i = 0; i < n; ++i) m.rows_[i].set(i);
        return m;
    }

    size_t size() const { return n_; }
    bool get(size_t i, size_t j) const { return rows_[i].get(j); }
    void set(size_t i, size_t j, bool v = true) { rows_[i].set(j, v); }
    const BitVec& row(size_t i) const { return rows_[i]; }
    BitVec& row(size_t i) { return rows_[i]; }

    BitVec column(size_t j) const {
        BitVec c(n_);
        for (size_t i = 0; i < n_; ++i)
            if (rows_[i].get(j)) c.set(i);
        return c;
    }

    friend BitVec operator*(const BitVec& v, const BitMatrix& a) {
        BitVec r(a.n_);
        for (size_t i = 0; i < a.n_; ++i)
            if (v.get(i)) r ^= a.rows_[i];
        return r;
    }

    // A*x for a column vector x.
    BitVec apply(const BitVec& x) const {
        BitVec r(n_);
        for (size_t i = 0; i < n_; ++i)
            if (rows_[i].dot(x)) r.set(i);
        return r;
    }

    friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
        BitMatrix r(a.n_);
        for (size_t i = 0; i < a.n_; ++i) r.rows_[i] = a.rows_[i] * b;
        return r;
    }

    friend bool operator==(const BitMatrix& a, const BitMatrix& b) { return a.rows_ == b.rows_; }

    BitMatrix transpose() const {
        BitMatrix t(n_);
        for (size_t i = 0; i < n_; ++i)
            for (size_t j = 0; j < n_; ++j)
                if (get(i, j)) t.set(j, i);
        return t;
    }

    // Solves M x = b (x column).  Returns false when M is singular.
    bool solve(const BitVec& b, BitVec& x) const {
        std::vector<BitVec> aug(n_, BitVec(n_ + 1));
        for (size_t i = 0; i < n_; ++i) {
            for (size_t j = 0; j < n_; ++j)
                if (get(i, j)) aug[i].set(j);
            if (b.get(i)) aug[i].set(n_);
        }
        for (size_t c = 0; c < n_; ++c) {
            size_t p = c;
            while (p < n_ && !aug[p].get(c)) ++p;
            if (p == n_) return false;
            std::swap(aug[p], aug[c]);
            for (size_t r = 0; r < n_; ++r)
                if (r != c && aug[r].get(c)) aug[r] ^= aug[c];
        }
        x = BitVec(n_);
        for (size_t i = 0; i < n_; ++i)
            if (aug[i].get(n_)) x.set(i);
        return true;
    }

    bool inverse(BitMatrix& out) const {
        std::vector<BitVec> aug(n_, BitVec(2 * n_));
        for (size_t i = 0; i < n_; ++i) {
            for (size_t j = 0; j < n_; ++j)
                if (get(i, j)) aug[i].set(j);
            aug[i].set(n_ + i);
        }
        for (size_t c = 0; c < n_; ++c) {
            size_t p = c;
            while (p < n_ && !aug[p].get(c)) ++p;
            if (p == n_) return false;
            std::swap(aug[p], aug[c]);
            for (size_t r = 0; r < n_; ++r)
                if (r != c && aug[r].get(c)) aug[r] ^= aug[c];
        }
        out = BitMatrix(n_);
        for (size_t i = 0; i < n_; ++i) out.rows_[i] = aug[i].slice(n_, n_);
        return true;
    }

private:
    size_t n_ = 0;
    std::vector<BitVec> rows_;
};

inline BitMatrix mat_pow(const BitMatrix& a, ExpInt e) {
    BitMatrix r = BitMatrix::identity(a.size());
    BitMatrix b = a;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = r * b;
        e >>= 1;
        if (e > 0) b = b * b;
    }
    return r;
}

// Seeded generator.  Bounded draws use rejection instead of
// std::uniform_int_distribution, whose output is library-specific.
using Rng = std::mt19937_64;

inline uint64_t draw_below(Rng& rng, uint64_t bound) {
    if (bound <= 1) return 0;
    uint64_t limit = ~uint64_t(0) - (~uint64_t(0) % bound);
    for (;;) {
        uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

template <class T>
void shuffle_seeded(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[draw_below(rng, i)]);
}

// log2 of a positive integer, good to ~1e-15 relative.
inline double log2_exact(const mpz_class& x) {
    if (x <= 0) return -INFINITY;
    long e = 0;
    double m = mpz_get_d_2exp(&e, x.get_mpz_t());
    return double(e) + std::log2(m);
}

}  // namespace debruijn
