#pragma once

// Polynomials over GF(2), LFSR stepping and jumping, Berlekamp-Massey,
// decimation and the associated-irreducible construction.

#include "core.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace debruijn {

namespace detail {

// Distinct prime factors of 2^n - 1, n = 1..64.
inline const std::vector<std::vector<uint64_t>>& mersenne_factor_table() {
    static const std::vector<std::vector<uint64_t>> table = {
        {},  // 1
        {3ULL},  // 2
        {7ULL},  // 3
        {3ULL, 5ULL},  // 4
        {31ULL},  // 5
        {3ULL, 7ULL},  // 6
        {127ULL},  // 7
        {3ULL, 5ULL, 17ULL},  // 8
        {7ULL, 73ULL},  // 9
        {3ULL, 11ULL, 31ULL},  // 10
        {23ULL, 89ULL},  // 11
        {3ULL, 5ULL, 7ULL, 13ULL},  // 12
        {8191ULL},  // 13
        {3ULL, 43ULL, 127ULL},  // 14
        {7ULL, 31ULL, 151ULL},  // 15
        {3ULL, 5ULL, 17ULL, 257ULL},  // 16
        {131071ULL},  // 17
        {3ULL, 7ULL, 19ULL, 73ULL},  // 18
        {524287ULL},  // 19
        {3ULL, 5ULL, 11ULL, 31ULL, 41ULL},  // 20
        {7ULL, 127ULL, 337ULL},  // 21
        {3ULL, 23ULL, 89ULL, 683ULL},  // 22
        {47ULL, 178481ULL},  // 23
        {3ULL, 5ULL, 7ULL, 13ULL, 17ULL, 241ULL},  // 24
        {31ULL, 601ULL, 1801ULL},  // 25
        {3ULL, 2731ULL, 8191ULL},  // 26
        {7ULL, 73ULL, 262657ULL},  // 27
        {3ULL, 5ULL, 29ULL, 43ULL, 113ULL, 127ULL},  // 28
        {233ULL, 1103ULL, 2089ULL},  // 29
        {3ULL, 7ULL, 11ULL, 31ULL, 151ULL, 331ULL},  // 30
        {2147483647ULL},  // 31
        {3ULL, 5ULL, 17ULL, 257ULL, 65537ULL},  // 32
        {7ULL, 23ULL, 89ULL, 599479ULL},  // 33
        {3ULL, 43691ULL, 131071ULL},  // 34
        {31ULL, 71ULL, 127ULL, 122921ULL},  // 35
        {3ULL, 5ULL, 7ULL, 13ULL, 19ULL, 37ULL, 73ULL, 109ULL},  // 36
        {223ULL, 616318177ULL},  // 37
        {3ULL, 174763ULL, 524287ULL},  // 38
        {7ULL, 79ULL, 8191ULL, 121369ULL},  // 39
        {3ULL, 5ULL, 11ULL, 17ULL, 31ULL, 41ULL, 61681ULL},  // 40
        {13367ULL, 164511353ULL},  // 41
        {3ULL, 7ULL, 43ULL, 127ULL, 337ULL, 5419ULL},  // 42
        {431ULL, 9719ULL, 2099863ULL},  // 43
        {3ULL, 5ULL, 23ULL, 89ULL, 397ULL, 683ULL, 2113ULL},  // 44
        {7ULL, 31ULL, 73ULL, 151ULL, 631ULL, 23311ULL},  // 45
        {3ULL, 47ULL, 178481ULL, 2796203ULL},  // 46
        {2351ULL, 4513ULL, 13264529ULL},  // 47
        {3ULL, 5ULL, 7ULL, 13ULL, 17ULL, 97ULL, 241ULL, 257ULL, 673ULL},  // 48
        {127ULL, 4432676798593ULL},  // 49
        {3ULL, 11ULL, 31ULL, 251ULL, 601ULL, 1801ULL, 4051ULL},  // 50
        {7ULL, 103ULL, 2143ULL, 11119ULL, 131071ULL},  // 51
        {3ULL, 5ULL, 53ULL, 157ULL, 1613ULL, 2731ULL, 8191ULL},  // 52
        {6361ULL, 69431ULL, 20394401ULL},  // 53
        {3ULL, 7ULL, 19ULL, 73ULL, 87211ULL, 262657ULL},  // 54
        {23ULL, 31ULL, 89ULL, 881ULL, 3191ULL, 201961ULL},  // 55
        {3ULL, 5ULL, 17ULL, 29ULL, 43ULL, 113ULL, 127ULL, 15790321ULL},  // 56
        {7ULL, 32377ULL, 524287ULL, 1212847ULL},  // 57
        {3ULL, 59ULL, 233ULL, 1103ULL, 2089ULL, 3033169ULL},  // 58
        {179951ULL, 3203431780337ULL},  // 59
        {3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 31ULL, 41ULL, 61ULL, 151ULL, 331ULL, 1321ULL},  // 60
        {2305843009213693951ULL},  // 61
        {3ULL, 715827883ULL, 2147483647ULL},  // 62
        {7ULL, 73ULL, 127ULL, 337ULL, 92737ULL, 649657ULL},  // 63
        {3ULL, 5ULL, 17ULL, 257ULL, 641ULL, 65537ULL, 6700417ULL},  // 64
    };
    return table;
}

}  // namespace detail

// Distinct prime factors of 2^n - 1 from the bundled table (n <= 64).
inline std::optional<std::vector<ExpInt>> bundled_mersenne_factors(unsigned n) {
    const auto& t = detail::mersenne_factor_table();
    if (n == 0 || n > t.size()) return std::nullopt;
    std::vector<ExpInt> r;
    for (uint64_t q : t[n - 1]) r.push_back(from_u64(q));
    return r;
}

class BinPoly {
public:
    BinPoly() = default;

    static BinPoly zero() { return BinPoly(); }
    static BinPoly one() { return monomial(0); }
    static BinPoly monomial(size_t k) {
        BinPoly p;
        p.set(k);
        return p;
    }
    static BinPoly from_u64(uint64_t v) {
        BinPoly p;
        if (v) p.w_.push_back(v);
        return p;
    }
    // Sum of x^k over the given exponents.
    static BinPoly from_exponents(const std::vector<size_t>& ks) {
        BinPoly p;
        for (size_t k : ks) p.toggle(k);
        return p;
    }
    // x^n + sum of x^k for k in mids + 1.
    static BinPoly from_set(unsigned n, const std::vector<unsigned>& mids) {
        BinPoly p;
        p.toggle(n);
        for (unsigned k : mids) {
            if (k == 0 || k >= n) throw Error(Errc::invalid_input, "set notation exponent out of range");
            if (p.coeff(k)) throw Error(Errc::invalid_input, "repeated exponent in set notation");
            p.toggle(k);
        }
        p.toggle(0);
        return p;
    }

    // -1 for the zero polynomial.
    long degree() const {
        if (w_.empty()) return -1;
        return long((w_.size() - 1) * 64 + 63 - std::countl_zero(w_.back()));
    }
    bool is_zero() const { return w_.empty(); }
    bool is_one() const { return w_.size() == 1 && w_[0] == 1; }
    bool coeff(size_t k) const { return (k >> 6) < w_.size() && ((w_[k >> 6] >> (k & 63)) & 1); }

    void set(size_t k, bool v = true) {
        if (coeff(k) != v) toggle(k);
    }
    void toggle(size_t k) {
        if ((k >> 6) >= w_.size()) w_.resize((k >> 6) + 1, 0);
        w_[k >> 6] ^= uint64_t(1) << (k & 63);
        normalize();
    }

    size_t weight() const {
        size_t c = 0;
        for (uint64_t x : w_) c += std::popcount(x);
        return c;
    }

    // Exponents with coefficient 1, descending.
    std::vector<size_t> exponents() const {
        std::vector<size_t> r;
        for (long k = degree(); k >= 0; --k)
            if (coeff(size_t(k))) r.push_back(size_t(k));
        return r;
    }

    BinPoly& operator+=(const BinPoly& o) {
        if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
        for (size_t i = 0; i < o.w_.size(); ++i) w_[i] ^= o.w_[i];
        normalize();
        return *this;
    }
    friend BinPoly operator+(BinPoly a, const BinPoly& b) { return a += b; }

    friend BinPoly operator*(const BinPoly& a, const BinPoly& b) {
        BinPoly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.w_.assign(a.w_.size() + b.w_.size(), 0);
        for (size_t i = 0; i < a.w_.size(); ++i) {
            uint64_t x = a.w_[i];
            while (x) {
                int bit = std::countr_zero(x);
                x &= x - 1;
                r.xor_shifted(b, i * 64 + size_t(bit));
            }
        }
        r.normalize();
        return r;
    }

    // Remainder modulo m.
    BinPoly mod(const BinPoly& m) const {
        long dm = m.degree();
        if (dm < 0) throw Error(Errc::invalid_modulus, "zero modulus");
        BinPoly r = *this;
        for (long k = r.degree(); k >= dm; --k)
            if (r.coeff(size_t(k))) r.xor_shifted(m, size_t(k - dm));
        r.normalize();
        return r;
    }

    // Quotient and remainder.
    std::pair<BinPoly, BinPoly> divmod(const BinPoly& m) const {
        long dm = m.degree();
        if (dm < 0) throw Error(Errc::invalid_modulus, "zero modulus");
        BinPoly q, r = *this;
        for (long k = r.degree(); k >= dm; --k)
            if (r.coeff(size_t(k))) {
                r.xor_shifted(m, size_t(k - dm));
                q.toggle(size_t(k - dm));
            }
        r.normalize();
        return {q, r};
    }

    // x^k coefficients reversed: x^deg * p(1/x).
    BinPoly reciprocal() const {
        BinPoly r;
        long d = degree();
        for (long k = 0; k <= d; ++k)
            if (coeff(size_t(k))) r.toggle(size_t(d - k));
        return r;
    }

    uint64_t to_u64() const {
        if (w_.size() > 1) throw Error(Errc::domain, "polynomial wider than 64 bits");
        return w_.empty() ? 0 : w_[0];
    }

    friend bool operator==(const BinPoly& a, const BinPoly& b) { return a.w_ == b.w_; }
    friend bool operator!=(const BinPoly& a, const BinPoly& b) { return !(a == b); }
    friend bool operator<(const BinPoly& a, const BinPoly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        for (size_t i = a.w_.size(); i-- > 0;)
            if (a.w_[i] != b.w_[i]) return a.w_[i] < b.w_[i];
        return false;
    }

    const std::vector<uint64_t>& words() const { return w_; }

private:
    void normalize() {
        while (!w_.empty() && w_.back() == 0) w_.pop_back();
    }
    void xor_shifted(const BinPoly& b, size_t shift) {
        size_t ws = shift >> 6, bs = shift & 63;
        size_t need = b.w_.size() + ws + 1;
        if (w_.size() < need) w_.resize(need, 0);
        for (size_t i = 0; i < b.w_.size(); ++i) {
            w_[i + ws] ^= b.w_[i] << bs;
            if (bs) w_[i + ws + 1] ^= b.w_[i] >> (64 - bs);
        }
    }

    std::vector<uint64_t> w_;
};

inline BinPoly poly_mul_mod(const BinPoly& a, const BinPoly& b, const BinPoly& m) {
    if (m.degree() < 1) throw Error(Errc::invalid_modulus, "modulus must have degree >= 1");
    return (a.mod(m) * b.mod(m)).mod(m);
}

inline BinPoly poly_pow_mod(BinPoly base, ExpInt e, const BinPoly& m) {
    if (m.degree() < 1) throw Error(Errc::invalid_modulus, "modulus must have degree >= 1");
    BinPoly r = BinPoly::one().mod(m);
    base = base.mod(m);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (size_t i = bits; i-- > 0;) {
        r = (r * r).mod(m);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * base).mod(m);
    }
    return r;
}

inline BinPoly poly_gcd(BinPoly a, BinPoly b) {
    while (!b.is_zero()) {
        BinPoly r = a.mod(b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

namespace detail {
inline std::vector<unsigned> prime_divisors(unsigned n) {
    std::vector<unsigned> r;
    for (unsigned q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            r.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) r.push_back(n);
    return r;
}
}  // namespace detail

// Rabin: x^(2^n) = x mod f and gcd(x^(2^(n/q)) - x, f) = 1 for each prime q | n.
inline bool is_irreducible(const BinPoly& f) {
    long n = f.degree();
    if (n < 1) throw Error(Errc::domain, "irreducibility needs degree >= 1");
    if (n == 1) return true;
    if (!f.coeff(0)) return false;
    const BinPoly x = BinPoly::monomial(1);
    std::vector<BinPoly> frob(size_t(n) + 1);  // x^(2^i) mod f
    frob[0] = x.mod(f);
    for (long i = 1; i <= n; ++i) frob[size_t(i)] = (frob[size_t(i - 1)] * frob[size_t(i - 1)]).mod(f);
    if (frob[size_t(n)] != x.mod(f)) return false;
    for (unsigned q : detail::prime_divisors(unsigned(n))) {
        BinPoly g = poly_gcd(f, frob[size_t(n) / q] + x);
        if (!g.is_one()) return false;
    }
    return true;
}

inline bool is_primitive(const BinPoly& f, const std::vector<ExpInt>& factors) {
    long n = f.degree();
    if (n < 1 || !f.coeff(0)) return false;
    ExpInt m = mersenne(unsigned(n));
    const BinPoly x = BinPoly::monomial(1);
    if (!poly_pow_mod(x, m, f).is_one()) return false;
    for (const ExpInt& q : factors) {
        if (m % q != 0) throw Error(Errc::invalid_input, "factor " + to_dec(q) + " does not divide 2^n-1");
        if (poly_pow_mod(x, m / q, f).is_one()) return false;
    }
    return true;
}

// Uses the bundled factor table.
inline bool is_primitive(const BinPoly& f) {
    long n = f.degree();
    if (n < 1) return false;
    auto fac = bundled_mersenne_factors(unsigned(n));
    if (!fac) throw Error(Errc::unsupported_degree, "no bundled factorization of 2^" + std::to_string(n) + "-1");
    return is_irreducible(f) && is_primitive(f, *fac);
}

// Multiplicative order of x modulo an irreducible f with f(0) = 1.
inline ExpInt polynomial_order(const BinPoly& f) {
    long n = f.degree();
    auto fac = bundled_mersenne_factors(unsigned(n));
    if (!fac) throw Error(Errc::unsupported_degree, "no bundled factorization of 2^" + std::to_string(n) + "-1");
    ExpInt e = mersenne(unsigned(n));
    const BinPoly x = BinPoly::monomial(1);
    for (const ExpInt& q : *fac)
        while (e % q == 0 && poly_pow_mod(x, e / q, f).is_one()) e /= q;
    return e;
}

// "n=130;{3}" for x^130+x^3+1; also accepts "x^4+x+1" and "0x13".
inline BinPoly parse_poly(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw Error(Errc::invalid_input, "empty polynomial");
    if (s.rfind("n=", 0) == 0) {
        size_t semi = s.find(';');
        if (semi == std::string::npos || s.size() < semi + 3 || s[semi + 1] != '{' || s.back() != '}')
            throw Error(Errc::invalid_input, "expected n=<deg>;{e1,e2,...} but got '" + text + "'");
        unsigned long n = 0;
        try {
            n = std::stoul(s.substr(2, semi - 2));
        } catch (...) {
            throw Error(Errc::invalid_input, "bad degree in '" + text + "'");
        }
        if (n < 1) throw Error(Errc::invalid_input, "degree must be positive");
        std::vector<unsigned> mids;
        std::string body = s.substr(semi + 2, s.size() - semi - 3);
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) throw Error(Errc::invalid_input, "empty exponent in '" + text + "'");
            try {
                mids.push_back(unsigned(std::stoul(tok)));
            } catch (...) {
                throw Error(Errc::invalid_input, "bad exponent '" + tok + "'");
            }
        }
        return BinPoly::from_set(unsigned(n), mids);
    }
    if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) {
        BinPoly p;
        std::string hex = s.substr(2);
        if (hex.empty()) throw Error(Errc::invalid_input, "empty hex polynomial");
        size_t k = 0;
        for (size_t i = hex.size(); i-- > 0; k += 4) {
            char c = hex[i];
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else throw Error(Errc::invalid_input, "bad hex digit in '" + text + "'");
            for (int b = 0; b < 4; ++b)
                if ((v >> b) & 1) p.toggle(k + size_t(b));
        }
        return p;
    }
    BinPoly p;
    std::stringstream ss(s);
    std::string term;
    while (std::getline(ss, term, '+')) {
        if (term == "1") p.toggle(0);
        else if (term == "x") p.toggle(1);
        else if (term.rfind("x^", 0) == 0 && term.size() > 2) {
            try {
                p.toggle(std::stoul(term.substr(2)));
            } catch (...) {
                throw Error(Errc::invalid_input, "bad term '" + term + "'");
            }
        } else {
            throw Error(Errc::invalid_input, "bad term '" + term + "' in '" + text + "'");
        }
    }
    return p;
}

// Set notation; polynomials without constant term fall back to hex.
inline std::string format_set(const BinPoly& p) {
    long n = p.degree();
    if (n < 1 || !p.coeff(0)) {
        std::ostringstream os;
        os << "0x";
        const auto& w = p.words();
        if (w.empty()) return "0x0";
        os << std::hex << w.back();
        for (size_t i = w.size() - 1; i-- > 0;) {
            os.width(16);
            os.fill('0');
            os << w[i];
        }
        return os.str();
    }
    std::string s = "n=" + std::to_string(n) + ";{";
    bool first = true;
    for (long k = n - 1; k >= 1; --k)
        if (p.coeff(size_t(k))) {
            if (!first) s += ",";
            s += std::to_string(k);
            first = false;
        }
    return s + "}";
}

inline std::string format_hex(const BinPoly& p) {
    const auto& w = p.words();
    if (w.empty()) return "0x0";
    std::ostringstream os;
    os << "0x" << std::hex << w.back();
    for (size_t i = w.size() - 1; i-- > 0;) {
        os.width(16);
        os.fill('0');
        os << w[i];
    }
    return os.str();
}

inline std::string format_human(const BinPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (size_t k : p.exponents()) {
        if (!s.empty()) s += " + ";
        if (k == 0) s += "1";
        else if (k == 1) s += "x";
        else s += "x^" + std::to_string(k);
    }
    return s;
}

// Companion matrix: v*A = (v1, ..., v_{n-1}, sum c_i v_i).
inline BitMatrix companion_matrix(const BinPoly& p) {
    long n = p.degree();
    if (n < 1) throw Error(Errc::domain, "companion matrix needs degree >= 1");
    BitMatrix a{size_t(n)};
    for (long j = 0; j + 1 < n; ++j) a.set(size_t(j + 1), size_t(j));
    for (long i = 0; i < n; ++i)
        if (p.coeff(size_t(i))) a.set(size_t(i), size_t(n - 1));
    return a;
}

inline BitVec lfsr_step(const BinPoly& p, const BitVec& v) {
    size_t n = size_t(p.degree());
    BitVec r(n);
    bool fb = false;
    for (size_t i = 0; i < n; ++i) {
        if (i + 1 < n && v.get(i + 1)) r.set(i);
        if (v.get(i) && p.coeff(i)) fb = !fb;
    }
    if (fb) r.set(n - 1);
    return r;
}

// len output bits of the LFSR of p started from state v.
inline BitVec lfsr_bits(const BinPoly& p, const BitVec& v, size_t len) {
    size_t n = size_t(p.degree());
    BitVec out(len);
    BitVec taps(n);
    for (size_t i = 0; i < n; ++i)
        if (p.coeff(i)) taps.set(i);
    // Sliding window kept in a ring buffer of n bits.
    std::vector<uint8_t> ring(n);
    for (size_t i = 0; i < n; ++i) ring[i] = v.get(i);
    size_t head = 0;
    for (size_t k = 0; k < len; ++k) {
        out.set(k, ring[head]);
        bool fb = false;
        for (size_t i = 0; i < n; ++i)
            if (ring[(head + i) % n] && taps.get(i)) fb = !fb;
        ring[head] = fb;
        head = (head + 1) % n;
    }
    return out;
}

inline BitVec unit_state(size_t n) {
    BitVec v(n);
    v.set(0);
    return v;
}

// v * A_p^e via x^e mod p: s_{e+j} = sum_i r_i s_{i+j} where r = x^e mod p.
inline BitVec lfsr_state_at(const BinPoly& p, const BitVec& v, const ExpInt& e) {
    long n = p.degree();
    if (n < 1 || size_t(n) != v.size()) throw Error(Errc::domain, "state length must equal deg(p)");
    if (!p.coeff(0)) throw Error(Errc::domain, "LFSR polynomial needs c0 = 1");
    if (e < 0) throw Error(Errc::domain, "negative jump");
    BinPoly r = poly_pow_mod(BinPoly::monomial(1), e, p);
    BitVec s = lfsr_bits(p, v, 2 * size_t(n) - 1);
    BitVec out{size_t(n)};
    for (long i = 0; i <= r.degree(); ++i) {
        if (!r.coeff(size_t(i))) continue;
        for (long j = 0; j < n; ++j)
            if (s.get(size_t(i + j))) out.flip(size_t(j));
    }
    return out;
}

// Same as lfsr_state_at but by square-and-multiply on the companion matrix.
inline BitVec lfsr_state_at_matrix(const BinPoly& p, const BitVec& v, const ExpInt& e) {
    return v * mat_pow(companion_matrix(p), e);
}

struct BitSeq {
    BitVec bits;
    size_t period() const { return bits.size(); }
    bool operator[](size_t i) const { return bits.get(i % bits.size()); }
    friend bool operator==(const BitSeq& a, const BitSeq& b) { return a.bits == b.bits; }
};

inline std::string format_seq(const BitSeq& s) { return "period=" + std::to_string(s.period()) + ";" + s.bits.to_hex(); }

inline BitSeq parse_seq(const std::string& text) {
    size_t semi = text.find(';');
    if (text.rfind("period=", 0) != 0 || semi == std::string::npos)
        throw Error(Errc::invalid_input, "expected period=<N>;<hex>");
    size_t n = std::stoul(text.substr(7, semi - 7));
    return BitSeq{BitVec::from_hex(text.substr(semi + 1), n)};
}

inline BitSeq m_sequence(const BinPoly& p, const BitVec& start) {
    long n = p.degree();
    if (n > 40) throw Error(Errc::resource, "m-sequence too long to materialize");
    size_t period = (size_t(1) << n) - 1;
    return BitSeq{lfsr_bits(p, start, period)};
}

// Characteristic polynomial of the shortest LFSR generating the bits.
inline BinPoly berlekamp_massey(const BitVec& s) {
    size_t N = s.size();
    std::vector<uint8_t> c(N + 1, 0), b(N + 1, 0), t;
    c[0] = b[0] = 1;
    size_t L = 0;
    long m = -1;
    for (size_t i = 0; i < N; ++i) {
        bool d = s.get(i);
        for (size_t k = 1; k <= L; ++k)
            if (c[k] && s.get(i - k)) d = !d;
        if (!d) continue;
        t = c;
        size_t shift = size_t(long(i) - m);
        for (size_t k = 0; k + shift <= N; ++k)
            if (b[k]) c[k + shift] ^= 1;
        if (2 * L <= i) {
            L = i + 1 - L;
            m = long(i);
            b = t;
        }
    }
    // connection c(x) = 1 + c1 x + ... + cL x^L -> x^L c(1/x)
    BinPoly f;
    for (size_t k = 0; k <= L; ++k)
        if (c[k]) f.toggle(L - k);
    return f;
}

inline uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t r = a % b;
        a = b;
        b = r;
    }
    return a;
}

// (L^shift s)^(d): out_j = s[shift + d*j].
inline BitSeq decimate(const BitSeq& s, uint64_t d, uint64_t shift) {
    uint64_t N = s.period();
    if (d == 0) throw Error(Errc::domain, "decimation factor must be positive");
    if (shift >= N) throw Error(Errc::domain, "shift must be below the period");
    uint64_t len = N / gcd_u64(d % N == 0 ? N : d % N, N);
    BitVec out(len);
    uint64_t pos = shift, step = d % N;
    for (uint64_t j = 0; j < len; ++j) {
        if (s.bits.get(pos)) out.set(j);
        pos = (pos + step) % N;
    }
    return BitSeq{out};
}

struct AssociatedPoly {
    BinPoly f;
    long degree = 0;
    bool valid = false;  // deg f == deg p
};

// Minimal polynomial of alpha^t, alpha a root of p: BM on 2n bits of the
// t-decimated m-sequence.
inline AssociatedPoly associated_irreducible(const BinPoly& p, const ExpInt& t) {
    long n = p.degree();
    if (n < 1) throw Error(Errc::domain, "degree must be positive");
    if (t <= 0) throw Error(Errc::domain, "t must be positive");
    BitMatrix at = mat_pow(companion_matrix(p), t);
    BitVec w = unit_state(size_t(n));
    BitVec bits(2 * size_t(n));
    for (size_t j = 0; j < 2 * size_t(n); ++j) {
        if (w.get(0)) bits.set(j);
        w = w * at;
    }
    AssociatedPoly a;
    a.f = berlekamp_massey(bits);
    a.degree = a.f.degree();
    a.valid = a.degree == n;
    return a;
}

// Inserts a 0 into the unique longest (cyclic) zero run.
inline BitSeq insert_zero(const BitSeq& s) {
    size_t N = s.period();
    if (N == 0) throw Error(Errc::domain, "empty sequence");
    if (s.bits.popcount() == 0) throw Error(Errc::ambiguity, "all-zero sequence");
    size_t best_len = 0, best_start = 0, count_best = 0;
    // rotate so the scan starts right after a 1
    size_t one = 0;
    while (!s.bits.get(one)) ++one;
    size_t i = 0;
    while (i < N) {
        size_t pos = (one + 1 + i) % N;
        if (s.bits.get(pos)) {
            ++i;
            continue;
        }
        size_t len = 0;
        while (i + len < N && !s.bits.get((one + 1 + i + len) % N)) ++len;
        if (len > best_len) {
            best_len = len;
            best_start = pos;
            count_best = 1;
        } else if (len == best_len) {
            ++count_best;
        }
        i += len;
    }
    if (best_len == 0) throw Error(Errc::ambiguity, "no zero run");
    if (count_best > 1) throw Error(Errc::ambiguity, "longest zero run is not unique");
    BitVec out(N + 1);
    size_t k = 0;
    for (size_t j = 0; j < N; ++j) {
        if (j == best_start) out.set(k++, false);
        out.set(k++, s.bits.get(j));
    }
    return BitSeq{out};
}

// Removes one 0 from the unique longest zero run.
inline BitSeq remove_zero(const BitSeq& s) {
    size_t N = s.period();
    if (s.bits.popcount() == 0 || N < 2) throw Error(Errc::domain, "cannot remove a zero");
    size_t one = 0;
    while (!s.bits.get(one)) ++one;
    size_t best_len = 0, best_start = 0, count_best = 0, i = 0;
    while (i < N) {
        size_t pos = (one + 1 + i) % N;
        if (s.bits.get(pos)) {
            ++i;
            continue;
        }
        size_t len = 0;
        while (i + len < N && !s.bits.get((one + 1 + i + len) % N)) ++len;
        if (len > best_len) {
            best_len = len;
            best_start = pos;
            count_best = 1;
        } else if (len == best_len) {
            ++count_best;
        }
        i += len;
    }
    if (best_len == 0 || count_best > 1) throw Error(Errc::ambiguity, "longest zero run is not unique");
    BitVec out(N - 1);
    size_t k = 0;
    for (size_t j = 0; j < N; ++j)
        if (j != best_start) out.set(k++, s.bits.get(j));
    return BitSeq{out};
}

// Every cyclic n-window distinct and period 2^n.
inline bool is_de_bruijn(const BitSeq& s, unsigned n) {
    if (n == 0 || n > 30) throw Error(Errc::resource, "window test supports 1 <= n <= 30");
    size_t N = size_t(1) << n;
    if (s.period() != N) return false;
    std::vector<bool> seen(N, false);
    uint64_t w = 0, mask = N - 1;
    for (unsigned i = 0; i < n; ++i) w = (w << 1) | s[i];
    for (size_t k = 0; k < N; ++k) {
        if (seen[w]) return false;
        seen[w] = true;
        w = ((w << 1) | s[k + n]) & mask;
    }
    return true;
}

}  // namespace debruijn
