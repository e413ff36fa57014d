#pragma once

// Algebraic normal form of Boolean functions in x_0, ..., x_{n-1}.  A
// monomial is the n-bit set of its variables; the empty set is 1.

#include "core.hpp"

#include <cctype>
#include <sstream>
#include <unordered_set>

namespace debruijn {

class Anf {
public:
    Anf() = default;
    explicit Anf(unsigned n) : n_(n) {}

    static Anf variable(unsigned n, unsigned i) {
        Anf a(n);
        BitVec m(n);
        m.set(i);
        a.toggle(m);
        return a;
    }
    static Anf constant(unsigned n, bool one) {
        Anf a(n);
        if (one) a.toggle(BitVec(n));
        return a;
    }
    // sum of c_i x_i
    static Anf linear(const BitVec& coeffs) {
        Anf a(unsigned(coeffs.size()));
        for (size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs.get(i)) a.toggle(unit(coeffs.size(), i));
        return a;
    }

    unsigned n() const { return n_; }
    size_t size() const { return monos_.size(); }
    bool is_zero() const { return monos_.empty(); }
    const std::unordered_set<BitVec, BitVecHash>& monomials() const { return monos_; }

    void toggle(const BitVec& m) {
        if (m.size() != n_) throw Error(Errc::domain, "monomial width mismatch");
        auto it = monos_.find(m);
        if (it == monos_.end())
            monos_.insert(m);
        else
            monos_.erase(it);
    }
    bool has(const BitVec& m) const { return monos_.count(m) != 0; }

    Anf& operator+=(const Anf& o) {
        if (o.n_ != n_) throw Error(Errc::domain, "ANF arity mismatch");
        for (const auto& m : o.monos_) toggle(m);
        return *this;
    }
    friend Anf operator+(Anf a, const Anf& b) { return a += b; }

    long degree() const {
        long d = -1;
        for (const auto& m : monos_) d = std::max(d, long(m.popcount()));
        return d;
    }

    bool eval(const BitVec& x) const {
        bool r = false;
        for (const auto& m : monos_)
            if (m.subset_of(x)) r = !r;
        return r;
    }

    // Variable index lists in lexicographic order.
    std::vector<std::vector<unsigned>> sorted_terms() const {
        std::vector<std::vector<unsigned>> out;
        for (const auto& m : monos_) {
            std::vector<unsigned> idx;
            for (unsigned i = 0; i < n_; ++i)
                if (m.get(i)) idx.push_back(i);
            out.push_back(std::move(idx));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string to_string() const {
        if (monos_.empty()) return "0";
        std::string s;
        for (const auto& t : sorted_terms()) {
            if (!s.empty()) s += " + ";
            if (t.empty()) {
                s += "1";
                continue;
            }
            for (size_t k = 0; k < t.size(); ++k) {
                if (k) s += "*";
                s += "x" + std::to_string(t[k]);
            }
        }
        return s;
    }

    friend bool operator==(const Anf& a, const Anf& b) { return a.n_ == b.n_ && a.monos_ == b.monos_; }

private:
    static BitVec unit(size_t n, size_t i) {
        BitVec b(n);
        b.set(i);
        return b;
    }

    unsigned n_ = 0;
    std::unordered_set<BitVec, BitVecHash> monos_;
};

// Accepts "x0 + x1*x3 + x2", "x1x3", "x_1 x_3", "1" and "0".  Terms
// repeated an even number of times cancel.
inline Anf parse_anf(unsigned n, const std::string& text) {
    Anf a(n);
    std::string term;
    auto flush = [&](const std::string& raw) {
        std::string t;
        for (char ch : raw)
            if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '*' && ch != '_' && ch != '.') t += ch;
        if (t.empty()) throw Error(Errc::invalid_input, "empty ANF term in '" + text + "'");
        if (t == "0") return;
        BitVec m(n);
        if (t != "1") {
            size_t i = 0;
            while (i < t.size()) {
                if (t[i] != 'x') throw Error(Errc::invalid_input, "bad ANF term '" + raw + "'");
                size_t j = i + 1;
                while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
                if (j == i + 1) throw Error(Errc::invalid_input, "bad ANF term '" + raw + "'");
                unsigned v = unsigned(std::stoul(t.substr(i + 1, j - i - 1)));
                if (v >= n) throw Error(Errc::invalid_input, "variable x" + std::to_string(v) + " out of range");
                m.set(v);
                i = j;
            }
        }
        a.toggle(m);
    };
    for (char ch : text) {
        if (ch == '+') {
            flush(term);
            term.clear();
        } else {
            term += ch;
        }
    }
    flush(term);
    return a;
}

// prod_{i=1}^{n-1} (x_i + v_i + 1): the indicator of the tail of v.  It has
// 2^(zeros in the tail) monomials, so the expansion is capped.
inline Anf tail_indicator(const BitVec& v, unsigned zero_cap = 24) {
    unsigned n = unsigned(v.size());
    std::vector<unsigned> zeros;
    BitVec base(n);
    for (unsigned i = 1; i < n; ++i) {
        if (v.get(i))
            base.set(i);
        else
            zeros.push_back(i);
    }
    if (zeros.size() > zero_cap)
        throw Error(Errc::resource, "tail has " + std::to_string(zeros.size()) + " zeros; expansion exceeds the cap");
    Anf a(n);
    for (uint64_t sub = 0; sub < (uint64_t(1) << zeros.size()); ++sub) {
        BitVec m = base;
        for (size_t k = 0; k < zeros.size(); ++k)
            if ((sub >> k) & 1) m.set(zeros[k]);
        a.toggle(m);
    }
    return a;
}

// Truth table index: bit i of the index is x_i.
inline std::vector<uint8_t> truth_table(const Anf& a) {
    unsigned n = a.n();
    if (n > 24) throw Error(Errc::resource, "truth tables need n <= 24");
    std::vector<uint8_t> tt(size_t(1) << n, 0);
    for (const auto& m : a.monomials()) tt[m.to_u64()] ^= 1;
    // Moebius transform (self-inverse over GF(2))
    for (unsigned i = 0; i < n; ++i)
        for (size_t x = 0; x < tt.size(); ++x)
            if ((x >> i) & 1) tt[x] ^= tt[x ^ (size_t(1) << i)];
    return tt;
}

inline Anf anf_from_truth_table(unsigned n, std::vector<uint8_t> tt) {
    if (tt.size() != (size_t(1) << n)) throw Error(Errc::domain, "truth table length must be 2^n");
    for (unsigned i = 0; i < n; ++i)
        for (size_t x = 0; x < tt.size(); ++x)
            if ((x >> i) & 1) tt[x] ^= tt[x ^ (size_t(1) << i)];
    Anf a(n);
    for (size_t x = 0; x < tt.size(); ++x)
        if (tt[x] & 1) a.toggle(BitVec::from_u64(x, n));
    return a;
}

}  // namespace debruijn
