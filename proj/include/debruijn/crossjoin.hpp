#pragma once

// Cross-join pairs: two conjugate pairs (alpha, alpha^) and (beta, beta^)
// whose states interleave along a de Bruijn sequence.  Exchanging both
// successor pairs keeps one cycle.  On an m-sequence, Zech logarithms give
// the positions directly: alpha at a, alpha^ at tau(a).

#include "joining.hpp"

#include <map>

namespace debruijn {

struct CrossJoinPair {
    unsigned n = 0;
    BitVec alpha, beta;                   // full states; their tails are A and B
    std::optional<ExpInt> a, b, tau_a, tau_b;  // exponents for m-sequence pairs

    BitVec tail_a() const { return alpha.slice(1, n - 1); }
    BitVec tail_b() const { return beta.slice(1, n - 1); }
};

// Cyclic order a, b, tau(a), tau(b) up to relabelling inside each pair:
// exactly one of b, tau(b) lies strictly between a and tau(a).
inline bool exponents_interleave(const ExpInt& a, const ExpInt& b, const ExpInt& ta, const ExpInt& tb) {
    const ExpInt& lo = a < ta ? a : ta;
    const ExpInt& hi = a < ta ? ta : a;
    bool in_b = lo < b && b < hi, in_tb = lo < tb && tb < hi;
    return in_b != in_tb && b != a && b != ta && tb != a && tb != ta;
}

// The ordering used by the random routine: a < b < tau(a) < tau(b).
inline bool exponents_in_order(const ExpInt& a, const ExpInt& b, const ExpInt& ta, const ExpInt& tb) { return a < b && b < ta && ta < tb; }

inline CrossJoinPair crossjoin_from_exponents(const BinPoly& p, const ZechTable& z, const ExpInt& a, const ExpInt& b) {
    if (z.polynomial() != p) throw Error(Errc::invalid_input, "Zech table belongs to another polynomial");
    CrossJoinPair c;
    c.n = unsigned(p.degree());
    ExpInt M = mersenne(c.n);
    if (a <= 0 || b <= 0 || a >= M || b >= M) throw Error(Errc::domain, "exponents must lie in [1, 2^n-2]");
    auto ta = z.lookup(a), tb = z.lookup(b);
    if (!ta || !tb) throw Error(Errc::missing_entry, "tau(" + to_dec(!ta ? a : b) + ") is not in the table");
    c.a = a;
    c.b = b;
    c.tau_a = *ta;
    c.tau_b = *tb;
    // (1, 0, ..., 0) A_p^k by square-and-multiply
    c.alpha = lfsr_state_at_matrix(p, unit_state(c.n), a);
    c.beta = lfsr_state_at_matrix(p, unit_state(c.n), b);
    if (c.tail_a() == c.tail_b()) throw Error(Errc::domain, "the two pairs share a tail");
    return c;
}

// h + prod (x_i + a_i + 1) + prod (x_i + b_i + 1), i in [1, n-1].
inline Anf apply_crossjoin(const Anf& h, const CrossJoinPair& c, unsigned zero_cap = 24) {
    if (c.tail_a() == c.tail_b()) throw Error(Errc::domain, "cross-join needs A != B");
    return h + tail_indicator(c.alpha, zero_cap) + tail_indicator(c.beta, zero_cap);
}

inline JoinedFeedback apply_crossjoin(JoinedFeedback h, const CrossJoinPair& c) {
    if (c.tail_a() == c.tail_b()) throw Error(Errc::domain, "cross-join needs A != B");
    h.toggle_pair(c.alpha);
    h.toggle_pair(c.beta);
    return h;
}

// Pair from a tail pattern (the first bit is irrelevant).
inline CrossJoinPair crossjoin_from_tails(const std::string& A, const std::string& B) {
    if (A.size() != B.size()) throw Error(Errc::invalid_input, "tails differ in length");
    CrossJoinPair c;
    c.n = unsigned(A.size() + 1);
    c.alpha = BitVec::from_string("0" + A);
    c.beta = BitVec::from_string("0" + B);
    return c;
}

// Runs x_{k+n} = h(x_k, ..., x_{k+n-1}) from start for len steps (n <= 24).
inline BitSeq fsr_sequence(const Anf& h, const BitVec& start, uint64_t len) {
    unsigned n = h.n();
    if (start.size() != n) throw Error(Errc::domain, "start state width mismatch");
    auto tt = truth_table(h);
    uint64_t s = start.to_u64();
    BitVec out(len);
    for (uint64_t k = 0; k < len; ++k) {
        if (s & 1) out.set(k);
        s = (s >> 1) | (uint64_t(tt[s]) << (n - 1));
    }
    return BitSeq{out};
}

// The de Bruijn sequence of h from 0^n; throws if h does not give one.
inline BitSeq debruijn_of(const Anf& h) {
    BitSeq s = fsr_sequence(h, BitVec(h.n()), uint64_t(1) << h.n());
    if (!is_de_bruijn(s, h.n())) throw Error(Errc::domain, "feedback does not generate a de Bruijn sequence");
    return s;
}

// All cross-join pairs of a de Bruijn (or modified de Bruijn) sequence,
// pairs of tails A < B as integers, alpha being the earlier state of A.
inline std::vector<CrossJoinPair> enumerate_crossjoin_pairs(const BitSeq& seq, unsigned n) {
    if (n < 2 || n > 14) throw Error(Errc::resource, "pair enumeration supports 2 <= n <= 14");
    uint64_t N = uint64_t(1) << n;
    BitSeq s = seq.period() + 1 == N ? insert_zero(seq) : seq;
    if (!is_de_bruijn(s, n)) throw Error(Errc::domain, "input is not a de Bruijn sequence of order " + std::to_string(n));
    std::vector<uint64_t> pos(N);
    for (uint64_t k = 0; k < N; ++k) {
        uint64_t w = 0;
        for (unsigned i = 0; i < n; ++i)
            if (s[k + i]) w |= uint64_t(1) << i;
        pos[w] = k;
    }
    uint64_t tails = N / 2;
    std::vector<CrossJoinPair> out;
    for (uint64_t A = 0; A < tails; ++A) {
        uint64_t pa0 = pos[A << 1], pa1 = pos[(A << 1) | 1];
        uint64_t lo = std::min(pa0, pa1), hi = std::max(pa0, pa1);
        for (uint64_t B = A + 1; B < tails; ++B) {
            uint64_t pb0 = pos[B << 1], pb1 = pos[(B << 1) | 1];
            bool in0 = lo < pb0 && pb0 < hi, in1 = lo < pb1 && pb1 < hi;
            if (in0 == in1) continue;
            CrossJoinPair c;
            c.n = n;
            c.alpha = BitVec::from_u64(pa0 < pa1 ? (A << 1) : ((A << 1) | 1), n);
            c.beta = BitVec::from_u64(in0 ? (B << 1) : ((B << 1) | 1), n);
            out.push_back(std::move(c));
        }
    }
    return out;
}

inline ExpInt draw_below(Rng& rng, const ExpInt& bound) {
    if (bound <= 0) throw Error(Errc::domain, "empty range");
    if (fits_u64(bound)) return from_u64(draw_below(rng, to_u64(bound)));
    size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    for (;;) {
        ExpInt x = 0;
        for (size_t got = 0; got < bits; got += 64) x = (x << 64) + from_u64(rng());
        x >>= (bits + 63) / 64 * 64 - bits;
        if (x < bound) return x;
    }
}

struct CrossJoinResult {
    CrossJoinPair pair;
    JoinedFeedback h;  // modified de Bruijn feedback: p's taps plus both tails
    uint64_t draws = 0;
};

// Random a < b < tau(a) < tau(b) with both logarithms known.
inline CrossJoinResult random_crossjoin(const BinPoly& p, const ZechTable& z, uint64_t seed, uint64_t max_draws = 1000000) {
    unsigned n = unsigned(p.degree());
    ExpInt M = mersenne(n);
    if (M < 3) throw Error(Errc::domain, "degree too small for cross-join pairs");
    Rng rng(seed);
    for (uint64_t d = 1; d <= max_draws; ++d) {
        ExpInt a = draw_below(rng, M - 1) + 1, b = draw_below(rng, M - 1) + 1;
        if (!(a < b)) continue;
        auto ta = z.lookup(a);
        if (!ta || !(b < *ta)) continue;
        auto tb = z.lookup(b);
        if (!tb || !(*ta < *tb)) continue;
        CrossJoinResult r;
        r.pair = crossjoin_from_exponents(p, z, a, b);
        r.h = apply_crossjoin(JoinedFeedback::from_poly(p), r.pair);
        r.draws = d;
        return r;
    }
    throw Error(Errc::budget, "no admissible (a, b) within " + std::to_string(max_draws) + " draws");
}

// "x0 + x3 + P(0010) + P(0100)" with P(v) = prod (x_i + v_i + 1); expanded
// to plain ANF when each tail has at most expand_zeros zeros.
inline std::string format_feedback(const JoinedFeedback& j, unsigned expand_zeros = 12) {
    bool small = true;
    for (const auto& t : j.tails)
        if (j.n - 1 - t.popcount() > expand_zeros) small = false;
    if (small) return j.to_anf(expand_zeros).to_string();
    std::string s;
    for (unsigned i = 0; i < j.n; ++i)
        if (j.linear.get(i)) s += std::string(s.empty() ? "" : " + ") + "x" + std::to_string(i);
    std::vector<std::string> ts;
    for (const auto& t : j.tails) ts.push_back(t.slice(1, j.n - 1).to_string());
    std::sort(ts.begin(), ts.end());
    for (const auto& t : ts) s += std::string(s.empty() ? "" : " + ") + "P(" + t + ")";
    return s.empty() ? "0" : s;
}

// ---- Fryers' formula ----

// N(l; k) = C(2^(n-1), k) / 2^(n-1) for odd k, 0 for even k.
inline ExpInt fryers_coefficient(unsigned n, uint64_t k) {
    if (n < 2 || n > 40) throw Error(Errc::domain, "fryers needs 2 <= n <= 40");
    uint64_t half = uint64_t(1) << (n - 1);
    if (k % 2 == 0 || k >= half) return 0;
    ExpInt c;
    mpz_bin_uiui(c.get_mpz_t(), half, k);
    ExpInt q = c >> (n - 1);
    if ((q << (n - 1)) != c) throw Error(Errc::corrupt_table, "binomial not divisible by 2^(n-1)");
    return q;
}

// Coefficients for k = 1, 3, ..., 2^(n-1) - 1 by the binomial recurrence.
inline std::vector<ExpInt> fryers_polynomial(unsigned n) {
    if (n < 2 || n > 24) throw Error(Errc::resource, "full expansion supports 2 <= n <= 24");
    uint64_t half = uint64_t(1) << (n - 1);
    std::vector<ExpInt> out;
    ExpInt c = 1;  // C(half, k)
    for (uint64_t k = 0; k + 1 < half; ++k) {
        c *= half - k;
        mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), k + 1);
        if ((k + 1) % 2) out.push_back(c >> (n - 1));
    }
    return out;
}

// 2^(2^(n-1) - n), cross-checked against the coefficient sum for n <= check_upto.
inline ExpInt fryers_total(unsigned n, unsigned check_upto = 16) {
    if (n < 2 || n > 40) throw Error(Errc::domain, "fryers needs 2 <= n <= 40");
    ExpInt t = ExpInt(1) << ((uint64_t(1) << (n - 1)) - n);
    if (n <= check_upto) {
        ExpInt s = 0;
        for (const auto& c : fryers_polynomial(n)) s += c;
        if (s != t) throw Error(Errc::corrupt_table, "coefficient sum differs from 2^(2^(n-1)-n)");
    }
    return t;
}

// Helleseth-Klove count of cross-join pairs of an m-sequence.
inline ExpInt helleseth_klove(unsigned n) {
    ExpInt h = ExpInt(1) << (n - 1);
    return (h - 1) * (h - 2) / 6;
}

struct BfsResult {
    std::vector<std::vector<Anf>> layers;  // layer 0 is the start
    size_t total() const {
        size_t s = 0;
        for (const auto& l : layers) s += l.size();
        return s;
    }
    bool truncated = false;
};

// Breadth-first closure under cross-joins, keyed on the canonical ANF text.
inline BfsResult crossjoin_bfs(const Anf& start, unsigned depth, size_t budget = 1 << 20) {
    BfsResult r;
    std::set<std::string> seen{start.to_string()};
    r.layers.push_back({start});
    for (unsigned d = 0; d < depth && !r.layers.back().empty(); ++d) {
        std::vector<Anf> next;
        for (const Anf& h : r.layers.back()) {
            for (const auto& c : enumerate_crossjoin_pairs(debruijn_of(h), h.n())) {
                Anf g = apply_crossjoin(h, c);
                if (!seen.insert(g.to_string()).second) continue;
                if (seen.size() > budget) {
                    r.truncated = true;
                    r.layers.push_back(std::move(next));
                    return r;
                }
                next.push_back(std::move(g));
            }
        }
        if (next.empty()) break;
        r.layers.push_back(std::move(next));
    }
    return r;
}

// de Bruijn feedback of the modified m-sequence of p: h plus the zero pair.
inline Anf debruijn_from_m_sequence(const BinPoly& p) {
    Anf h = feedback_anf(p);
    h += tail_indicator(BitVec(unsigned(p.degree())));
    return h;
}

}  // namespace debruijn
