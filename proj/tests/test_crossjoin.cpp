#include <gtest/gtest.h>

#include <debruijn/crossjoin.hpp>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace debruijn;

namespace {

BinPoly P(const char* s) { return parse_poly(s); }

BitSeq seq_of(const std::string& spaced) {
    std::string s;
    for (char ch : spaced)
        if (ch == '0' || ch == '1') s += ch;
    return BitSeq{BitVec::from_string(s)};
}

// Order-5 chain feedback functions, expanded by hand from the factored forms.
const char* kHS = "x0 + x1*x2*x3*x4 + x1*x2*x4 + x1*x3*x4 + x1*x3 + x1 + x2*x3*x4 + x2*x3 + x3 + 1";
const char* kHT = "x0 + x1*x2*x3*x4 + x1*x2*x3 + x1*x2 + x1*x3*x4 + x1*x3 + x1 + x2*x3 + x3 + 1";
const char* kHR = "x0 + x1*x2*x3*x4 + x1*x2*x4 + x1*x3 + x1 + x2*x3*x4 + x2*x4 + x2 + x3 + 1";

// O(N^2) interleaving scan straight from the definition.
size_t naive_pair_count(const BitSeq& s, unsigned n) {
    size_t N = s.period();
    std::vector<std::pair<uint64_t, size_t>> at;
    for (size_t k = 0; k < N; ++k) {
        uint64_t w = 0;
        for (unsigned i = 0; i < n; ++i) w |= uint64_t(s[k + i]) << i;
        at.push_back({w, k});
    }
    size_t count = 0;
    for (auto [w1, p1] : at)
        for (auto [w2, p2] : at) {
            if ((w1 & 1) || w2 != (w1 | 1)) continue;  // (alpha, alpha^) with alpha_0 = 0
            for (auto [v1, q1] : at)
                for (auto [v2, q2] : at) {
                    if ((v1 & 1) || v2 != (v1 | 1) || v1 <= w1) continue;
                    size_t lo = std::min(p1, p2), hi = std::max(p1, p2);
                    bool a = lo < q1 && q1 < hi, b = lo < q2 && q2 < hi;
                    count += a != b;
                }
        }
    return count;
}

std::shared_ptr<ZechTable> seeded(const char* p) {
    auto z = std::make_shared<ZechTable>(zech_seed_trinomial(P(p)));
    zech_closure(*z);
    return z;
}

}  // namespace

TEST(CrossJoin, Order5Chain) {
    Anf hs = parse_anf(5, kHS), ht = parse_anf(5, kHT), hr = parse_anf(5, kHR);
    EXPECT_EQ(debruijn_of(hs), seq_of("0000 0110 1100 0100 1011 1110 0111 0101"));
    EXPECT_EQ(debruijn_of(hr), seq_of("0000 0110 1110 1010 0101 1001 1111 0001"));
    EXPECT_TRUE(is_de_bruijn(debruijn_of(ht), 5));
    Anf t = apply_crossjoin(hs, crossjoin_from_tails("1100", "0111"));
    EXPECT_EQ(t, ht);
    EXPECT_EQ(t.to_string(), ht.to_string());
    EXPECT_EQ(apply_crossjoin(t, crossjoin_from_tails("1011", "0100")), hr);
    // both are genuine cross-join pairs of the sequence they act on
    auto has = [](const std::vector<CrossJoinPair>& ps, const std::string& A, const std::string& B) {
        for (auto& c : ps) {
            auto x = c.tail_a().to_string(), y = c.tail_b().to_string();
            if ((x == A && y == B) || (x == B && y == A)) return true;
        }
        return false;
    };
    EXPECT_TRUE(has(enumerate_crossjoin_pairs(debruijn_of(hs), 5), "1100", "0111"));
    EXPECT_TRUE(has(enumerate_crossjoin_pairs(debruijn_of(ht), 5), "1011", "0100"));
}

TEST(CrossJoin, ApplyTwiceRestores) {
    Anf hs = parse_anf(5, kHS);
    auto c = crossjoin_from_tails("1100", "0111");
    EXPECT_EQ(apply_crossjoin(apply_crossjoin(hs, c), c), hs);
    EXPECT_THROW(apply_crossjoin(hs, crossjoin_from_tails("1100", "1100")), Error);
}

TEST(CrossJoin, TruthTablesDifferInFourRows) {
    Anf h = debruijn_from_m_sequence(P("x^6+x+1"));
    for (const auto& c : enumerate_crossjoin_pairs(debruijn_of(h), 6)) {
        Anf g = apply_crossjoin(h, c);
        auto a = truth_table(h), b = truth_table(g);
        size_t diff = 0;
        for (size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
        EXPECT_EQ(diff, 4u);
        EXPECT_TRUE(is_de_bruijn(debruijn_of(g), 6));
    }
}

TEST(CrossJoin, Order5PairAt7And21) {
    auto z = std::make_shared<ZechTable>(zech_bruteforce(P("x^5+x^2+1")));
    // the printed states and output belong to (a, b) = (7, 21)
    CrossJoinPair c = crossjoin_from_exponents(P("x^5+x^2+1"), *z, 7, 21);
    EXPECT_EQ(*c.tau_a, 22);
    EXPECT_EQ(*c.tau_b, 25);
    EXPECT_EQ(c.alpha.to_string(), "01011");
    EXPECT_EQ(c.beta.to_string(), "01101");
    JoinedFeedback h = apply_crossjoin(JoinedFeedback::from_poly(P("x^5+x^2+1")), c);
    EXPECT_EQ(h.to_anf(), parse_anf(5, "x0 + x1*x2*x4 + x1*x3*x4 + x2"));
    BitSeq s = fsr_sequence(h.to_anf(), BitVec::from_string("10000"), 31);
    EXPECT_EQ(s, seq_of("10000 10010 11101 10011 11100 01101 0"));
    EXPECT_TRUE(is_de_bruijn(insert_zero(s), 5));
    // the printed exponents themselves
    CrossJoinPair lit = crossjoin_from_exponents(P("x^5+x^2+1"), *z, 3, 17);
    EXPECT_EQ(*lit.tau_a, 29);
    EXPECT_EQ(*lit.tau_b, 30);
    EXPECT_TRUE(exponents_in_order(3, 17, 29, 30));
}

TEST(CrossJoin, Order31Degree) {
    auto z = seeded("x^31+x^3+1");
    CrossJoinPair c = crossjoin_from_exponents(P("x^31+x^3+1"), *z, 3, 6);
    EXPECT_EQ(*c.tau_a, 31);
    EXPECT_EQ(*c.tau_b, 62);
    EXPECT_TRUE(exponents_in_order(3, 6, 31, 62));
    EXPECT_EQ(c.alpha.popcount(), 1u);
    EXPECT_TRUE(c.alpha.get(28));
    EXPECT_EQ(c.beta.popcount(), 1u);
    EXPECT_TRUE(c.beta.get(25));
    JoinedFeedback h = apply_crossjoin(JoinedFeedback::from_poly(P("x^31+x^3+1")), c);
    EXPECT_EQ(h.degree(), 29);
    EXPECT_EQ(format_feedback(h).substr(0, 8), "x0 + x3 ");
}

TEST(CrossJoin, Order127Family) {
    BinPoly p = P("x^127+x+1");
    auto z = seeded("x^127+x+1");
    ExpInt M = mersenne(127);
    JoinedFeedback all = JoinedFeedback::from_poly(p);
    size_t ordered = 0;
    for (unsigned i = 0; i < 16; ++i) {
        ExpInt a = ExpInt(1) << (8 * i), b = ExpInt(1) << (8 * i + 1);
        CrossJoinPair c = crossjoin_from_exponents(p, *z, a, b);
        EXPECT_EQ(*c.tau_a, mod_nonneg(127 * a, M));
        EXPECT_EQ(*c.tau_b, mod_nonneg(127 * b, M));
        JoinedFeedback one = apply_crossjoin(JoinedFeedback::from_poly(p), c);
        EXPECT_EQ(one.degree(), 125);
        all = apply_crossjoin(all, c);
        bool inter = exponents_interleave(a, b, *c.tau_a, *c.tau_b);
        EXPECT_EQ(inter, exponents_in_order(a, b, *c.tau_a, *c.tau_b));
        ordered += inter;
        // the last member wraps: tau(b) = 2^127 - 2^121 + 1 < tau(a), so the
        // two conjugate pairs nest instead of crossing
        EXPECT_EQ(inter, i < 15) << "i=" << i;
    }
    EXPECT_EQ(ordered, 15u);
    EXPECT_EQ(all.degree(), 125);
}

// The same family shape at n = 7 can be run: crossing members give full
// period, the nesting one splits the cycle.
TEST(CrossJoin, SmallFamilyAnalogue) {
    BinPoly p = P("x^7+x+1");
    auto z = std::make_shared<ZechTable>(zech_bruteforce(p));
    for (unsigned i = 0; i < 7; ++i) {
        ExpInt a = ExpInt(1) << i, b = ExpInt(1) << (i + 1);
        if (b >= 127) b -= 127;
        if (b == 0) continue;
        CrossJoinPair c = crossjoin_from_exponents(p, *z, a, b);
        bool inter = exponents_interleave(a, b, *c.tau_a, *c.tau_b);
        Anf h = apply_crossjoin(feedback_anf(p), c);
        auto tt = truth_table(h);
        uint64_t s = 1, len = 0;
        do {
            s = (s >> 1) | (uint64_t(tt[s]) << 6);
            ++len;
        } while (s != 1);
        EXPECT_EQ(len == 127, inter) << "i=" << i;
    }
}

TEST(CrossJoin, PairCountsFromMSequence) {
    EXPECT_EQ(enumerate_crossjoin_pairs(debruijn_of(debruijn_from_m_sequence(P("x^4+x+1"))), 4).size(), 7u);
    EXPECT_EQ(enumerate_crossjoin_pairs(debruijn_of(debruijn_from_m_sequence(P("x^5+x^2+1"))), 5).size(), 35u);
    for (const char* ps : {"x^6+x+1", "x^7+x+1", "x^8+x^4+x^3+x^2+1", "x^10+x^3+1"}) {
        BinPoly p = P(ps);
        unsigned n = unsigned(p.degree());
        auto pairs = enumerate_crossjoin_pairs(debruijn_of(debruijn_from_m_sequence(p)), n);
        EXPECT_EQ(ExpInt(from_u64(pairs.size())), helleseth_klove(n)) << ps;
        // the modified sequence gives the same answer
        BitSeq m = m_sequence(p, unit_state(n));
        EXPECT_EQ(enumerate_crossjoin_pairs(m, n).size(), pairs.size());
    }
}

TEST(CrossJoin, EnumerationMatchesNaiveScan) {
    BitSeq s3 = seq_of("00010111");
    EXPECT_EQ(enumerate_crossjoin_pairs(s3, 3).size(), naive_pair_count(s3, 3));
    std::mt19937_64 rng(4);
    Anf h = debruijn_from_m_sequence(P("x^5+x^2+1"));
    for (int step = 0; step < 20; ++step) {
        BitSeq s = debruijn_of(h);
        auto ps = enumerate_crossjoin_pairs(s, 5);
        EXPECT_EQ(ps.size(), naive_pair_count(s, 5));
        h = apply_crossjoin(h, ps[rng() % ps.size()]);
    }
    EXPECT_THROW(enumerate_crossjoin_pairs(seq_of("00110101"), 3), Error);
}

// a < b < tau(a) < tau(b) on exponents implies interleaving along the
// m-sequence; every such pair is among the enumerated ones.
TEST(CrossJoin, ExponentOrderImpliesInterleaving) {
    for (const char* ps : {"x^5+x^2+1", "x^6+x+1", "x^8+x^4+x^3+x^2+1", "x^10+x^3+1"}) {
        BinPoly p = P(ps);
        unsigned n = unsigned(p.degree());
        auto tau = oracle::zech_by_field(p.to_u64());
        uint64_t M = (uint64_t(1) << n) - 1;
        BitSeq m = m_sequence(p, unit_state(n));
        std::set<std::pair<std::string, std::string>> found;
        for (auto& c : enumerate_crossjoin_pairs(m, n)) {
            auto x = c.tail_a().to_string(), y = c.tail_b().to_string();
            found.insert({std::min(x, y), std::max(x, y)});
        }
        std::vector<std::string> tail(M);
        for (uint64_t k = 0; k < M; ++k) {
            std::string t;
            for (unsigned i = 1; i < n; ++i) t += m.bits.get((k + i) % M) ? '1' : '0';
            tail[k] = t;
        }
        size_t ordered = 0, crossing = 0;
        std::set<std::pair<std::string, std::string>> by_exponent;
        for (uint64_t a = 1; a < M; ++a)
            for (uint64_t b = a + 1; b < M; ++b) {
                bool in_order = exponents_in_order(a, b, tau[a], tau[b]);
                bool inter = exponents_interleave(a, b, tau[a], tau[b]);
                if (in_order) {
                    ++ordered;
                    EXPECT_TRUE(inter);
                }
                if (!inter) continue;
                ++crossing;
                const auto& x = tail[a];
                const auto& y = tail[b];
                by_exponent.insert({std::min(x, y), std::max(x, y)});
            }
        EXPECT_GT(ordered, 0u);
        EXPECT_EQ(by_exponent, found) << ps;
        EXPECT_EQ(crossing, 4 * found.size());  // {a, tau(a)} x {b, tau(b)}
    }
}

TEST(CrossJoin, RandomRoutine) {
    BinPoly p = P("x^10+x^3+1");
    ZechTable z = zech_bruteforce(p);
    for (uint64_t seed = 0; seed < 10; ++seed) {
        CrossJoinResult r = random_crossjoin(p, z, seed);
        EXPECT_TRUE(exponents_in_order(*r.pair.a, *r.pair.b, *r.pair.tau_a, *r.pair.tau_b));
        BitSeq s = fsr_sequence(r.h.to_anf(), unit_state(10), 1023);
        EXPECT_TRUE(is_de_bruijn(insert_zero(s), 10));
        CrossJoinResult again = random_crossjoin(p, z, seed);
        EXPECT_EQ(*again.pair.a, *r.pair.a);
        EXPECT_EQ(*again.pair.b, *r.pair.b);
    }
    // nothing resolvable: the draw budget runs out
    ZechTable empty(p);
    EXPECT_THROW(random_crossjoin(p, empty, 1, 2000), Error);
}

TEST(CrossJoin, FryersCoefficients) {
    auto c4 = fryers_polynomial(4);
    EXPECT_EQ(c4, (std::vector<ExpInt>{1, 7, 7, 1}));
    auto c5 = fryers_polynomial(5);
    EXPECT_EQ(c5, (std::vector<ExpInt>{1, 35, 273, 715, 715, 273, 35, 1}));
    EXPECT_EQ(fryers_coefficient(5, 5), 273);
    EXPECT_EQ(fryers_coefficient(5, 4), 0);
    EXPECT_EQ(fryers_total(4), 16);
    EXPECT_EQ(fryers_total(5), 2048);
    EXPECT_EQ(fryers_total(6), ExpInt(1) << 26);
}

TEST(CrossJoin, FryersIdentities) {
    for (unsigned n = 2; n <= 20; ++n) {
        EXPECT_EQ(fryers_coefficient(n, 1), 1);
        EXPECT_EQ(fryers_coefficient(n, 3), helleseth_klove(n)) << n;
        // product form for k >= 5
        uint64_t half = uint64_t(1) << (n - 1);
        for (uint64_t k : {5, 7, 9}) {
            if (k >= half) continue;
            ExpInt prod = 1, fact = 1;
            for (uint64_t i = 1; i < k; ++i) prod *= half - i;
            for (uint64_t i = 2; i <= k; ++i) fact *= i;
            EXPECT_EQ(fryers_coefficient(n, k), prod / fact);
        }
    }
    for (unsigned n = 2; n <= 16; ++n) {
        auto c = fryers_polynomial(n);
        for (size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], c[c.size() - 1 - i]);
        EXPECT_NO_THROW(fryers_total(n));
    }
}

TEST(CrossJoin, BfsOrder4) {
    Anf h = debruijn_from_m_sequence(P("x^4+x+1"));
    BfsResult r = crossjoin_bfs(h, 3);
    EXPECT_EQ(r.total(), 16u);
    std::vector<size_t> sizes;
    for (auto& l : r.layers) sizes.push_back(l.size());
    EXPECT_EQ(sizes, (std::vector<size_t>{1, 7, 7, 1}));
    EXPECT_EQ(crossjoin_bfs(h, 0).total(), 1u);
    BfsResult deeper = crossjoin_bfs(h, 10);
    EXPECT_EQ(deeper.total(), 16u);
    for (auto& l : deeper.layers)
        for (auto& g : l) EXPECT_TRUE(is_de_bruijn(debruijn_of(g), 4));
}

TEST(CrossJoin, BfsOrder5FirstLayer) {
    BfsResult r = crossjoin_bfs(debruijn_from_m_sequence(P("x^5+x^2+1")), 1);
    ASSERT_EQ(r.layers.size(), 2u);
    EXPECT_EQ(r.layers[1].size(), 35u);
    BfsResult cut = crossjoin_bfs(debruijn_from_m_sequence(P("x^5+x^2+1")), 3, 100);
    EXPECT_TRUE(cut.truncated);
}
