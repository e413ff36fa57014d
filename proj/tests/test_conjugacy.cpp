#include <gtest/gtest.h>

#include <debruijn/conjugacy.hpp>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"

using namespace debruijn;

namespace {

BinPoly P(const char* s) { return parse_poly(s); }

std::shared_ptr<const ZechTable> brute(const char* p) { return std::make_shared<ZechTable>(zech_bruteforce(P(p))); }

uint64_t pack(const BitVec& v) { return v.to_u64(); }

// Cycle label of every state of the f-LFSR by simulation; label i is the
// cycle through phi(alpha^i), -1 for the zero cycle.
std::vector<int> simulate_labels(const CycleCtx& c) {
    int n = int(c.n);
    uint64_t f = c.f.to_u64();
    auto cycles = oracle::fsr_cycles(n, [&](uint64_t s) {
        int fb = 0;
        for (int i = 0; i < n; ++i) fb ^= int((s >> i) & (f >> i) & 1);
        return fb;
    });
    std::vector<int> label(size_t(1) << n, -2);
    uint64_t t = to_u64(c.t);
    for (auto& cyc : cycles) {
        int lab = -2;
        if (cyc.size() == 1 && cyc[0] == 0) lab = -1;
        for (uint64_t i = 0; i < t && lab == -2; ++i) {
            uint64_t s = pack(exponent_to_state(c, i));
            for (uint64_t x : cyc)
                if (x == s) lab = int(i);
        }
        for (uint64_t x : cyc) label[x] = lab;
    }
    return label;
}

}  // namespace

TEST(Conjugacy, ExampleOrder4Pairs) {
    CycleCtx c = make_cycle_ctx(P("x^4+x+1"), 3, brute("x^4+x+1"));
    auto pr = conjugate_pair(c, 3);
    EXPECT_EQ(pr.right.exponent, 14);
    EXPECT_EQ(pr.left.state.to_string(), "0001");
    EXPECT_EQ(pr.right.state.to_string(), "1001");
    EXPECT_EQ(pr.left.cycle, 0);
    EXPECT_EQ(pr.right.cycle, 2);
    auto q = conjugate_pair(c, 6);
    EXPECT_EQ(q.right.exponent, 13);
    EXPECT_EQ(q.left.cycle, 0);
    EXPECT_EQ(q.right.cycle, 1);
    // the zero cycle and phi(1)
    auto z = conjugate_of(c, cycle_position(c, ExpInt(0)));
    EXPECT_TRUE(z.zero);
    EXPECT_EQ(conjugate_of(c, z).exponent, 0);
}

TEST(Conjugacy, Order300Batch) {
    auto z = std::make_shared<ZechTable>(zech_seed_trinomial(P("n=300;{7}")));
    CycleCtx c = make_cycle_ctx(P("n=300;{7}"), 31, z, {false});
    auto pr = conjugate_pair(c, 7);
    EXPECT_EQ(pr.right.cycle, 21);
    EXPECT_EQ(pr.right.offset, 9);
    CosetPairBatch b = pairs_from_coset(c, 7);
    EXPECT_EQ(b.n_j, 300u);
    EXPECT_EQ(b.m_j, 5u);
    EXPECT_FALSE(b.same_cycle);
    std::set<std::pair<int, int>> got;
    for (auto& e : b.cycle_pairs) {
        EXPECT_EQ(e.count, 60u);
        got.insert({int(e.a.get_si()), int(e.b.get_si())});
    }
    EXPECT_EQ(got, (std::set<std::pair<int, int>>{{7, 21}, {11, 14}, {22, 28}, {13, 25}, {19, 26}}));
    // lazily produced pairs are genuine conjugates
    for (size_t s : {size_t(0), size_t(1), size_t(150), size_t(299)}) {
        auto [x, y] = b.exponents(s);
        BitVec d = exponent_to_state(c, x) ^ exponent_to_state(c, y);
        EXPECT_EQ(d.popcount(), 1u);
        EXPECT_TRUE(d.get(0));
    }
}

TEST(Conjugacy, SameCycleSignal) {
    auto z = brute("x^10+x^3+1");
    CycleCtx c = make_cycle_ctx(P("x^10+x^3+1"), 31, z);
    CosetPairBatch b = pairs_from_coset(c, 341);  // tau(341) = 682, both = 0 mod 31
    EXPECT_TRUE(b.same_cycle);
    EXPECT_TRUE(b.cycle_pairs.empty());
}

TEST(Conjugacy, InvolutionAndFirstBit) {
    auto z = brute("x^10+x^3+1");
    for (uint64_t t : {1, 3, 11, 31, 93}) {
        CycleCtx c = make_cycle_ctx(P("x^10+x^3+1"), t, z);
        for (uint64_t k = 0; k < 1023; ++k) {
            CyclePos a = cycle_position(c, ExpInt(from_u64(k)));
            CyclePos b = conjugate_of(c, a);
            CyclePos back = conjugate_of(c, b);
            EXPECT_FALSE(back.zero);
            EXPECT_EQ(back.exponent, a.exponent);
            BitVec d = a.state ^ b.state;
            ASSERT_EQ(d.popcount(), 1u);
            EXPECT_TRUE(d.get(0));
        }
    }
}

TEST(Conjugacy, SelfPairedCosets) {
    auto z = brute("x^10+x^3+1");
    CycleCtx c = make_cycle_ctx(P("x^10+x^3+1"), 11, z);
    int self = 0;
    for (uint64_t j = 1; j < 1023; ++j) {
        if (coset_leader(from_u64(j), 10).leader != from_u64(j)) continue;
        CosetPairBatch b = pairs_from_coset(c, from_u64(j));
        if (!b.self_paired) continue;
        ++self;
        std::set<std::pair<uint64_t, uint64_t>> seen;
        for (size_t s = 0; s < b.size(); ++s) {
            auto [x, y] = b.exponents(s);
            uint64_t a = to_u64(x), bb = to_u64(y);
            EXPECT_TRUE(seen.insert({std::min(a, bb), std::max(a, bb)}).second);
        }
        EXPECT_EQ(seen.size(), b.n_j / 2);
    }
    EXPECT_GT(self, 0);
}

TEST(Conjugacy, CyclotomicOrder4AgainstFieldOracle) {
    auto z = brute("x^4+x+1");
    CycleCtx c = make_cycle_ctx(P("x^4+x+1"), 3, z);
    auto mat = cyclotomic_numbers(c);
    auto tau = oracle::zech_by_field(0x13);
    std::vector<std::vector<uint64_t>> want(3, std::vector<uint64_t>(3, 0));
    for (uint64_t k = 1; k < 15; ++k) want[k % 3][tau[k] % 3]++;
    EXPECT_EQ(mat, want);
    EXPECT_EQ(mat, (std::vector<std::vector<uint64_t>>{{0, 2, 2}, {2, 2, 1}, {2, 1, 2}}));
}

TEST(Conjugacy, CyclotomicIdentities) {
    for (const char* ps : {"x^4+x+1", "x^10+x^3+1", "x^12+x^6+x^4+x+1"}) {
        auto z = brute(ps);
        BinPoly p = P(ps);
        ExpInt M = mersenne(unsigned(p.degree()));
        for (uint64_t t = 3; t <= 91; t += 2) {
            if (M % t != 0 || !associated_irreducible(p, t).valid) continue;
            CycleCtx c = make_cycle_ctx(p, t, z);
            auto mat = cyclotomic_numbers(c);
            uint64_t e = to_u64(c.e), total = 0;
            for (uint64_t i = 0; i < t; ++i) {
                uint64_t row = 0;
                for (uint64_t j = 0; j < t; ++j) {
                    row += mat[i][j];
                    // (i,j) = (j,i) since tau is an involution
                    EXPECT_EQ(mat[i][j], mat[j][i]);
                }
                EXPECT_EQ(row, e - (i == 0 ? 1 : 0)) << ps << " t=" << t << " i=" << i;
                total += row;
            }
            EXPECT_EQ(total, to_u64(M) - 1);
        }
    }
}

TEST(Conjugacy, EdgeCountsMatchSimulation) {
    for (auto [ps, t] : {std::pair<const char*, uint64_t>{"x^4+x+1", 3}, {"x^10+x^3+1", 11}, {"x^10+x^3+1", 31}}) {
        auto z = brute(ps);
        CycleCtx c = make_cycle_ctx(P(ps), t, z);
        auto label = simulate_labels(c);
        auto mat = cyclotomic_numbers(c);
        std::map<std::pair<int, int>, uint64_t> cnt;
        for (uint64_t v = 1; v < label.size(); ++v) {
            int a = label[v], b = label[v ^ 1];
            if (b < 0) continue;  // phi(1) and the zero state
            cnt[{a, b}]++;
        }
        for (uint64_t i = 0; i < t; ++i)
            for (uint64_t j = 0; j < t; ++j) {
                auto key = std::make_pair(int(i), int(j));
                EXPECT_EQ(cnt[key], mat[i][j]) << ps << " " << i << "," << j;
            }
    }
}

TEST(Conjugacy, U0NeighboursN10T31) {
    auto z = brute("x^10+x^3+1");
    CycleCtx c = make_cycle_ctx(P("x^10+x^3+1"), 31, z);
    auto mat = cyclotomic_numbers(c);
    std::set<int> nb;
    for (int i = 1; i < 31; ++i)
        if (mat[0][size_t(i)]) nb.insert(i);
    EXPECT_EQ(nb, (std::set<int>{3, 6, 7, 12, 14, 15, 17, 19, 23, 24, 25, 27, 28, 29, 30}));
}

TEST(Conjugacy, PairDump) {
    auto z = brute("x^4+x+1");
    CycleCtx c = make_cycle_ctx(P("x^4+x+1"), 3, z);
    std::ostringstream os;
    write_pair(os, c, 3);
    EXPECT_EQ(os.str(), "3 14 0 1 2 4\n");
}
