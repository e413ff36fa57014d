#include <gtest/gtest.h>

#include <debruijn/cycles.hpp>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace debruijn;

namespace {

BinPoly P(const char* s) { return parse_poly(s); }

std::shared_ptr<const ZechTable> brute(const char* p) { return std::make_shared<ZechTable>(zech_bruteforce(P(p))); }

}  // namespace

TEST(Cycles, SeedStateTrivialForT1) { EXPECT_EQ(u0_seed_state(P("x^4+x+1"), 1).to_string(), "1000"); }

TEST(Cycles, SeedStateOrder4) {
    BitVec v = u0_seed_state(P("x^4+x+1"), 3);
    BitSeq m{lfsr_bits(P("x^4+x+1"), v, 15)};
    EXPECT_EQ(decimate(m, 3, 0).bits.to_string(), "10001");
}

TEST(Cycles, SeedStateN10) {
    BinPoly p = P("x^10+x^3+1");
    BitVec v = u0_seed_state(p, 31);
    // decimate 310 generated bits by 31
    BitVec bits = lfsr_bits(p, v, 310);
    std::string head;
    for (int i = 0; i < 10; ++i) head.push_back(bits.get(size_t(31 * i)) ? '1' : '0');
    EXPECT_EQ(head, "1000000000");
}

TEST(Cycles, ExampleOrder4States) {
    CycleCtx c = make_cycle_ctx(P("x^4+x+1"), 3, brute("x^4+x+1"));
    EXPECT_EQ(c.f, P("x^4+x^3+x^2+x+1"));
    EXPECT_EQ(exponent_to_state(c, 0).to_string(), "1000");
    EXPECT_EQ(exponent_to_state(c, 13).to_string(), "1011");
    EXPECT_EQ(exponent_to_state(c, 5).to_string(), "0101");
    EXPECT_EQ(state_to_exponent(c, BitVec::from_string("1000")), 0);
    EXPECT_EQ(state_to_exponent(c, BitVec::from_string("0110")), 9);
    // u_i read off the phi map: cycle i, offsets 0..4
    std::vector<std::string> u = {"10001", "01111", "00101"};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) {
            BitVec s = exponent_to_state(c, i + 3 * j);
            for (int b = 0; b < 4; ++b) EXPECT_EQ(s.get(size_t(b)), u[size_t(i)][size_t((j + b) % 5)] == '1');
        }
}

TEST(Cycles, CyclePosition) {
    CycleCtx c = make_cycle_ctx(P("x^4+x+1"), 3, brute("x^4+x+1"));
    auto p8 = cycle_position(c, ExpInt(8));
    EXPECT_EQ(p8.cycle, 2);
    EXPECT_EQ(p8.offset, 2);
    auto p0 = cycle_position(c, ExpInt(0));
    EXPECT_EQ(p0.cycle, 0);
    EXPECT_EQ(p0.offset, 0);
    auto back = cycle_position(c, p8.state);
    EXPECT_EQ(back.exponent, 8);
    EXPECT_TRUE(cycle_position(c, BitVec(4)).zero);
}

TEST(Cycles, Order300Positions) {
    auto z = std::make_shared<ZechTable>(zech_seed_trinomial(P("n=300;{7}")));
    CycleCtx c = make_cycle_ctx(P("n=300;{7}"), 31, z, {false});
    EXPECT_EQ(c.f, P("x^300+x^194+x^176+x^158+x^97+x^88+x^79+x^52+x^43+x^25+x^16+x^7+1"));
    auto a = cycle_position(c, ExpInt(7));
    EXPECT_EQ(a.cycle, 7);
    EXPECT_EQ(a.offset, 0);
    auto b = cycle_position(c, ExpInt(300));
    EXPECT_EQ(b.cycle, 21);
    EXPECT_EQ(b.offset, 9);
    // conjugate states: differ only in the first coordinate
    BitVec d = a.state ^ b.state;
    EXPECT_EQ(d.popcount(), 1u);
    EXPECT_TRUE(d.get(0));
}

TEST(Cycles, RoundTripExhaustive) {
    for (const char* ps : {"x^4+x+1", "x^6+x+1", "x^8+x^4+x^3+x^2+1", "x^10+x^3+1", "x^12+x^6+x^4+x+1"}) {
        BinPoly p = P(ps);
        auto z = brute(ps);
        ExpInt M = mersenne(unsigned(p.degree()));
        std::vector<uint64_t> ts;
        for (uint64_t t = 1; t <= 100; ++t)
            if (M % t == 0 && associated_irreducible(p, t).valid) ts.push_back(t);
        for (uint64_t t : ts) {
            CycleCtx c = make_cycle_ctx(p, t, z);
            std::set<std::string> seen;
            for (uint64_t k = 0; k < to_u64(M); ++k) {
                BitVec s = exponent_to_state(c, k);
                ASSERT_EQ(state_to_exponent(c, s), k) << ps << " t=" << t;
                seen.insert(s.to_string());
            }
            // cycles partition the nonzero states
            EXPECT_EQ(seen.size(), to_u64(M)) << ps << " t=" << t;
            EXPECT_FALSE(seen.count(std::string(c.n, '0')));
        }
    }
}

TEST(Cycles, PhiIsAdditive) {
    auto z = brute("x^10+x^3+1");
    CycleCtx c = make_cycle_ctx(P("x^10+x^3+1"), 31, z);
    std::mt19937_64 rng(9);
    for (int it = 0; it < 200; ++it) {
        uint64_t x = rng() % 1023, y = rng() % 1023;
        if (x == y) continue;
        ExpInt s = zech_add(*z, x, y);
        EXPECT_EQ(exponent_to_state(c, x) ^ exponent_to_state(c, y), exponent_to_state(c, s));
    }
}

TEST(Cycles, CyclesAreTDecimations) {
    // cycle i at offsets j = (L^i m)^(t) read from position j
    BinPoly p = P("x^10+x^3+1");
    CycleCtx c = make_cycle_ctx(p, 11, brute("x^10+x^3+1"));
    BitSeq m{lfsr_bits(p, c.seed, 1023)};
    for (uint64_t i = 0; i < 11; ++i) {
        BitSeq u = decimate(m, 11, i);
        for (uint64_t j = 0; j < 93; j += 7) {
            BitVec s = exponent_to_state(c, i + 11 * j);
            for (size_t b = 0; b < 10; ++b) EXPECT_EQ(s.get(b), u[j + b]);
        }
    }
}

TEST(Cycles, CommutesWithDecimationMap) {
    // associated_irreducible(Psi_d(p), t) = Psi_d(associated_irreducible(p, t))
    for (const char* ps : {"x^4+x+1", "x^6+x+1"}) {
        BinPoly p = P(ps);
        uint64_t M = to_u64(mersenne(unsigned(p.degree())));
        for (uint64_t d = 1; d < M; ++d) {
            if (gcd_u64(d, M) != 1) continue;
            BinPoly pd = associated_irreducible(p, d).f;
            for (uint64_t t = 1; t < M; ++t) {
                if (M % t) continue;
                BinPoly lhs = associated_irreducible(pd, t).f;
                BinPoly rhs = associated_irreducible(associated_irreducible(p, t).f, d).f;
                EXPECT_EQ(lhs, rhs) << ps << " d=" << d << " t=" << t;
            }
        }
    }
}

TEST(Cycles, FindAssociatedPrimitive) {
    BinPoly a = find_associated_primitive(P("x^4+x^3+x^2+x+1"), 3);
    EXPECT_TRUE(a == P("x^4+x+1") || a == P("x^4+x^3+1"));
    EXPECT_EQ(a, P("x^4+x+1"));
    EXPECT_EQ(find_associated_primitive(P("x^2+x+1"), 1), P("x^2+x+1"));
    BinPoly f = P("x^10+x^9+x^5+x+1");
    BinPoly q = find_associated_primitive(f, 31);
    EXPECT_TRUE(is_primitive(q));
    BitSeq m = m_sequence(q, unit_state(10));
    EXPECT_EQ(berlekamp_massey(decimate(m, 31, 0).bits.slice(0, 20)), f);
    try {
        find_associated_primitive(f, 31, {3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::not_found);
    }
}

TEST(Cycles, InvalidT) {
    EXPECT_THROW(make_cycle_ctx(P("x^4+x+1"), 5, nullptr), Error);
    EXPECT_THROW(make_cycle_ctx(P("x^4+x+1"), 4, nullptr), Error);
    EXPECT_THROW(make_cycle_ctx(P("x^4+x^3+x^2+x+1"), 1, nullptr), Error);
}

TEST(Cycles, CtxSerialization) {
    auto z = brute("x^10+x^3+1");
    CycleCtx c = make_cycle_ctx(P("x^10+x^3+1"), 31, z);
    std::string line = format_ctx(c);
    EXPECT_EQ(line.rfind("ctx v1 10 31 n=10;{3} n=10;{9,5,1} ", 0), 0u);
    CycleCtx d = parse_ctx(line, z);
    EXPECT_EQ(d.seed, c.seed);
    EXPECT_EQ(d.f, c.f);
}
