#pragma once

// Conjugate pairs between the cycles of an irreducible LFSR: the state of
// alpha^k and the state of alpha^tau(k) differ only in the first bit.

#include "cycles.hpp"

#include <map>
#include <ostream>

namespace debruijn {

struct ConjugatePair {
    CyclePos left, right;
};

inline CyclePos conjugate_of(const CycleCtx& c, const CyclePos& pos) {
    if (pos.zero) return cycle_position(c, ExpInt(0));
    if (pos.exponent == 0) return zero_position(c);
    if (!c.zech) throw Error(Errc::missing_entry, "no Zech table attached");
    return cycle_position(c, c.zech->resolve(pos.exponent));
}

inline ConjugatePair conjugate_pair(const CycleCtx& c, const ExpInt& k) {
    CyclePos a = cycle_position(c, k);
    return ConjugatePair{a, conjugate_of(c, a)};
}

// Unordered pair of cycle indices with the number of conjugate pairs the
// batch contributes to it.
struct CycleEdge {
    ExpInt a, b;  // a < b
    uint64_t count = 0;
};

struct CosetPairBatch {
    ExpInt source;      // j
    ExpInt target;      // tau(j)
    ExpInt source_leader, target_leader;
    unsigned n_j = 0;   // coset size
    unsigned m_j = 0;   // least m with (2^m - 1) j = 0 mod t
    bool same_cycle = false;
    bool self_paired = false;  // D_j = D_tau(j): only n_j/2 distinct pairs
    std::vector<CycleEdge> cycle_pairs;
    ExpInt modulus;
    unsigned n = 0;

    size_t size() const { return self_paired ? n_j / 2 : n_j; }

    // The s-th exponent pair (2^s j, 2^s tau(j)).
    std::pair<ExpInt, ExpInt> exponents(size_t s) const {
        return {detail::times_pow2(source, unsigned(s), n), detail::times_pow2(target, unsigned(s), n)};
    }
};

inline CosetPairBatch pairs_from_coset(const CycleCtx& c, const ExpInt& j) {
    if (!c.zech) throw Error(Errc::missing_entry, "no Zech table attached");
    CosetPairBatch b;
    b.n = c.n;
    b.modulus = c.modulus;
    b.source = mod_nonneg(j, c.modulus);
    if (b.source == 0) throw Error(Errc::domain, "j must be nonzero");
    b.target = c.zech->resolve(b.source);
    Coset cj = coset_leader(b.source, c.n), ct = coset_leader(b.target, c.n);
    b.source_leader = cj.leader;
    b.target_leader = ct.leader;
    b.n_j = cj.size;
    b.self_paired = cj.leader == ct.leader;
    for (unsigned m = 1; m <= cj.size; ++m) {
        ExpInt v = (mersenne(m) * b.source) % c.t;
        if (v == 0) {
            b.m_j = m;
            break;
        }
    }
    if (b.source % c.t == b.target % c.t) {
        b.same_cycle = true;
        return b;
    }
    std::map<std::pair<ExpInt, ExpInt>, uint64_t> group;
    for (size_t s = 0; s < b.size(); ++s) {
        auto [x, y] = b.exponents(s);
        ExpInt cx = x % c.t, cy = y % c.t;
        if (cy < cx) std::swap(cx, cy);
        group[{cx, cy}]++;
    }
    for (auto& [k, v] : group) b.cycle_pairs.push_back(CycleEdge{k.first, k.second, v});
    return b;
}

// Pair dump line: "k tau(k) i j l m" (left cycle/offset, right cycle/offset).
inline void write_pair(std::ostream& os, const CycleCtx& c, const ExpInt& k) {
    ExpInt tk = c.zech->resolve(k);
    os << to_dec(k) << " " << to_dec(tk) << " " << to_dec(k % c.t) << " " << to_dec(k / c.t) << " " << to_dec(tk % c.t)
       << " " << to_dec(tk / c.t) << "\n";
}

// (i,j)_t = #{k in [1, M-1] : k = i, tau(k) = j (mod t)}.  k = 0 (xi = 1,
// xi + 1 = 0) lies in no class and is left out.
inline std::vector<std::vector<uint64_t>> cyclotomic_numbers(const CycleCtx& c) {
    if (!c.zech || !c.zech->complete()) throw Error(Errc::missing_entry, "cyclotomic numbers need a complete Zech table");
    if (c.n > 30) throw Error(Errc::resource, "cyclotomic numbers need n <= 30");
    uint64_t t = to_u64(c.t);
    std::vector<std::vector<uint64_t>> out(t, std::vector<uint64_t>(t, 0));
    auto d = c.zech->dense();
    for (uint64_t k = 1; k < d.size(); ++k) out[k % t][d[k] % t]++;
    return out;
}

}  // namespace debruijn
