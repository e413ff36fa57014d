#pragma once

// Cycle structure of an irreducible f with root beta = alpha^t, alpha a root
// of a primitive p.  The phi map sends alpha^k to the n-bit window of the
// t-decimated m-sequence; cycle i holds the exponents k = i (mod t).

#include "zech.hpp"

#include <memory>

namespace debruijn {

struct CycleCtx {
    unsigned n = 0;
    ExpInt t, e, modulus;
    BinPoly p, f;
    std::shared_ptr<const ZechTable> zech;
    BitVec seed;               // m-sequence start making u0 start at (1,0,...,0)
    std::vector<BitVec> taps;  // taps[i] = column 0 of A_p^(i t)
    BitMatrix window_inv;      // inverse of the u0 window matrix (beta basis)
};

struct CyclePos {
    bool zero = false;  // the [0] cycle
    ExpInt cycle;       // i in [0, t-1]
    ExpInt offset;      // j in [0, e-1]
    ExpInt exponent;    // i + t j
    BitVec state;
};

// Solves <v, column0(A^(i t))> = [i == 0] for i < n.
inline BitVec u0_seed_state(const BinPoly& p, const ExpInt& t) {
    long nl = p.degree();
    size_t n = size_t(nl);
    BitMatrix at = mat_pow(companion_matrix(p), t);
    BitMatrix rows(n);
    BitVec col = unit_state(n);  // column 0 of the identity
    for (size_t i = 0; i < n; ++i) {
        rows.row(i) = col;
        col = at.apply(col);
    }
    BitVec v;
    if (!rows.solve(unit_state(n), v)) throw Error(Errc::domain, "seed system is singular; t is not valid for p");
    return v;
}

struct CtxOptions {
    bool check_primitive = true;  // skipped automatically above the bundled factor table
};

inline CycleCtx make_cycle_ctx(const BinPoly& p, const ExpInt& t, std::shared_ptr<const ZechTable> zech, CtxOptions opt = {}) {
    CycleCtx c;
    long nl = p.degree();
    if (nl < 1 || !p.coeff(0)) throw Error(Errc::invalid_input, "p must have degree >= 1 and constant term 1");
    c.n = unsigned(nl);
    c.p = p;
    c.modulus = mersenne(c.n);
    if (t < 1 || c.modulus % t != 0) throw Error(Errc::invalid_input, "t must divide 2^n-1");
    c.t = t;
    c.e = c.modulus / t;
    if (opt.check_primitive && c.n <= 64) {
        if (!is_primitive(p)) throw Error(Errc::invalid_input, format_set(p) + " is not primitive");
    } else if (!is_irreducible(p)) {
        throw Error(Errc::invalid_input, format_set(p) + " is not irreducible");
    }
    AssociatedPoly a = associated_irreducible(p, t);
    if (!a.valid)
        throw Error(Errc::invalid_input, "t=" + to_dec(t) + " is not valid: associated polynomial has degree " + std::to_string(a.degree));
    c.f = a.f;
    if (zech && zech->polynomial() != p) throw Error(Errc::invalid_input, "Zech table belongs to another polynomial");
    c.zech = std::move(zech);

    BitMatrix at = mat_pow(companion_matrix(p), t);
    BitMatrix rows(c.n);
    BitVec col = unit_state(c.n);
    for (size_t i = 0; i < c.n; ++i) {
        c.taps.push_back(col);
        rows.row(i) = col;
        col = at.apply(col);
    }
    if (!rows.solve(unit_state(c.n), c.seed)) throw Error(Errc::domain, "seed system is singular");

    // Row l of the window matrix is phi(beta^l): u0 read from position l.
    BitVec u0 = lfsr_bits(c.f, unit_state(c.n), 2 * c.n - 1);
    BitMatrix w(c.n);
    for (size_t l = 0; l < c.n; ++l) w.row(l) = u0.slice(l, c.n);
    if (!w.inverse(c.window_inv)) throw Error(Errc::domain, "window matrix is singular");
    return c;
}

inline BitVec exponent_to_state(const CycleCtx& c, const ExpInt& k) {
    BitVec w = lfsr_state_at(c.p, c.seed, mod_nonneg(k, c.modulus));
    BitVec out(c.n);
    for (size_t i = 0; i < c.n; ++i)
        if (w.dot(c.taps[i])) out.set(i);
    return out;
}

// Coordinates (a_0, ..., a_{n-1}) of the field element in the basis
// 1, beta, ..., beta^(n-1).
inline BitVec beta_coordinates(const CycleCtx& c, const BitVec& v) { return v * c.window_inv; }

// log(alpha^x + alpha^y) = y + tau(x - y)
inline ExpInt zech_add(const ZechTable& z, const ExpInt& x, const ExpInt& y) {
    const ExpInt& m = z.modulus();
    ExpInt d = mod_nonneg(x - y, m);
    if (d == 0) throw Error(Errc::domain, "alpha^x + alpha^x = 0 has no logarithm");
    return mod_nonneg(y + z.resolve(d), m);
}

inline ExpInt state_to_exponent(const CycleCtx& c, const BitVec& v) {
    if (v.size() != c.n) throw Error(Errc::domain, "state length mismatch");
    if (v.none()) throw Error(Errc::domain, "the zero state has no exponent");
    BitVec a = beta_coordinates(c, v);
    std::optional<ExpInt> acc;
    for (size_t l = 0; l < c.n; ++l) {
        if (!a.get(l)) continue;
        ExpInt x = mod_nonneg(c.t * l, c.modulus);
        if (!acc) {
            acc = x;
        } else {
            if (!c.zech) throw Error(Errc::missing_entry, "no Zech table attached");
            acc = zech_add(*c.zech, *acc, x);
        }
    }
    return *acc;
}

inline CyclePos cycle_position(const CycleCtx& c, const ExpInt& k0) {
    CyclePos pos;
    pos.exponent = mod_nonneg(k0, c.modulus);
    pos.cycle = pos.exponent % c.t;
    pos.offset = pos.exponent / c.t;
    pos.state = exponent_to_state(c, pos.exponent);
    return pos;
}

inline CyclePos cycle_position(const CycleCtx& c, const BitVec& v) {
    if (v.none()) {
        CyclePos z;
        z.zero = true;
        z.state = BitVec(c.n);
        return z;
    }
    CyclePos pos;
    pos.exponent = state_to_exponent(c, v);
    pos.cycle = pos.exponent % c.t;
    pos.offset = pos.exponent / c.t;
    pos.state = v;
    return pos;
}

inline CyclePos zero_position(const CycleCtx& c) {
    CyclePos z;
    z.zero = true;
    z.state = BitVec(c.n);
    return z;
}

struct PrimitiveSearchOptions {
    uint64_t budget = uint64_t(1) << 20;  // candidates examined
};

// Scans x^n + (middle terms) + 1 in increasing order of the middle-term mask
// for a primitive p with associated_irreducible(p, t) = f.
inline BinPoly find_associated_primitive(const BinPoly& f, const ExpInt& t, PrimitiveSearchOptions opt = {}) {
    long nl = f.degree();
    if (nl < 1) throw Error(Errc::domain, "degree must be positive");
    unsigned n = unsigned(nl);
    if (n > 64) throw Error(Errc::unsupported_degree, "primitive search needs n <= 64");
    if (!is_irreducible(f)) throw Error(Errc::domain, "f must be irreducible");
    if (n == 1) {
        if (f == parse_poly("x+1") && t == 1) return f;
        throw Error(Errc::not_found, "no associate of degree 1");
    }
    uint64_t masks = n >= 2 ? (uint64_t(1) << std::min(n - 1, 63u)) : 1;
    uint64_t examined = 0;
    for (uint64_t mask = 0; mask < masks; ++mask) {
        if (++examined > opt.budget) break;
        BinPoly cand = BinPoly::monomial(n) + BinPoly::one();
        for (unsigned i = 1; i < n; ++i)
            if ((mask >> (i - 1)) & 1) cand.toggle(i);
        if (cand.weight() % 2 == 0) continue;  // divisible by x+1
        if (!is_primitive(cand)) continue;
        if (associated_irreducible(cand, t).f == f) return cand;
    }
    throw Error(Errc::not_found, "no primitive associate of " + format_set(f) + " within budget");
}

inline std::string format_ctx(const CycleCtx& c) {
    return "ctx v1 " + std::to_string(c.n) + " " + to_dec(c.t) + " " + format_set(c.p) + " " + format_set(c.f) + " " + c.seed.to_hex();
}

inline CycleCtx parse_ctx(const std::string& line, std::shared_ptr<const ZechTable> zech) {
    std::istringstream is(line);
    std::string magic, ver, n, t, p, f, seed;
    if (!(is >> magic >> ver >> n >> t >> p >> f >> seed) || magic != "ctx" || ver != "v1")
        throw Error(Errc::invalid_input, "bad ctx line");
    CycleCtx c = make_cycle_ctx(parse_poly(p), parse_exp(t), std::move(zech), {false});
    if (std::to_string(c.n) != n || format_set(c.f) != f || c.seed.to_hex() != seed)
        throw Error(Errc::invalid_input, "ctx line inconsistent with its polynomial");
    return c;
}

}  // namespace debruijn
