#pragma once

// Cycle joining: conjugate pairs picked by a spanning tree become extra
// feedback terms prod_{i=1}^{n-1} (x_i + v_i + 1).  Also the product of
// distinct irreducibles, where each component keeps its own Zech table.

#include "anf.hpp"
#include "graph.hpp"

#include <unordered_set>

namespace debruijn {

// c_0..c_{n-1} of f = x^n + sum c_i x^i, i.e. h = sum c_i x_i.
inline BitVec feedback_taps(const BinPoly& f) {
    long n = f.degree();
    if (n < 1) throw Error(Errc::domain, "feedback needs degree >= 1");
    BitVec c(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i)
        if (f.coeff(size_t(i))) c.set(size_t(i));
    return c;
}

inline Anf feedback_anf(const BinPoly& f) { return Anf::linear(feedback_taps(f)); }

inline Anf join_feedback(Anf h, const std::vector<BitVec>& states, unsigned zero_cap = 24) {
    for (const BitVec& v : states) {
        if (v.size() != h.n()) throw Error(Errc::domain, "pair state width mismatch");
        h += tail_indicator(v, zero_cap);
    }
    return h;
}

// h = linear part + indicator of a set of tails.  The set form keeps
// large orders cheap; to_anf expands it when the tails are dense enough.
struct JoinedFeedback {
    unsigned n = 0;
    BitVec linear;
    std::unordered_set<BitVec, BitVecHash> tails;  // states with bit 0 cleared

    static JoinedFeedback from_poly(const BinPoly& f) {
        JoinedFeedback j;
        j.linear = feedback_taps(f);
        j.n = unsigned(j.linear.size());
        return j;
    }

    // Adding the same pair twice undoes it.
    void toggle_pair(BitVec v) {
        if (v.size() != n) throw Error(Errc::domain, "pair state width mismatch");
        v.set(0, false);
        auto it = tails.find(v);
        if (it == tails.end())
            tails.insert(std::move(v));
        else
            tails.erase(it);
    }

    bool eval(const BitVec& s) const {
        bool r = linear.dot(s);
        BitVec key = s;
        key.set(0, false);
        if (tails.count(key)) r = !r;
        return r;
    }

    Anf to_anf(unsigned zero_cap = 24) const {
        Anf a = Anf::linear(linear);
        for (const auto& v : tails) a += tail_indicator(v, zero_cap);
        return a;
    }

    // Degree without expanding.  The monomial x_S, S in [1, n-1], appears
    // in the tail terms iff an odd number of tails have their ones inside
    // S; search S = [1, n-1] \ D by growing |D|.
    long degree(unsigned depth_cap = 3) const {
        if (tails.empty()) return linear.any() ? 1 : -1;
        std::vector<BitVec> ts(tails.begin(), tails.end());
        std::vector<unsigned> pos;
        for (unsigned i = 1; i < n; ++i) pos.push_back(i);
        for (unsigned d = 0; d + 2 < n; ++d) {
            if (d > depth_cap) {
                unsigned max_zeros = 0;
                for (const auto& t : ts) max_zeros = std::max(max_zeros, unsigned(n - 1 - t.popcount()));
                if (max_zeros <= 22) return to_anf(22).degree();
                throw Error(Errc::budget, "degree search exceeded its depth cap");
            }
            std::vector<unsigned> idx(d);
            for (unsigned k = 0; k < d; ++k) idx[k] = k;
            for (;;) {
                BitVec dset(n);
                for (unsigned k : idx) dset.set(pos[k]);
                size_t cnt = 0;
                for (const auto& t : ts)
                    if (!t.intersects(dset)) ++cnt;
                if (cnt & 1) return long(n - 1 - d);
                // next d-combination of pos
                long k = long(d) - 1;
                while (k >= 0 && idx[size_t(k)] == pos.size() - d + unsigned(k)) --k;
                if (k < 0) break;
                ++idx[size_t(k)];
                for (size_t r = size_t(k) + 1; r < d; ++r) idx[r] = idx[r - 1] + 1;
            }
        }
        return 1;  // x_0 is always present
    }
};

// Tree edge -> the state of its pair on the smaller vertex (E_0 -> 0).
inline BitVec tree_edge_state(const CycleCtx& c, const TreeEdge& e) {
    if (e.a == 0) return BitVec(c.n);
    if (!e.left) throw Error(Errc::invalid_input, "tree edge " + vertex_name(e.a) + "-" + vertex_name(e.b) + " has no conjugate pair");
    ExpInt k = mod_nonneg(*e.left, c.modulus);
    if (cycle_vertex(to_u64(ExpInt(k % c.t))) != e.a) throw Error(Errc::invalid_input, "pair exponent is not on the edge's first cycle");
    if (c.zech) {
        auto tk = c.zech->lookup(k);
        if (tk && cycle_vertex(to_u64(ExpInt(*tk % c.t))) != e.b) throw Error(Errc::invalid_input, "pair conjugate is not on the edge's second cycle");
    }
    return exponent_to_state(c, k);
}

inline void check_tree_shape(const CycleCtx& c, const SpanningTree& tree) {
    size_t v = size_t(to_u64(c.t)) + 1;
    if (tree.vertices != v || tree.edges.size() + 1 != v) throw Error(Errc::invalid_input, "tree does not span the t+1 cycles");
    std::vector<size_t> parent(v);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : tree.edges) {
        if (e.a >= v || e.b >= v || e.a == e.b) throw Error(Errc::invalid_input, "tree edge out of range");
        if (e.a == 0 && e.b != 1) throw Error(Errc::invalid_input, "the zero cycle joins only [u0]");
        size_t ra = find(e.a), rb = find(e.b);
        if (ra == rb) throw Error(Errc::invalid_input, "tree has a cycle");
        parent[ra] = rb;
    }
}

inline JoinedFeedback joined_feedback(const CycleCtx& c, const SpanningTree& tree, bool zero_edge = true) {
    check_tree_shape(c, tree);
    JoinedFeedback j = JoinedFeedback::from_poly(c.f);
    for (const auto& e : tree.edges) {
        if (e.a == 0 && !zero_edge) continue;
        j.toggle_pair(tree_edge_state(c, e));
    }
    return j;
}

// 2^n bits from the state 0^n (n <= 26), by table lookup of the tails.
inline BitSeq materialize(const JoinedFeedback& j) {
    unsigned n = j.n;
    if (n > 26) throw Error(Errc::resource, "materialize needs n <= 26");
    uint64_t taps = j.linear.to_u64();
    std::vector<uint8_t> flag(size_t(1) << (n - 1), 0);
    for (const auto& t : j.tails) flag[t.to_u64() >> 1] ^= 1;
    uint64_t len = uint64_t(1) << n, s = 0;
    BitVec out(len);
    for (uint64_t k = 0; k < len; ++k) {
        if (s & 1) out.set(k);
        uint64_t fb = uint64_t(std::popcount(s & taps) & 1) ^ flag[s >> 1];
        s = (s >> 1) | (fb << (n - 1));
    }
    if (s != 0) throw Error(Errc::domain, "joined register does not return to 0^n after 2^n steps");
    return BitSeq{out};
}

// Resumable bit source for any n: one feedback evaluation per bit.
class DebruijnStream {
public:
    explicit DebruijnStream(JoinedFeedback j) : j_(std::move(j)), state_(j_.n) {}
    DebruijnStream(JoinedFeedback j, BitVec state) : j_(std::move(j)), state_(std::move(state)) {
        if (state_.size() != j_.n) throw Error(Errc::domain, "resume state width mismatch");
    }

    BitVec next_block(size_t bits) {
        BitVec out(bits);
        for (size_t k = 0; k < bits; ++k) {
            if (state_.get(0)) out.set(k);
            bool fb = j_.eval(state_);
            BitVec nxt = state_.slice(1, j_.n - 1);
            nxt.push_back(fb);
            state_ = std::move(nxt);
        }
        return out;
    }
    const BitVec& state() const { return state_; }

private:
    JoinedFeedback j_;
    BitVec state_;
};

enum class GenMode { materialize, stream };

inline BitSeq generate_debruijn(const CycleCtx& c, const SpanningTree& tree, GenMode mode = GenMode::materialize) {
    JoinedFeedback j = joined_feedback(c, tree, true);
    if (mode == GenMode::materialize) return materialize(j);
    if (c.n > 40) throw Error(Errc::resource, "a full period stream needs n <= 40");
    DebruijnStream s(j);
    return BitSeq{s.next_block(size_t(1) << c.n)};
}

// ---- product of distinct irreducibles ----

struct CycleLabel {
    std::vector<int64_t> cycle;  // -1: zero component
    std::vector<ExpInt> shift;   // L-power on each nonzero component, canonical
    friend bool operator<(const CycleLabel& a, const CycleLabel& b) { return std::tie(a.cycle, a.shift) < std::tie(b.cycle, b.shift); }
    friend bool operator==(const CycleLabel& a, const CycleLabel& b) { return a.cycle == b.cycle && a.shift == b.shift; }
};

inline std::string format_label(const CycleLabel& l) {
    std::string s = "[";
    bool any = false;
    for (size_t i = 0; i < l.cycle.size(); ++i) {
        if (l.cycle[i] < 0) continue;
        if (any) s += " + ";
        if (l.shift[i] != 0) s += "L^" + to_dec(l.shift[i]);
        s += "u" + std::to_string(i + 1) + "_" + std::to_string(l.cycle[i]);
        any = true;
    }
    if (!any) s += "0";
    return s + "]";
}

struct ProductCtx {
    unsigned n = 0;
    BinPoly f;
    std::vector<CycleCtx> comps;
    std::vector<size_t> offset;   // first coordinate of component i inside (v_1, ..., v_s)
    BitMatrix P, Pinv;            // v = (v_1, ..., v_s) P
    std::vector<BitVec> a;        // (a_1, ..., a_s) P = (1, 0, ..., 0)
    std::vector<std::optional<ExpInt>> gamma;
};

// Row r of P for the basis state e_j of component i: the first n terms of
// the f_i-sequence started at e_j.
inline ProductCtx make_product_ctx(std::vector<CycleCtx> comps) {
    if (comps.empty()) throw Error(Errc::invalid_input, "no components");
    ProductCtx pc;
    pc.f = BinPoly::one();
    for (size_t i = 0; i < comps.size(); ++i) {
        for (size_t k = 0; k < i; ++k)
            if (comps[k].f == comps[i].f) throw Error(Errc::invalid_input, "components must be pairwise distinct");
        pc.offset.push_back(pc.n);
        pc.n += comps[i].n;
        pc.f = pc.f * comps[i].f;
    }
    if (pc.n > 62) throw Error(Errc::resource, "product contexts need n <= 62");
    pc.P = BitMatrix(pc.n);
    for (size_t i = 0; i < comps.size(); ++i)
        for (size_t j = 0; j < comps[i].n; ++j) {
            BitVec e(comps[i].n);
            e.set(j);
            pc.P.row(pc.offset[i] + j) = lfsr_bits(comps[i].f, e, pc.n);
        }
    if (!pc.P.inverse(pc.Pinv)) throw Error(Errc::domain, "state combination matrix is singular");
    pc.comps = std::move(comps);
    BitVec e0(pc.n);
    e0.set(0);
    BitVec w = e0 * pc.Pinv;
    for (size_t i = 0; i < pc.comps.size(); ++i) {
        pc.a.push_back(w.slice(pc.offset[i], pc.comps[i].n));
        if (pc.a.back().none())
            pc.gamma.push_back(std::nullopt);
        else
            pc.gamma.push_back(state_to_exponent(pc.comps[i], pc.a.back()));
    }
    return pc;
}

inline std::vector<BitVec> split_state(const ProductCtx& pc, const BitVec& v) {
    BitVec w = v * pc.Pinv;
    std::vector<BitVec> out;
    for (size_t i = 0; i < pc.comps.size(); ++i) out.push_back(w.slice(pc.offset[i], pc.comps[i].n));
    return out;
}

inline BitVec join_state(const ProductCtx& pc, const std::vector<BitVec>& parts) {
    BitVec w(pc.n);
    for (size_t i = 0; i < parts.size(); ++i)
        for (size_t j = 0; j < parts[i].size(); ++j)
            if (parts[i].get(j)) w.set(pc.offset[i] + j);
    return w * pc.P;
}

struct ProductPos {
    CycleLabel label;
    ExpInt offset;  // v = T^offset (start of the labelled sequence)
    ExpInt period;
};

// From component exponents (nullopt = zero component) to the canonical
// label: the first nonzero component gets shift 0, each later one is
// reduced modulo gcd(lcm of the earlier periods, its own period).
inline ProductPos product_position_from_exponents(const ProductCtx& pc, const std::vector<std::optional<ExpInt>>& ks) {
    ProductPos pos;
    size_t s = pc.comps.size();
    pos.label.cycle.assign(s, -1);
    pos.label.shift.assign(s, ExpInt(0));
    std::vector<ExpInt> j(s), e(s);
    long first = -1;
    for (size_t i = 0; i < s; ++i) {
        if (!ks[i]) continue;
        const CycleCtx& c = pc.comps[i];
        ExpInt k = mod_nonneg(*ks[i], c.modulus);
        pos.label.cycle[i] = int64_t(to_u64(ExpInt(k % c.t)));
        j[i] = k / c.t;
        e[i] = c.e;
        if (first < 0) first = long(i);
    }
    if (first < 0) {
        pos.offset = 0;
        pos.period = 1;
        return pos;
    }
    ExpInt delta = j[size_t(first)];
    ExpInt moved = 0;  // total shift applied to the label
    for (size_t i = 0; i < s; ++i)
        if (pos.label.cycle[i] >= 0) pos.label.shift[i] = mod_nonneg(j[i] - delta, e[i]);
    ExpInt run = e[size_t(first)];
    for (size_t i = size_t(first) + 1; i < s; ++i) {
        if (pos.label.cycle[i] < 0) continue;
        ExpInt g;
        mpz_gcd(g.get_mpz_t(), run.get_mpz_t(), e[i].get_mpz_t());
        ExpInt l = pos.label.shift[i];
        ExpInt r = l % g;
        if (l != r) {
            // m * run = r - l (mod e_i)
            ExpInt mod = e[i] / g, a = (run / g) % mod, inv;
            mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t());
            ExpInt m = mod_nonneg(((r - l) / g) * inv, mod);
            ExpInt x = m * run;
            moved += x;
            for (size_t k = i; k < s; ++k)
                if (pos.label.cycle[k] >= 0) pos.label.shift[k] = mod_nonneg(pos.label.shift[k] + x, e[k]);
        }
        mpz_lcm(run.get_mpz_t(), run.get_mpz_t(), e[i].get_mpz_t());
    }
    pos.period = run;
    pos.offset = mod_nonneg(delta - moved, run);
    return pos;
}

inline std::vector<std::optional<ExpInt>> component_exponents(const ProductCtx& pc, const std::vector<BitVec>& parts) {
    std::vector<std::optional<ExpInt>> ks;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].none())
            ks.push_back(std::nullopt);
        else
            ks.push_back(state_to_exponent(pc.comps[i], parts[i]));
    }
    return ks;
}

inline ProductPos product_position(const ProductCtx& pc, const BitVec& v) {
    return product_position_from_exponents(pc, component_exponents(pc, split_state(pc, v)));
}

inline BitVec label_start_state(const ProductCtx& pc, const CycleLabel& l) {
    std::vector<BitVec> parts;
    for (size_t i = 0; i < pc.comps.size(); ++i) {
        const CycleCtx& c = pc.comps[i];
        if (l.cycle[i] < 0)
            parts.push_back(BitVec(c.n));
        else
            parts.push_back(exponent_to_state(c, ExpInt(l.cycle[i]) + c.t * l.shift[i]));
    }
    return join_state(pc, parts);
}

struct ProductCycle {
    CycleLabel label;
    ExpInt period;
};

// Every cycle of the product register; the count is a product over
// components, so keep it small.
inline std::vector<ProductCycle> product_cycle_structure(const ProductCtx& pc, size_t cap = 1 << 20) {
    std::vector<ProductCycle> out;
    size_t s = pc.comps.size();
    CycleLabel cur;
    cur.cycle.assign(s, -1);
    cur.shift.assign(s, ExpInt(0));
    std::function<void(size_t, ExpInt)> rec = [&](size_t i, ExpInt run) {
        if (out.size() > cap) throw Error(Errc::resource, "too many cycles to list");
        if (i == s) {
            out.push_back({cur, run});
            return;
        }
        const CycleCtx& c = pc.comps[i];
        cur.cycle[i] = -1;
        cur.shift[i] = 0;
        rec(i + 1, run);
        uint64_t t = to_u64(c.t);
        for (uint64_t ci = 0; ci < t; ++ci) {
            cur.cycle[i] = int64_t(ci);
            if (run == 1) {
                cur.shift[i] = 0;
                rec(i + 1, c.e);
            } else {
                ExpInt g, l;
                mpz_gcd(g.get_mpz_t(), run.get_mpz_t(), c.e.get_mpz_t());
                mpz_lcm(l.get_mpz_t(), run.get_mpz_t(), c.e.get_mpz_t());
                for (ExpInt sh = 0; sh < g; ++sh) {
                    cur.shift[i] = sh;
                    rec(i + 1, l);
                }
            }
        }
        cur.cycle[i] = -1;
        cur.shift[i] = 0;
    };
    rec(0, ExpInt(1));
    return out;
}

struct ProductConjugate {
    BitVec state;
    ProductPos pos;
};

// b_i = v_i + a_i computed on exponents: gamma_i + tau_i(j_i - gamma_i).
inline ProductConjugate product_conjugate(const ProductCtx& pc, const BitVec& v) {
    auto parts = split_state(pc, v);
    auto ks = component_exponents(pc, parts);
    std::vector<std::optional<ExpInt>> bs;
    for (size_t i = 0; i < pc.comps.size(); ++i) {
        const CycleCtx& c = pc.comps[i];
        const auto& g = pc.gamma[i];
        if (!g) {
            bs.push_back(ks[i]);
        } else if (!ks[i]) {
            bs.push_back(g);
        } else {
            ExpInt d = mod_nonneg(*ks[i] - *g, c.modulus);
            if (d == 0) {
                bs.push_back(std::nullopt);
            } else {
                if (!c.zech) throw Error(Errc::missing_entry, "component has no Zech table");
                bs.push_back(mod_nonneg(*g + c.zech->resolve(d), c.modulus));
            }
        }
    }
    std::vector<BitVec> bparts;
    for (size_t i = 0; i < pc.comps.size(); ++i) bparts.push_back(bs[i] ? exponent_to_state(pc.comps[i], *bs[i]) : BitVec(pc.comps[i].n));
    ProductConjugate out;
    out.state = join_state(pc, bparts);
    BitVec expect = v;
    expect.flip(0);
    if (!(out.state == expect)) throw Error(Errc::corrupt_table, "conjugate does not differ in the first bit only");
    out.pos = product_position_from_exponents(pc, bs);
    return out;
}

struct ProductGraph {
    std::vector<ProductCycle> cycles;
    std::map<CycleLabel, size_t> index;
    MultMatrix mult;
    std::vector<std::tuple<size_t, size_t, BitVec>> pairs;  // (cycle of v, cycle of v-hat, v with v_0 = 0)
};

// All conjugate pairs of a small product register (n <= 20).
inline ProductGraph product_adjacency(const ProductCtx& pc) {
    if (pc.n > 20) throw Error(Errc::resource, "exhaustive pair listing needs n <= 20");
    ProductGraph g;
    g.cycles = product_cycle_structure(pc);
    for (size_t i = 0; i < g.cycles.size(); ++i) g.index[g.cycles[i].label] = i;
    g.mult.assign(g.cycles.size(), std::vector<uint64_t>(g.cycles.size(), 0));
    for (uint64_t x = 0; x < (uint64_t(1) << pc.n); x += 2) {
        BitVec v = BitVec::from_u64(x, pc.n);
        ProductConjugate cj = product_conjugate(pc, v);
        size_t a = g.index.at(product_position(pc, v).label), b = g.index.at(cj.pos.label);
        if (a == b) continue;
        g.mult[a][b]++;
        g.mult[b][a]++;
        g.pairs.emplace_back(a, b, v);
    }
    return g;
}

// Seeded Kruskal over the listed pairs; returns the joined register.
inline JoinedFeedback join_product(const ProductCtx& pc, const ProductGraph& g, uint64_t seed) {
    std::vector<size_t> order(g.pairs.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    shuffle_seeded(order, rng);
    std::vector<size_t> parent(g.cycles.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    JoinedFeedback j = JoinedFeedback::from_poly(pc.f);
    size_t used = 0;
    for (size_t k : order) {
        auto& [a, b, v] = g.pairs[k];
        size_t ra = find(a), rb = find(b);
        if (ra == rb) continue;
        parent[ra] = rb;
        j.toggle_pair(v);
        ++used;
    }
    if (used + 1 != g.cycles.size()) throw Error(Errc::disconnected, "product adjacency graph is disconnected");
    return j;
}

}  // namespace debruijn
