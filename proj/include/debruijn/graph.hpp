#pragma once

// Adjacency subgraphs on the cycles [0], [u_0], ..., [u_{t-1}] of an
// irreducible LFSR, spanning-tree counting and star certificates.

#include "conjugacy.hpp"

#include <numeric>
#include <set>

namespace debruijn {

using BigMatrix = std::vector<std::vector<mpz_class>>;

// Fraction-free Gaussian elimination; exact for integer matrices.
inline mpz_class bareiss_det(BigMatrix m) {
    size_t n = m.size();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Vertex 0 is the zero cycle, vertex i+1 is [u_i].
struct AdjSubgraph {
    unsigned n = 0;
    uint64_t t = 0;
    std::vector<std::vector<uint64_t>> mult;
    // Representative pairs keyed by (a, b), a < b: exponents k with phi(alpha^k)
    // on vertex a and its conjugate on vertex b.  The zero edge stores k = 0.
    std::map<std::pair<size_t, size_t>, std::vector<ExpInt>> reps;
    size_t rep_cap = 64;

    size_t vertices() const { return mult.size(); }
    uint64_t degree(size_t v) const { return std::accumulate(mult[v].begin(), mult[v].end(), uint64_t(0)); }
};

inline size_t cycle_vertex(uint64_t i) { return size_t(i) + 1; }

inline AdjSubgraph empty_subgraph(unsigned n, uint64_t t) {
    if (t == 0) throw Error(Errc::invalid_input, "t must be positive");
    if (t > (uint64_t(1) << 16)) throw Error(Errc::resource, "subgraph needs t <= 65536");
    AdjSubgraph g;
    g.n = n;
    g.t = t;
    g.mult.assign(size_t(t) + 1, std::vector<uint64_t>(size_t(t) + 1, 0));
    g.mult[0][1] = g.mult[1][0] = 1;  // E_0: the zero state and phi(1)
    g.reps[{0, 1}].push_back(ExpInt(0));
    return g;
}

inline void add_edge(AdjSubgraph& g, size_t a, size_t b, uint64_t count, const ExpInt* rep_on_a = nullptr, const ExpInt* rep_on_b = nullptr) {
    if (a == b) throw Error(Errc::domain, "loops are not edges");
    if (a == 0 || b == 0) throw Error(Errc::domain, "the zero cycle has only E_0");
    g.mult[a][b] += count;
    g.mult[b][a] += count;
    auto& r = g.reps[{std::min(a, b), std::max(a, b)}];
    if (r.size() >= g.rep_cap) return;
    if (a < b && rep_on_a) r.push_back(*rep_on_a);
    if (a > b && rep_on_b) r.push_back(*rep_on_b);
}

struct SubgraphStats {
    size_t batches = 0, same_cycle = 0, duplicates = 0;
};

// Accumulates the pairs of each coset batch.  A coset and its image coset
// carry the same pairs, so each unordered coset pair is used once.
inline AdjSubgraph build_subgraph(const CycleCtx& c, const std::vector<ExpInt>& cosets, SubgraphStats* stats = nullptr) {
    AdjSubgraph g = empty_subgraph(c.n, to_u64(c.t));
    std::set<ExpInt> used;
    SubgraphStats st;
    for (const ExpInt& j : cosets) {
        CosetPairBatch b = pairs_from_coset(c, j);
        ExpInt key = std::min(b.source_leader, b.target_leader);
        if (!used.insert(key).second) {
            ++st.duplicates;
            continue;
        }
        ++st.batches;
        if (b.same_cycle) {
            ++st.same_cycle;
            continue;
        }
        for (size_t s = 0; s < b.size(); ++s) {
            auto [x, y] = b.exponents(s);
            uint64_t cx = to_u64(ExpInt(x % c.t)), cy = to_u64(ExpInt(y % c.t));
            add_edge(g, cycle_vertex(cx), cycle_vertex(cy), 1, &x, &y);
        }
    }
    if (stats) *stats = st;
    return g;
}

// Every coset leader of a complete table (n <= 30).
inline AdjSubgraph build_full_subgraph(const CycleCtx& c) {
    if (!c.zech || !c.zech->complete()) throw Error(Errc::missing_entry, "the full graph needs a complete Zech table");
    if (c.n > 30) throw Error(Errc::resource, "the full graph needs n <= 30");
    std::vector<ExpInt> leaders;
    for (const auto& row : c.zech->rows()) leaders.push_back(row.leader);
    return build_subgraph(c, leaders);
}

// Adds the cycle pairs (2^s a, 2^s b) mod t, s = 0, 1, ..., until the pair
// repeats, each with `count` conjugate pairs.  This is how a known
// (i, tau(i) mod t) residue pair is turned into edges without the table.
inline size_t add_coset_family(AdjSubgraph& g, uint64_t a, uint64_t b, uint64_t count) {
    uint64_t t = g.t;
    a %= t;
    b %= t;
    std::set<std::pair<uint64_t, uint64_t>> seen;
    size_t added = 0;
    while (seen.insert({a, b}).second) {
        if (a != b) {
            add_edge(g, cycle_vertex(a), cycle_vertex(b), count);
            ++added;
        }
        a = (2 * a) % t;
        b = (2 * b) % t;
    }
    return added;
}

using MultMatrix = std::vector<std::vector<uint64_t>>;

inline bool is_connected(const MultMatrix& mult) {
    size_t v = mult.size();
    if (v == 0) return true;
    std::vector<char> seen(v, 0);
    std::vector<size_t> stack{0};
    seen[0] = 1;
    size_t count = 1;
    while (!stack.empty()) {
        size_t x = stack.back();
        stack.pop_back();
        for (size_t y = 0; y < v; ++y)
            if (mult[x][y] && !seen[y]) {
                seen[y] = 1;
                ++count;
                stack.push_back(y);
            }
    }
    return count == v;
}

inline bool is_connected(const AdjSubgraph& g) { return is_connected(g.mult); }

struct TreeCount {
    mpz_class value;
    double log2 = 0;
};

// Matrix-tree theorem on a loopless multigraph: determinant of the
// Laplacian with row and column `drop` removed.
inline TreeCount count_spanning_trees(const MultMatrix& mult, size_t drop = 0) {
    size_t v = mult.size();
    if (drop >= v) throw Error(Errc::domain, "cofactor index out of range");
    TreeCount r;
    if (!is_connected(mult)) {
        r.value = 0;
        r.log2 = -INFINITY;
        return r;
    }
    BigMatrix m;
    for (size_t i = 0; i < v; ++i) {
        if (i == drop) continue;
        std::vector<mpz_class> row;
        mpz_class deg = 0;
        for (size_t j = 0; j < v; ++j)
            if (j != i) deg += from_u64(mult[i][j]);
        for (size_t j = 0; j < v; ++j) {
            if (j == drop) continue;
            row.push_back(i == j ? deg : mpz_class(-from_u64(mult[i][j])));
        }
        m.push_back(std::move(row));
    }
    r.value = bareiss_det(std::move(m));
    r.log2 = log2_exact(r.value);
    return r;
}

inline TreeCount count_spanning_trees(const AdjSubgraph& g, size_t drop = 0) { return count_spanning_trees(g.mult, drop); }

// Star and almost-star certificates.  center = 0 is a star at [u_0];
// center = l > 0 is a star at [u_l] over the nonzero cycles with E_0 hung
// off [u_0].
struct TreeCert {
    unsigned n = 0;
    BinPoly p, f;
    uint64_t t = 0, center = 0;
    bool found = false;
    std::vector<uint64_t> witness;  // odd k
    std::vector<ExpInt> delta;      // i = k t + center
    std::vector<uint64_t> ys;       // tau(i) mod t
    uint64_t cp = 0;
    std::vector<std::vector<int64_t>> matrix;
    mpz_class dbseqs = 0;
    double log2 = 0;
    uint64_t examined = 0, missing = 0;
};

struct CertOptions {
    uint64_t s_max = 2000;  // largest t tried by certify_star
    uint64_t z_max = 2000;  // odd multipliers tried per t
};

namespace detail {

inline std::vector<uint64_t> orbit_mod(uint64_t x, uint64_t t) {
    std::vector<uint64_t> o;
    uint64_t y = x % t;
    do {
        o.push_back(y);
        y = (2 * y) % t;
    } while (y != x % t);
    return o;
}

}  // namespace detail

// One (p, t, center) run of the certificate search.  f must already be
// known to have degree n.
inline TreeCert certify_center(const ZechTable& z, const BinPoly& f, uint64_t t, uint64_t center, uint64_t z_max) {
    TreeCert c;
    c.n = z.degree();
    c.p = z.polynomial();
    c.f = f;
    c.t = t;
    c.center = center;
    if (t < 2) throw Error(Errc::invalid_input, "t must be at least 2");
    if (center >= t) throw Error(Errc::invalid_input, "center must lie in [0, t-1]");
    const ExpInt& N = z.modulus();
    std::vector<char> done(t, 0);
    done[center] = 1;
    uint64_t covered = 1;
    for (uint64_t k = 1; k <= z_max && covered < t; ++k) {
        uint64_t odd = 2 * k - 1;
        ExpInt i = mod_nonneg(ExpInt(from_u64(odd)) * from_u64(t) + from_u64(center), N);
        ++c.examined;
        if (i == 0) continue;
        auto tau = z.lookup(i);
        if (!tau) {
            ++c.missing;
            continue;
        }
        uint64_t L = to_u64(ExpInt(*tau % from_u64(t)));
        // Done is tested at the coset leader of L, so the bare center does
        // not block its own orbit.
        uint64_t lead = to_u64(ExpInt(coset_leader(from_u64(L), c.n).leader % from_u64(t)));
        if (done[lead]) continue;
        auto orbit = detail::orbit_mod(L, t);
        c.witness.push_back(odd);
        c.delta.push_back(i);
        c.ys.push_back(L);
        for (uint64_t y : orbit)
            if (!done[y]) {
                done[y] = 1;
                ++covered;
            }
        if (covered == t) c.cp = c.n / orbit.size();
    }
    if (covered < t) return c;
    c.found = true;
    int64_t cp = int64_t(c.cp);
    size_t T = size_t(t);
    c.matrix.assign(T, std::vector<int64_t>(T, 0));
    size_t L = size_t(center);
    if (center == 0) {
        c.matrix[0][0] = cp * int64_t(t - 1) + 1;
        for (size_t r = 1; r < T; ++r) {
            c.matrix[r][r] = cp;
            c.matrix[0][r] = c.matrix[r][0] = -cp;
        }
    } else {
        c.matrix[0][0] = 1 + cp;
        c.matrix[0][L] = c.matrix[L][0] = -cp;
        for (size_t r = 1; r < T; ++r) {
            c.matrix[r][r] = cp;
            c.matrix[L][r] = c.matrix[r][L] = -cp;
        }
        c.matrix[L][L] = cp * int64_t(t - 1);
    }
    BigMatrix m(T, std::vector<mpz_class>(T));
    for (size_t i = 0; i < T; ++i)
        for (size_t j = 0; j < T; ++j) m[i][j] = mpz_class(static_cast<signed long>(c.matrix[i][j]));
    c.dbseqs = bareiss_det(std::move(m));
    c.log2 = log2_exact(c.dbseqs);
    return c;
}

// Valid t in [3, s_max]: t | 2^n - 1 and the associated polynomial has
// degree n.  Needs n <= 64 to factor 2^n - 1 cheaply.
inline std::vector<uint64_t> valid_ts(const BinPoly& p, uint64_t s_max) {
    unsigned n = unsigned(p.degree());
    ExpInt N = mersenne(n);
    std::vector<uint64_t> out;
    for (uint64_t t = 3; t <= s_max; ++t) {
        if (N % from_u64(t) != 0) continue;
        if (associated_irreducible(p, t).valid) out.push_back(t);
    }
    return out;
}

inline std::vector<TreeCert> certify_star(const ZechTable& z, CertOptions opt = {}) {
    std::vector<TreeCert> out;
    for (uint64_t t : valid_ts(z.polynomial(), opt.s_max)) {
        BinPoly f = associated_irreducible(z.polynomial(), t).f;
        out.push_back(certify_center(z, f, t, 0, opt.z_max));
    }
    return out;
}

inline TreeCert certify_star_at(const ZechTable& z, uint64_t t, uint64_t z_max = 2000) {
    AssociatedPoly a = associated_irreducible(z.polynomial(), t);
    if (!a.valid) throw Error(Errc::invalid_input, "t=" + std::to_string(t) + " is not valid for " + format_set(z.polynomial()));
    return certify_center(z, a.f, t, 0, z_max);
}

inline TreeCert certify_almost_star(const ZechTable& z, uint64_t t, uint64_t l, uint64_t z_max = 2000) {
    if (l < 1 || l >= t) throw Error(Errc::invalid_input, "l must lie in [1, t-1]");
    AssociatedPoly a = associated_irreducible(z.polynomial(), t);
    if (!a.valid) throw Error(Errc::invalid_input, "t=" + std::to_string(t) + " is not valid for " + format_set(z.polynomial()));
    return certify_center(z, a.f, t, l, z_max);
}

// l = 1, 2, ... in order; the first certificate found.
inline std::optional<TreeCert> find_almost_star(const ZechTable& z, uint64_t t, uint64_t z_max = 2000) {
    AssociatedPoly a = associated_irreducible(z.polynomial(), t);
    if (!a.valid) throw Error(Errc::invalid_input, "t=" + std::to_string(t) + " is not valid for " + format_set(z.polynomial()));
    for (uint64_t l = 1; l < t; ++l) {
        TreeCert c = certify_center(z, a.f, t, l, z_max);
        if (c.found) return c;
    }
    return std::nullopt;
}

// The subgraph a certificate describes: every leaf joined to the center
// by cp pairs, plus E_0.
inline AdjSubgraph certificate_graph(const TreeCert& c) {
    AdjSubgraph g = empty_subgraph(c.n, c.t);
    for (uint64_t i = 0; i < c.t; ++i)
        if (i != c.center) add_edge(g, cycle_vertex(c.center), cycle_vertex(i), c.cp);
    return g;
}

struct TreeEdge {
    size_t a = 0, b = 0;
    std::optional<ExpInt> left;  // exponent of the pair's state on a; on E_0 it is 0, phi(1) on [u_0]
};

struct SpanningTree {
    size_t vertices = 0;
    std::vector<TreeEdge> edges;
};

enum class SampleMode { wilson, kruskal, bfs };

inline SampleMode parse_sample_mode(const std::string& s) {
    if (s == "wilson") return SampleMode::wilson;
    if (s == "kruskal") return SampleMode::kruskal;
    if (s == "bfs") return SampleMode::bfs;
    throw Error(Errc::invalid_input, "unknown tree mode '" + s + "'");
}

// Picks the stored pair (a < b) whose shared tail, state bits 1..n-1, has
// the largest weight, then the smallest exponent.  Without a context the
// smallest exponent wins.
inline std::optional<ExpInt> choose_pair(const AdjSubgraph& g, size_t a, size_t b, const CycleCtx* ctx) {
    auto it = g.reps.find({a, b});
    if (it == g.reps.end() || it->second.empty()) return std::nullopt;
    std::optional<ExpInt> best;
    size_t best_w = 0;
    for (const ExpInt& k : it->second) {
        size_t w = 0;
        if (ctx && a != 0) {
            BitVec s = exponent_to_state(*ctx, k);
            w = s.popcount() - (s.get(0) ? 1 : 0);
        }
        if (!best || w > best_w || (w == best_w && k < *best)) {
            best = k;
            best_w = w;
        }
    }
    return best;
}

inline SpanningTree sample_spanning_tree(const AdjSubgraph& g, uint64_t seed, SampleMode mode = SampleMode::wilson, const CycleCtx* ctx = nullptr) {
    if (!is_connected(g)) throw Error(Errc::disconnected, "subgraph is disconnected");
    size_t v = g.vertices();
    Rng rng(seed);
    std::vector<std::pair<size_t, size_t>> picked;  // (child, parent) or plain edges
    if (mode == SampleMode::wilson) {
        // loop-erased random walks weighted by multiplicity, rooted at [0]
        std::vector<char> in(v, 0);
        std::vector<size_t> next(v, 0);
        in[0] = 1;
        for (size_t s = 0; s < v; ++s) {
            size_t u = s;
            while (!in[u]) {
                uint64_t d = g.degree(u);
                uint64_t r = draw_below(rng, d);
                size_t w = 0;
                while (r >= g.mult[u][w]) r -= g.mult[u][w++];
                next[u] = w;
                u = w;
            }
            u = s;
            while (!in[u]) {
                in[u] = 1;
                picked.push_back({u, next[u]});
                u = next[u];
            }
        }
    } else if (mode == SampleMode::kruskal) {
        std::vector<std::pair<size_t, size_t>> edges;
        for (size_t a = 0; a < v; ++a)
            for (size_t b = a + 1; b < v; ++b)
                if (g.mult[a][b]) edges.push_back({a, b});
        shuffle_seeded(edges, rng);
        std::vector<size_t> parent(v);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto [a, b] : edges) {
            size_t ra = find(a), rb = find(b);
            if (ra == rb) continue;
            parent[ra] = rb;
            picked.push_back({a, b});
        }
    } else {
        std::vector<char> seen(v, 0);
        std::vector<size_t> queue{0};
        seen[0] = 1;
        for (size_t h = 0; h < queue.size(); ++h) {
            size_t x = queue[h];
            for (size_t y = 0; y < v; ++y)
                if (g.mult[x][y] && !seen[y]) {
                    seen[y] = 1;
                    queue.push_back(y);
                    picked.push_back({x, y});
                }
        }
    }
    SpanningTree tree;
    tree.vertices = v;
    for (auto [a, b] : picked) {
        if (a > b) std::swap(a, b);
        TreeEdge e;
        e.a = a;
        e.b = b;
        e.left = choose_pair(g, a, b, ctx);
        tree.edges.push_back(std::move(e));
    }
    std::sort(tree.edges.begin(), tree.edges.end(), [](const TreeEdge& x, const TreeEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    return tree;
}

inline bool is_spanning_tree(const AdjSubgraph& g, const SpanningTree& tree) {
    size_t v = g.vertices();
    if (tree.vertices != v || tree.edges.size() + 1 != v) return false;
    std::vector<size_t> parent(v);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : tree.edges) {
        if (e.a >= v || e.b >= v || !g.mult[e.a][e.b]) return false;
        size_t ra = find(e.a), rb = find(e.b);
        if (ra == rb) return false;
        parent[ra] = rb;
    }
    return true;
}

inline std::string vertex_name(size_t v) { return v == 0 ? "zero" : "u" + std::to_string(v - 1); }

inline std::string export_dot(const AdjSubgraph& g, bool simplified = false) {
    std::ostringstream os;
    os << "graph adjacency {\n";
    for (size_t v = 0; v < g.vertices(); ++v) os << "  " << vertex_name(v) << ";\n";
    for (size_t a = 0; a < g.vertices(); ++a)
        for (size_t b = a + 1; b < g.vertices(); ++b) {
            if (!g.mult[a][b]) continue;
            os << "  " << vertex_name(a) << " -- " << vertex_name(b);
            if (!simplified) os << " [label=\"" << g.mult[a][b] << "\"]";
            os << ";\n";
        }
    os << "}\n";
    return os.str();
}

inline std::string export_dot(const SpanningTree& tree) {
    std::ostringstream os;
    os << "graph tree {\n";
    for (size_t v = 0; v < tree.vertices; ++v) os << "  " << vertex_name(v) << ";\n";
    for (const auto& e : tree.edges) {
        os << "  " << vertex_name(e.a) << " -- " << vertex_name(e.b);
        if (e.left) os << " [label=\"" << to_dec(*e.left) << "\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace debruijn
