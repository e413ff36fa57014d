#pragma once

// Independent reference computations used only by the tests.  They work on
// plain integers and vectors and share no code with the library.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// Polynomials over GF(2) packed into uint64 (bit i = coefficient of x^i).
inline int deg(uint64_t a) { return a ? 63 - __builtin_clzll(a) : -1; }

inline unsigned __int128 clmul(uint64_t a, uint64_t b) {
    unsigned __int128 r = 0;
    for (int i = 0; i < 64; ++i)
        if ((a >> i) & 1) r ^= (unsigned __int128)b << i;
    return r;
}

inline uint64_t mod(unsigned __int128 a, uint64_t m) {
    int dm = deg(m);
    for (int k = 127; k >= dm; --k)
        if ((a >> k) & 1) a ^= (unsigned __int128)m << (k - dm);
    return uint64_t(a);
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) { return mod(clmul(a, b), m); }

// Trial division by every polynomial of degree 1..deg/2.
inline bool irreducible(uint64_t f) {
    int n = deg(f);
    if (n < 1) return false;
    for (uint64_t g = 2; deg(g) <= n / 2; ++g)
        if (mod(f, g) == 0) return false;
    return true;
}

// Order of x modulo f by stepping.
inline uint64_t order_of_x(uint64_t f) {
    uint64_t r = 2 % f, k = 1;
    r = mod(r, f);
    while (r != 1) {
        r = mulmod(r, 2, f);
        ++k;
        if (k > (uint64_t(1) << 32)) return 0;
    }
    return k;
}

// One LFSR step: s_{l+n} = sum c_i s_{l+i}.
inline std::vector<int> lfsr_step(uint64_t p, const std::vector<int>& s) {
    int n = deg(p);
    std::vector<int> r(s.begin() + 1, s.end());
    int fb = 0;
    for (int i = 0; i < n; ++i) fb ^= s[i] & int((p >> i) & 1);
    r.push_back(fb);
    return r;
}

inline std::vector<int> lfsr_bits(uint64_t p, std::vector<int> s, size_t len) {
    std::vector<int> out;
    for (size_t k = 0; k < len; ++k) {
        out.push_back(s[0]);
        s = lfsr_step(p, s);
    }
    return out;
}

// tau via field arithmetic: alpha^k as residues x^k mod p.
inline std::vector<uint64_t> zech_by_field(uint64_t p) {
    int n = deg(p);
    uint64_t M = (uint64_t(1) << n) - 1;
    std::vector<uint64_t> pw(M), lg(M + 1, 0);
    uint64_t r = 1;
    for (uint64_t k = 0; k < M; ++k) {
        pw[k] = r;
        lg[r] = k;
        r = mulmod(r, 2, p);
    }
    std::vector<uint64_t> tau(M, 0);
    for (uint64_t k = 1; k < M; ++k) tau[k] = lg[pw[k] ^ 1];
    return tau;
}

// Minimal polynomial by trying all polynomials of increasing degree.
inline uint64_t min_poly_search(const std::vector<int>& s) {
    for (int L = 0; L <= 20; ++L) {
        for (uint64_t low = 0; low < (uint64_t(1) << L); ++low) {
            uint64_t f = (uint64_t(1) << L) | low;
            bool ok = true;
            for (size_t l = 0; l + L < s.size() && ok; ++l) {
                int acc = 0;
                for (int i = 0; i <= L; ++i)
                    if ((f >> i) & 1) acc ^= s[l + i];
                ok = acc == 0;
            }
            if (ok) return f;
        }
    }
    return 0;
}

inline bool windows_distinct(const std::vector<int>& s, int n) {
    std::set<std::string> seen;
    size_t N = s.size();
    for (size_t k = 0; k < N; ++k) {
        std::string w;
        for (int i = 0; i < n; ++i) w.push_back(char('0' + s[(k + i) % N]));
        if (!seen.insert(w).second) return false;
    }
    return N == (size_t(1) << n);
}

// Spanning trees of a multigraph by enumerating all (V-1)-subsets of edges.
inline uint64_t count_trees_bruteforce(int V, const std::vector<std::pair<int, int>>& edges) {
    if (V <= 1) return 1;
    size_t E = edges.size();
    uint64_t count = 0;
    std::function<void(size_t, std::vector<int>&)> rec = [&](size_t start, std::vector<int>& pick) {
        if (int(pick.size()) == V - 1) {
            std::vector<int> par(V);
            for (int i = 0; i < V; ++i) par[i] = i;
            std::function<int(int)> find = [&](int x) { return par[x] == x ? x : par[x] = find(par[x]); };
            for (int e : pick) {
                int a = find(edges[e].first), b = find(edges[e].second);
                if (a == b) return;
                par[a] = b;
            }
            ++count;
            return;
        }
        for (size_t e = start; e < E; ++e) {
            pick.push_back(int(e));
            rec(e + 1, pick);
            pick.pop_back();
        }
    };
    std::vector<int> pick;
    rec(0, pick);
    return count;
}

// Cycles of an n-stage FSR with feedback fb(state), state packed bit i = x_i.
inline std::vector<std::vector<uint64_t>> fsr_cycles(int n, const std::function<int(uint64_t)>& fb) {
    uint64_t N = uint64_t(1) << n;
    std::vector<int> seen(N, 0);
    std::vector<std::vector<uint64_t>> cycles;
    for (uint64_t s0 = 0; s0 < N; ++s0) {
        if (seen[s0]) continue;
        std::vector<uint64_t> cyc;
        uint64_t s = s0;
        while (!seen[s]) {
            seen[s] = 1;
            cyc.push_back(s);
            s = (s >> 1) | (uint64_t(fb(s) & 1) << (n - 1));
        }
        cycles.push_back(cyc);
    }
    return cycles;
}

}  // namespace oracle
