#pragma once

// Zech logarithm tables: 1 + alpha^k = alpha^tau(k), stored per cyclotomic
// coset leader.  Tables are built by brute force for small degrees or by
// propagation (flip/inverse/doubling closure, difference chaining, subfield lifts).

#include "gf2poly.hpp"

#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

namespace debruijn {

enum class Provenance : uint8_t { seed, flip, inv, doubling, chain, subfield, bruteforce };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::seed: return "seed";
        case Provenance::flip: return "flip";
        case Provenance::inv: return "inv";
        case Provenance::doubling: return "double";
        case Provenance::chain: return "chain";
        case Provenance::subfield: return "subfield";
        case Provenance::bruteforce: return "bruteforce";
    }
    return "?";
}

inline Provenance parse_provenance(const std::string& s) {
    static const std::pair<const char*, Provenance> names[] = {
        {"seed", Provenance::seed},         {"flip", Provenance::flip},
        {"inv", Provenance::inv},           {"double", Provenance::doubling},
        {"chain", Provenance::chain},       {"subfield", Provenance::subfield},
        {"bruteforce", Provenance::bruteforce},
    };
    for (auto& [n, p] : names)
        if (s == n) return p;
    throw Error(Errc::corrupt_table, "unknown provenance '" + s + "'");
}

namespace detail {

inline uint64_t rotl(uint64_t x, unsigned s, unsigned n) {
    s %= n;
    if (s == 0) return x;
    uint64_t m = n == 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
    return ((x << s) | (x >> (n - s))) & m;
}

inline ExpInt double_mod(const ExpInt& x, const ExpInt& m) {
    ExpInt r = x << 1;
    if (r >= m) r -= m;
    return r;
}

// x * 2^s mod 2^n - 1.
inline ExpInt times_pow2(const ExpInt& x, unsigned s, unsigned n) {
    ExpInt m = mersenne(n);
    ExpInt r = mod_nonneg(x, m);
    s %= n;
    if (s == 0) return r;
    r <<= s;
    // fold the high part back: 2^n = 1
    ExpInt hi = r >> n;
    ExpInt lo = r - (hi << n);
    r = lo + hi;
    if (r >= m) r -= m;
    return r;
}

struct LeaderInfo64 {
    uint64_t leader;
    unsigned shift;  // k * 2^shift = leader
    unsigned size;
};

inline LeaderInfo64 leader64(uint64_t k, unsigned n) {
    LeaderInfo64 r{k, 0, n};
    uint64_t x = k;
    for (unsigned s = 1; s < n; ++s) {
        x = rotl(x, 1, n);
        if (x == k) {
            r.size = s;
            break;
        }
        if (x < r.leader) {
            r.leader = x;
            r.shift = s;
        }
    }
    return r;
}

}  // namespace detail

struct Coset {
    ExpInt leader;
    unsigned size = 0;
    unsigned shift = 0;  // k * 2^shift = leader (mod 2^n - 1)
};

inline Coset coset_leader(const ExpInt& k, unsigned n) {
    ExpInt m = mersenne(n);
    if (k < 1 || k >= m) {
        if (k == 0) return Coset{0, 1, 0};
        throw Error(Errc::domain, "coset element out of range");
    }
    if (n <= 64) {
        auto li = detail::leader64(to_u64(k), n);
        return Coset{from_u64(li.leader), li.size, li.shift};
    }
    Coset c{k, n, 0};
    ExpInt x = k;
    for (unsigned s = 1; s < n; ++s) {
        x = detail::double_mod(x, m);
        if (x == k) {
            c.size = s;
            break;
        }
        if (x < c.leader) {
            c.leader = x;
            c.shift = s;
        }
    }
    return c;
}

class ZechTable {
public:
    struct Row {
        ExpInt leader;
        ExpInt tau;
        Provenance how;
    };

    ZechTable() = default;
    explicit ZechTable(BinPoly p) : poly_(std::move(p)) {
        long d = poly_.degree();
        if (d < 1) throw Error(Errc::domain, "Zech table needs degree >= 1");
        n_ = unsigned(d);
        m_ = mersenne(n_);
        small_ = n_ <= 63;
        if (small_) m64_ = to_u64(m_);
    }

    unsigned degree() const { return n_; }
    const ExpInt& modulus() const { return m_; }
    const BinPoly& polynomial() const { return poly_; }
    bool small() const { return small_; }

    size_t leader_count() const { return small_ ? s_.size() : b_.size(); }
    const ExpInt& covered() const { return covered_; }
    bool complete() const { return covered_ == m_ - 1; }

    // Records tau(k) = tau (normalized to the coset leader).  Returns true when
    // the coset was new; throws corrupt_table on a conflicting value.
    bool insert(const ExpInt& k, const ExpInt& tau, Provenance how) {
        if (k < 1 || k >= m_ || tau < 1 || tau >= m_)
            throw Error(Errc::corrupt_table, "entry out of range: tau(" + to_dec(k) + ")=" + to_dec(tau));
        if (small_) return insert64(to_u64(k), to_u64(tau), how);
        Coset c = coset_leader(k, n_);
        ExpInt t = detail::times_pow2(tau, c.shift, n_);
        if (c.shift != 0 && how == Provenance::seed) how = Provenance::doubling;
        auto it = b_.find(c.leader);
        if (it != b_.end()) {
            if (it->second.tau != t) throw conflict(c.leader, it->second.tau, t);
            return false;
        }
        b_.emplace(c.leader, BigEntry{t, how});
        covered_ += c.size;
        return true;
    }

    bool insert64(uint64_t k, uint64_t tau, Provenance how) {
        if (k < 1 || k >= m64_ || tau < 1 || tau >= m64_)
            throw Error(Errc::corrupt_table, "entry out of range: tau(" + std::to_string(k) + ")=" + std::to_string(tau));
        auto li = detail::leader64(k, n_);
        uint64_t t = detail::rotl(tau, li.shift, n_);
        if (li.shift != 0 && how == Provenance::seed) how = Provenance::doubling;
        auto it = s_.find(li.leader);
        if (it != s_.end()) {
            if (it->second.tau != t) throw conflict(from_u64(li.leader), from_u64(it->second.tau), from_u64(t));
            return false;
        }
        s_.emplace(li.leader, SmallEntry{t, how});
        covered_ += li.size;
        return true;
    }

    std::optional<uint64_t> lookup64(uint64_t k) const {
        if (k == 0 || k >= m64_) return std::nullopt;
        auto li = detail::leader64(k, n_);
        auto it = s_.find(li.leader);
        if (it == s_.end()) return std::nullopt;
        // tau(k) = tau(leader) * 2^-shift
        return detail::rotl(it->second.tau, n_ - li.shift, n_);
    }

    std::optional<ExpInt> lookup(const ExpInt& k0) const {
        ExpInt k = mod_nonneg(k0, m_);
        if (k == 0) return std::nullopt;
        if (small_) {
            auto r = lookup64(to_u64(k));
            if (!r) return std::nullopt;
            return from_u64(*r);
        }
        Coset c = coset_leader(k, n_);
        auto it = b_.find(c.leader);
        if (it == b_.end()) return std::nullopt;
        return detail::times_pow2(it->second.tau, n_ - c.shift, n_);
    }

    bool has(const ExpInt& k) const { return lookup(k).has_value(); }

    // tau(k); missing_entry when the coset is unknown.
    ExpInt resolve(const ExpInt& k) const {
        auto r = lookup(k);
        if (!r) throw Error(Errc::missing_entry, "no Zech entry for coset of " + to_dec(k));
        return *r;
    }

    std::optional<Provenance> provenance(const ExpInt& k) const {
        ExpInt kk = mod_nonneg(k, m_);
        if (kk == 0) return std::nullopt;
        Coset c = coset_leader(kk, n_);
        if (small_) {
            auto it = s_.find(to_u64(c.leader));
            if (it == s_.end()) return std::nullopt;
            return it->second.how;
        }
        auto it = b_.find(c.leader);
        if (it == b_.end()) return std::nullopt;
        return it->second.how;
    }

    std::vector<Row> rows() const {
        std::vector<Row> r;
        r.reserve(leader_count());
        if (small_) {
            std::vector<uint64_t> keys;
            keys.reserve(s_.size());
            for (auto& kv : s_) keys.push_back(kv.first);
            std::sort(keys.begin(), keys.end());
            for (uint64_t k : keys) {
                auto& e = s_.at(k);
                r.push_back(Row{from_u64(k), from_u64(e.tau), e.how});
            }
        } else {
            for (auto& [k, e] : b_) r.push_back(Row{k, e.tau, e.how});
        }
        return r;
    }

    // Flat tau array indexed by k (0 = unknown); n <= 30.
    std::vector<uint64_t> dense() const {
        if (n_ > 30) throw Error(Errc::resource, "dense Zech view needs n <= 30");
        std::vector<uint64_t> d(size_t(m64_), 0);
        for (auto& [k, e] : s_) {
            uint64_t x = k, y = e.tau;
            do {
                d[x] = y;
                x = detail::rotl(x, 1, n_);
                y = detail::rotl(y, 1, n_);
            } while (x != k);
        }
        return d;
    }

    void write(std::ostream& os) const {
        os << "zech v1 n=" << n_ << " p=" << format_set(poly_) << " complete=" << (complete() ? 1 : 0) << "\n";
        for (auto& r : rows()) os << to_dec(r.leader) << " " << to_dec(r.tau) << " " << provenance_name(r.how) << "\n";
    }

    static ZechTable read(std::istream& is) {
        std::string magic, ver, nf, pf, cf;
        if (!(is >> magic >> ver >> nf >> pf >> cf) || magic != "zech" || ver != "v1" || nf.rfind("n=", 0) != 0 ||
            pf.rfind("p=", 0) != 0 || cf.rfind("complete=", 0) != 0)
            throw Error(Errc::corrupt_table, "bad table header");
        BinPoly p = parse_poly(pf.substr(2));
        ZechTable t(p);
        if (std::to_string(t.degree()) != nf.substr(2)) throw Error(Errc::corrupt_table, "degree mismatch in header");
        std::string a, b, how;
        ExpInt prev = 0;
        while (is >> a >> b >> how) {
            ExpInt k = parse_exp(a), v = parse_exp(b);
            if (k <= prev) throw Error(Errc::corrupt_table, "rows not sorted by leader");
            if (coset_leader(k, t.degree()).leader != k) throw Error(Errc::corrupt_table, to_dec(k) + " is not a coset leader");
            prev = k;
            t.insert(k, v, parse_provenance(how));
        }
        bool flag = cf.substr(9) == "1";
        if (flag != t.complete()) throw Error(Errc::corrupt_table, "completeness flag disagrees with rows");
        return t;
    }

private:
    struct SmallEntry {
        uint64_t tau;
        Provenance how;
    };
    struct BigEntry {
        ExpInt tau;
        Provenance how;
    };

    static Error conflict(const ExpInt& leader, const ExpInt& had, const ExpInt& got) {
        return Error(Errc::corrupt_table, "conflicting tau(" + to_dec(leader) + "): " + to_dec(had) + " vs " + to_dec(got));
    }

    BinPoly poly_;
    unsigned n_ = 0;
    ExpInt m_ = 0;
    uint64_t m64_ = 0;
    bool small_ = true;
    ExpInt covered_ = 0;
    std::unordered_map<uint64_t, SmallEntry> s_;
    std::map<ExpInt, BigEntry> b_;
};

inline ExpInt zech_resolve(const ZechTable& t, const ExpInt& k) { return t.resolve(k); }

// Fixpoint under Flip and Inv (Double is implicit in the per-coset storage).
// Returns the number of cosets added.
inline size_t zech_closure(ZechTable& t) {
    const ExpInt& m = t.modulus();
    std::deque<std::pair<ExpInt, ExpInt>> work;
    for (auto& r : t.rows()) work.emplace_back(r.leader, r.tau);
    size_t added = 0;
    while (!work.empty()) {
        auto [k, v] = work.front();
        work.pop_front();
        if (t.insert(v, k, Provenance::flip)) {
            ++added;
            work.emplace_back(v, k);
        }
        ExpInt ik = m - k, iv = mod_nonneg(v - k, m);
        if (t.insert(ik, iv, Provenance::inv)) {
            ++added;
            work.emplace_back(ik, iv);
        }
    }
    return added;
}

// Chaining identity: tau(tau(i) - tau(j)) = tau(i - j) + j - tau(j).
// Adds the entry when its coset is new and re-closes; nullopt otherwise.
inline std::optional<ZechTable::Row> zech_chain(ZechTable& t, const ExpInt& i, const ExpInt& j) {
    const ExpInt& m = t.modulus();
    if (mod_nonneg(i - j, m) == 0) return std::nullopt;
    auto ti = t.lookup(i), tj = t.lookup(j), tij = t.lookup(i - j);
    if (!ti || !tj || !tij) return std::nullopt;
    ExpInt arg = mod_nonneg(*ti - *tj, m);
    if (arg == 0 || t.has(arg)) return std::nullopt;
    ExpInt val = mod_nonneg(*tij + j - *tj, m);
    t.insert(arg, val, Provenance::chain);
    zech_closure(t);
    return ZechTable::Row{arg, val, Provenance::chain};
}

struct BruteforceOptions {
    unsigned cap = 26;
};

// Position of state_i + state_0 along the m-sequence started at (1,0,...,0).
inline std::vector<uint32_t> zech_bruteforce_dense(const BinPoly& p, BruteforceOptions opt = {}) {
    long nl = p.degree();
    if (nl < 1) throw Error(Errc::domain, "degree must be positive");
    unsigned n = unsigned(nl);
    if (n > opt.cap || n > 31) throw Error(Errc::resource, "brute force refused for n=" + std::to_string(n) + " (cap " + std::to_string(opt.cap) + ")");
    uint64_t m = (uint64_t(1) << n) - 1;
    uint32_t taps = 0;
    for (unsigned i = 0; i < n; ++i)
        if (p.coeff(i)) taps |= uint32_t(1) << i;
    std::vector<uint32_t> pos(size_t(m) + 1, UINT32_MAX);
    uint32_t s = 1;
    for (uint64_t i = 0; i < m; ++i) {
        if (pos[s] != UINT32_MAX) throw Error(Errc::domain, "polynomial is not primitive");
        pos[s] = uint32_t(i);
        uint32_t fb = uint32_t(std::popcount(s & taps) & 1);
        s = (s >> 1) | (fb << (n - 1));
    }
    if (s != 1) throw Error(Errc::domain, "polynomial is not primitive");
    std::vector<uint32_t> tau(size_t(m), 0);
    for (uint64_t i = 1; i < m; ++i) {
        uint32_t fb = uint32_t(std::popcount(s & taps) & 1);
        s = (s >> 1) | (fb << (n - 1));
        tau[i] = pos[s ^ 1u];
    }
    return tau;
}

namespace detail {
inline void load_dense(ZechTable& t, const std::vector<uint32_t>& tau, Provenance how) {
    unsigned n = t.degree();
    for (uint64_t k = 1; k < tau.size(); ++k) {
        if (!tau[k]) continue;
        if (detail::leader64(k, n).leader != k) continue;
        t.insert64(k, tau[k], how);
    }
}
}  // namespace detail

inline ZechTable zech_bruteforce(const BinPoly& p, BruteforceOptions opt = {}) {
    auto tau = zech_bruteforce_dense(p, opt);
    ZechTable t(p);
    detail::load_dense(t, tau, Provenance::bruteforce);
    return t;
}

// x^n + x^k + 1 gives 1 + alpha^k = alpha^n.
inline ZechTable zech_seed_trinomial(const BinPoly& p) {
    if (p.weight() != 3 || !p.coeff(0))
        throw Error(Errc::unsupported_seed, "not a trinomial; supply seeds explicitly");
    long n = p.degree();
    auto e = p.exponents();
    ZechTable t(p);
    if (n >= 2) t.insert(from_u64(e[1]), from_u64(uint64_t(n)), Provenance::seed);
    return t;
}

// Entries tau_n(r*j) = r*tau_m(j), r = (2^n-1)/(2^m-1), from a table of the
// subfield generated by beta = alpha^r.  Returns the number of new cosets.
inline size_t zech_subfield_lift(ZechTable& target, const ZechTable& sub) {
    unsigned n = target.degree(), m = sub.degree();
    if (m == 0 || n % m != 0) throw Error(Errc::invalid_subfield, std::to_string(m) + " does not divide " + std::to_string(n));
    ExpInt r = target.modulus() / sub.modulus();
    size_t added = 0;
    for (auto& row : sub.rows()) {
        ExpInt k = row.leader, v = row.tau;
        for (unsigned s = 0; s < m; ++s) {
            if (target.insert(r * k, r * v, Provenance::subfield)) ++added;
            k = detail::double_mod(k, sub.modulus());
            v = detail::double_mod(v, sub.modulus());
        }
    }
    return added;
}

namespace detail {

// Flat-array propagation engine for n <= 30.
class DenseZech {
public:
    explicit DenseZech(const ZechTable& t) : n_(t.degree()), m_((uint64_t(1) << n_) - 1), tau_(size_t(m_), 0), how_(size_t(m_), 0) {
        for (auto& r : t.rows()) set_coset(to_u64(r.leader), to_u64(r.tau), r.how);
        lead_.resize(size_t(m_));
        for (uint64_t k = 1; k < m_; ++k) lead_[k] = uint32_t(leader64(k, n_).leader);
    }

    uint64_t covered() const { return covered_; }
    bool complete() const { return covered_ == m_ - 1; }

    bool insert(uint64_t k, uint64_t v, Provenance how) {
        if (v == 0 || v >= m_ || k == 0 || k >= m_) throw Error(Errc::corrupt_table, "derived value out of range");
        if (tau_[k]) {
            if (tau_[k] != v) throw Error(Errc::corrupt_table, "conflicting tau(" + std::to_string(k) + ")");
            return false;
        }
        set_coset(k, v, how);
        work_.push_back(k);
        return true;
    }

    void closure() {
        while (!work_.empty()) {
            uint64_t k = work_.front();
            work_.pop_front();
            uint64_t v = tau_[k];
            insert(v, k, Provenance::flip);
            insert(m_ - k, (v + m_ - k) % m_, Provenance::inv);
        }
    }

    void close_all() {
        for (uint64_t k = 1; k < m_; ++k)
            if (tau_[k] && lead_[k] == k) work_.push_back(k);
        closure();
    }

    // One pass over pairs (j, y) with j a known leader and y a known element
    // whose coset leader is >= j; returns the number of discoveries.
    size_t sweep_pass() {
        size_t found = 0;
        for (uint64_t j = 1; j < m_ && !complete(); ++j) {
            if (!tau_[j] || lead_[j] != j) continue;
            uint64_t tj = tau_[j];
            for (uint64_t y = 1; y < m_; ++y) {
                uint64_t ty = tau_[y];
                if (!ty || y == j || lead_[y] < j) continue;
                uint64_t d = (y + m_ - j) % m_;
                uint64_t td = tau_[d];
                if (!td) continue;
                uint64_t arg = (ty + m_ - tj) % m_;
                if (arg == 0 || tau_[arg]) continue;
                uint64_t val = (td + j + m_ - tj) % m_;
                insert(arg, val, Provenance::chain);
                closure();
                ++found;
                if (complete()) break;
            }
        }
        return found;
    }

    void store(ZechTable& t) const {
        for (uint64_t k = 1; k < m_; ++k)
            if (tau_[k] && lead_[k] == k) t.insert64(k, tau_[k], Provenance(how_[k]));
    }

private:
    void set_coset(uint64_t k, uint64_t v, Provenance how) {
        uint64_t x = k, y = v;
        do {
            if (tau_[x]) {
                if (tau_[x] != y) throw Error(Errc::corrupt_table, "conflicting tau(" + std::to_string(x) + ")");
            } else {
                tau_[x] = uint32_t(y);
                how_[x] = uint8_t(how);
                ++covered_;
            }
            x = rotl(x, 1, n_);
            y = rotl(y, 1, n_);
        } while (x != k);
    }

    unsigned n_;
    uint64_t m_;
    std::vector<uint32_t> tau_;
    std::vector<uint8_t> how_;
    std::vector<uint32_t> lead_;
    std::deque<uint64_t> work_;
    uint64_t covered_ = 0;
};

}  // namespace detail

struct ZechBuildOptions {
    std::vector<std::pair<ExpInt, ExpInt>> seeds;  // extra (k, tau(k))
    bool trinomial_seed = true;                    // tau(k) = n for x^n+x^k+1
    bool sweep = true;
    bool subfield = true;  // includes the cube-root seed tau(M/3) = 2M/3 for even n
    unsigned sweep_cap = 24;
    unsigned bruteforce_cap = 26;  // for the subfield tables
    size_t max_passes = 0;         // 0 = until no progress
};

struct ZechBuildReport {
    ZechTable table;
    size_t passes = 0;
    size_t chain_discoveries = 0;
    size_t subfield_cosets = 0;
    std::vector<std::string> notes;
    bool complete() const { return table.complete(); }
};

namespace detail {
inline size_t run_sweep(ZechTable& t, const ZechBuildOptions& opt, ZechBuildReport& rep) {
    if (!opt.sweep || t.degree() > opt.sweep_cap || t.degree() > 30 || t.leader_count() == 0) return 0;
    DenseZech dz(t);
    dz.close_all();
    size_t total = 0;
    while (!dz.complete()) {
        if (opt.max_passes && rep.passes >= opt.max_passes) break;
        ++rep.passes;
        size_t f = dz.sweep_pass();
        total += f;
        if (f == 0) break;
    }
    dz.store(t);
    rep.chain_discoveries += total;
    return total;
}
}  // namespace detail

// seed -> closure -> chaining sweep -> subfield lifts, until complete or stuck.
inline ZechBuildReport build_zech_table(const BinPoly& p, const ZechBuildOptions& opt = {}) {
    ZechBuildReport rep;
    rep.table = ZechTable(p);
    ZechTable& t = rep.table;
    unsigned n = t.degree();
    if (opt.trinomial_seed && p.weight() == 3 && p.coeff(0) && n >= 2) {
        auto e = p.exponents();
        t.insert(from_u64(e[1]), from_u64(n), Provenance::seed);
    }
    for (auto& [k, v] : opt.seeds) t.insert(k, v, Provenance::seed);
    if (opt.subfield && n % 2 == 0 && n >= 2) {
        ExpInt third = t.modulus() / 3;
        t.insert(third, 2 * third, Provenance::subfield);
    }
    if (t.leader_count() == 0) {
        if (n == 1) return rep;  // GF(2): nothing to tabulate
        rep.notes.push_back("no seeds available");
        return rep;
    }
    zech_closure(t);
    detail::run_sweep(t, opt, rep);
    if (t.complete() || !opt.subfield) return rep;

    for (unsigned m = 2; m < n && !t.complete(); ++m) {
        if (n % m) continue;
        if (m > opt.bruteforce_cap) {
            rep.notes.push_back("subfield m=" + std::to_string(m) + " above brute-force cap");
            continue;
        }
        ExpInt r = t.modulus() / mersenne(m);
        AssociatedPoly q = associated_irreducible(p, r);
        if (q.degree != long(m)) {
            rep.notes.push_back("subfield m=" + std::to_string(m) + ": associate has wrong degree");
            continue;
        }
        if (!is_primitive(q.f)) {
            rep.notes.push_back("subfield m=" + std::to_string(m) + ": associate not primitive");
            continue;
        }
        ZechTable sub = zech_bruteforce(q.f, {opt.bruteforce_cap});
        size_t added = zech_subfield_lift(t, sub);
        rep.subfield_cosets += added;
        rep.notes.push_back("subfield m=" + std::to_string(m) + " via " + format_set(q.f) + ": " + std::to_string(added) + " cosets");
        if (added) {
            zech_closure(t);
            detail::run_sweep(t, opt, rep);
        }
    }
    return rep;
}

}  // namespace debruijn
