#pragma once

// Command implementations behind the debruijn tool.  Each command writes
// its whole result to one stream and returns the process exit code, so the
// tests can run them in-process and compare bytes.

#include "crossjoin.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace debruijn::cli {

enum Exit : int { ok = 0, failure = 1, partial = 2, bad_input = 3 };

struct RunConfig {
    std::string command;
    std::string p;                   // set notation, e.g. "n=10;{3}"
    std::optional<uint64_t> t, l, n, k;
    std::optional<std::string> a, b;  // forced cross-join exponents
    uint64_t count = 1, seed = 1;
    uint64_t budget_s = 2000, budget_z = 2000;
    std::string mode;                // zech: bruteforce|propagate; debruijn: wilson|kruskal|bfs
    std::string table;               // zech v1 file to load instead of building
    std::string format = "text";     // text|json|dot|hex
    uint64_t bits = 0;               // stream prefix length for n > 26
};

inline int exit_code(Errc c) {
    switch (c) {
        case Errc::invalid_input:
        case Errc::invalid_modulus:
        case Errc::unsupported_degree:
        case Errc::unsupported_seed:
        case Errc::invalid_subfield:
        case Errc::domain:
        case Errc::resource: return bad_input;
        case Errc::missing_entry:
        case Errc::budget:
        case Errc::disconnected:
        case Errc::not_found: return partial;
        default: return failure;
    }
}

namespace detail {

using json = nlohmann::ordered_json;

inline void check_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed)
        if (cfg.format == f) return;
    throw Error(Errc::invalid_input, "format '" + cfg.format + "' is not available for " + cfg.command);
}

inline BinPoly need_poly(const RunConfig& cfg) {
    if (cfg.p.empty()) throw Error(Errc::invalid_input, "--p is required");
    BinPoly p = parse_poly(cfg.p);
    if (p.degree() < 2) throw Error(Errc::invalid_input, "p must have degree >= 2");
    return p;
}

inline uint64_t need_t(const RunConfig& cfg) {
    if (!cfg.t) throw Error(Errc::invalid_input, "--t is required");
    return *cfg.t;
}

// Table from --table, else brute force up to n = 22, else propagation.
inline std::shared_ptr<ZechTable> obtain_table(const RunConfig& cfg, const BinPoly& p, std::vector<std::string>& notes) {
    if (!cfg.table.empty()) {
        std::ifstream in(cfg.table);
        if (!in) throw Error(Errc::invalid_input, "cannot open table " + cfg.table);
        auto z = std::make_shared<ZechTable>(ZechTable::read(in));
        if (z->polynomial() != p) throw Error(Errc::invalid_input, "table " + cfg.table + " is for " + format_set(z->polynomial()));
        notes.push_back("table loaded from " + cfg.table);
        return z;
    }
    if (p.degree() <= 22) {
        notes.push_back("table by brute force");
        return std::make_shared<ZechTable>(zech_bruteforce(p));
    }
    ZechBuildReport rep = build_zech_table(p);
    notes.push_back("table by propagation: " + std::to_string(rep.table.leader_count()) + " cosets");
    return std::make_shared<ZechTable>(std::move(rep.table));
}

inline std::string exp_list(const std::vector<uint64_t>& v) {
    std::string s = "{";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

inline std::string fixed2(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << x;
    return os.str();
}

inline std::string bits_text(const BitVec& b) { return b.size() <= 1024 ? b.to_string() : b.to_hex(); }

// Vertices not reachable from [0].
inline std::vector<size_t> unreached(const AdjSubgraph& g) {
    size_t v = g.vertices();
    std::vector<char> seen(v, 0);
    std::vector<size_t> q{0};
    seen[0] = 1;
    for (size_t h = 0; h < q.size(); ++h)
        for (size_t y = 0; y < v; ++y)
            if (g.mult[q[h]][y] && !seen[y]) {
                seen[y] = 1;
                q.push_back(y);
            }
    std::vector<size_t> out;
    for (size_t y = 0; y < v; ++y)
        if (!seen[y]) out.push_back(y);
    return out;
}

}  // namespace detail

// ---- zech ----
inline int cmd_zech(const RunConfig& cfg, std::ostream& out) {
    detail::check_format(cfg, {"text", "json"});
    BinPoly p = detail::need_poly(cfg);
    std::string mode = cfg.mode.empty() ? (p.degree() <= 22 ? "bruteforce" : "propagate") : cfg.mode;
    ZechTable z(p);
    std::vector<std::string> notes;
    if (mode == "bruteforce") {
        z = zech_bruteforce(p);
    } else if (mode == "propagate") {
        ZechBuildReport rep = build_zech_table(p);
        notes = rep.notes;
        z = std::move(rep.table);
    } else {
        throw Error(Errc::invalid_input, "zech mode must be bruteforce or propagate");
    }
    if (cfg.format == "json") {
        detail::json j;
        j["n"] = z.degree();
        j["p"] = format_set(p);
        j["mode"] = mode;
        j["complete"] = z.complete();
        j["cosets"] = z.leader_count();
        j["notes"] = notes;
        detail::json rows = detail::json::array();
        for (const auto& r : z.rows()) rows.push_back({to_dec(r.leader), to_dec(r.tau), provenance_name(r.how)});
        j["rows"] = rows;
        out << j.dump(1) << "\n";
    } else {
        z.write(out);
    }
    return z.complete() ? ok : partial;
}

// ---- debruijn ----
inline int cmd_debruijn(const RunConfig& cfg, std::ostream& out) {
    detail::check_format(cfg, {"text", "json", "dot", "hex"});
    BinPoly p = detail::need_poly(cfg);
    uint64_t t = detail::need_t(cfg);
    SampleMode mode = parse_sample_mode(cfg.mode.empty() ? "wilson" : cfg.mode);
    std::vector<std::string> notes;
    auto z = detail::obtain_table(cfg, p, notes);
    CycleCtx c = make_cycle_ctx(p, from_u64(t), z, {p.degree() <= 64});
    if (t > 65536) throw Error(Errc::resource, "t above 65536 is not supported");

    std::vector<ExpInt> cosets;
    for (const auto& r : z->rows()) {
        if (cfg.budget_z && cosets.size() >= cfg.budget_z) break;
        cosets.push_back(r.leader);
    }
    AdjSubgraph g = build_subgraph(c, cosets);
    auto missing = detail::unreached(g);

    detail::json j;
    j["p"] = format_set(p);
    j["t"] = t;
    j["f"] = format_set(c.f);
    j["cosets_used"] = cosets.size();
    j["notes"] = notes;
    if (!missing.empty()) {
        std::vector<std::string> names;
        for (size_t v : missing) names.push_back(vertex_name(v));
        if (cfg.format == "json") {
            j["connected"] = false;
            j["unreached"] = names;
            out << j.dump(1) << "\n";
        } else {
            out << "# disconnected: " << missing.size() << " cycles unreached from [0]\n";
            for (const auto& s : names) out << "unreached " << s << "\n";
        }
        return partial;
    }
    j["connected"] = true;
    std::optional<TreeCount> tc;
    if (t <= 2048) tc = count_spanning_trees(g);
    if (tc) j["log2_trees"] = tc->log2;

    if (cfg.format == "dot") {
        out << export_dot(g, true);
        for (uint64_t i = 0; i < cfg.count; ++i) out << export_dot(sample_spanning_tree(g, cfg.seed + i, mode, &c));
        return ok;
    }

    std::ostringstream text;
    text << "# debruijn p=" << format_set(p) << " t=" << t << " f=" << format_set(c.f) << " mode=" << (cfg.mode.empty() ? "wilson" : cfg.mode) << "\n";
    text << "subgraph cycles=" << t + 1 << " cosets=" << cosets.size();
    if (tc) text << " log2_trees=" << detail::fixed2(tc->log2);
    text << "\n";
    detail::json seqs = detail::json::array();
    for (uint64_t i = 0; i < cfg.count; ++i) {
        uint64_t seed = cfg.seed + i;
        SpanningTree tree = sample_spanning_tree(g, seed, mode, &c);
        JoinedFeedback h = joined_feedback(c, tree, true);
        std::optional<long> deg;
        try {
            deg = h.degree();
        } catch (const Error&) {
        }
        std::optional<BitVec> bits;
        if (c.n <= 26) {
            BitSeq s = materialize(h);
            if (!is_de_bruijn(s, c.n)) throw Error(Errc::corrupt_table, "generated sequence failed the window test");
            bits = s.bits;
        } else if (cfg.bits) {
            DebruijnStream st(h);
            bits = st.next_block(cfg.bits);
        }
        std::string anf = format_feedback(h);
        if (cfg.format == "hex") {
            if (!bits) throw Error(Errc::invalid_input, "hex output needs n <= 26 or --bits");
            out << "period=" << bits->size() << ";" << bits->to_hex() << "\n";
            continue;
        }
        detail::json e;
        e["seed"] = seed;
        detail::json edges = detail::json::array();
        for (const auto& te : tree.edges) edges.push_back({vertex_name(te.a), vertex_name(te.b), te.left ? to_dec(*te.left) : ""});
        e["tree"] = edges;
        e["anf"] = anf;
        if (deg) e["degree"] = *deg;
        if (bits) {
            e["bits"] = bits->size();
            e["hex"] = bits->to_hex();
        }
        seqs.push_back(e);
        text << "sequence " << i << " seed=" << seed;
        if (deg) text << " degree=" << *deg;
        text << "\n";
        text << "anf " << anf << "\n";
        if (bits) text << (c.n <= 26 ? "bits " : "prefix ") << detail::bits_text(*bits) << "\n";
    }
    if (cfg.format == "json") {
        j["sequences"] = seqs;
        out << j.dump(1) << "\n";
    } else if (cfg.format == "text") {
        out << text.str();
    }
    return ok;
}

// ---- certify ----
inline int cmd_certify(const RunConfig& cfg, std::ostream& out) {
    detail::check_format(cfg, {"text", "json", "dot"});
    BinPoly p = detail::need_poly(cfg);
    if (p.degree() > 64) throw Error(Errc::resource, "certify needs n <= 64");
    std::vector<std::string> notes;
    auto z = detail::obtain_table(cfg, p, notes);
    std::vector<uint64_t> ts;
    if (cfg.t)
        ts.push_back(*cfg.t);
    else
        ts = valid_ts(p, cfg.budget_s);
    std::vector<TreeCert> certs;
    detail::json skipped = detail::json::array();
    for (uint64_t t : ts) {
        AssociatedPoly a = t >= 2 && mersenne(unsigned(p.degree())) % from_u64(t) == 0 ? associated_irreducible(p, from_u64(t)) : AssociatedPoly{};
        if (!a.valid) {
            notes.push_back("t=" + std::to_string(t) + " skipped: not valid for p");
            skipped.push_back(t);
            continue;
        }
        if (cfg.l) {
            if (*cfg.l >= t) {
                notes.push_back("t=" + std::to_string(t) + " skipped: l out of range");
                skipped.push_back(t);
                continue;
            }
            certs.push_back(certify_center(*z, a.f, t, *cfg.l, cfg.budget_z));
        } else {
            certs.push_back(certify_center(*z, a.f, t, 0, cfg.budget_z));
        }
    }
    bool any = false;
    for (const auto& c : certs) any = any || c.found;
    if (cfg.format == "dot") {
        for (const auto& c : certs)
            if (c.found) out << export_dot(certificate_graph(c), true);
        return any ? ok : partial;
    }
    if (cfg.format == "json") {
        detail::json j;
        j["p"] = format_set(p);
        j["notes"] = notes;
        j["skipped"] = skipped;
        detail::json arr = detail::json::array();
        for (const auto& c : certs) {
            detail::json e;
            e["t"] = c.t;
            e["l"] = c.center;
            e["f"] = format_set(c.f);
            e["found"] = c.found;
            e["witness"] = c.witness;
            e["cp"] = c.cp;
            if (c.found) {
                e["log2_dbseqs"] = c.log2;
                e["dbseqs"] = c.log2 < 256 ? to_dec(c.dbseqs) : "";
            }
            e["examined"] = c.examined;
            e["missing"] = c.missing;
            arr.push_back(e);
        }
        j["certificates"] = arr;
        out << j.dump(1) << "\n";
    } else {
        out << "# certify p=" << format_set(p) << (cfg.l ? " almost-star l=" + std::to_string(*cfg.l) : " star") << "\n";
        for (const auto& n : notes) out << "# " << n << "\n";
        for (const auto& c : certs) {
            out << "t=" << c.t << " f=" << format_set(c.f);
            if (!c.found) {
                out << " none examined=" << c.examined << " missing=" << c.missing << "\n";
                continue;
            }
            out << " witness=" << detail::exp_list(c.witness) << " cp=" << c.cp << " log2=" << detail::fixed2(c.log2);
            if (c.log2 < 64) out << " dbseqs=" << to_dec(c.dbseqs);
            out << "\n";
        }
    }
    return any ? ok : partial;
}

// ---- crossjoin ----
inline int cmd_crossjoin(const RunConfig& cfg, std::ostream& out) {
    detail::check_format(cfg, {"text", "json"});
    BinPoly p = detail::need_poly(cfg);
    unsigned n = unsigned(p.degree());
    std::vector<std::string> notes;
    auto z = detail::obtain_table(cfg, p, notes);
    if (cfg.a.has_value() != cfg.b.has_value()) throw Error(Errc::invalid_input, "--a and --b go together");
    detail::json arr = detail::json::array();
    std::ostringstream text;
    text << "# crossjoin p=" << format_set(p) << "\n";
    uint64_t rounds = cfg.a ? 1 : cfg.count;
    for (uint64_t i = 0; i < rounds; ++i) {
        uint64_t seed = cfg.seed + i;
        CrossJoinResult r;
        if (cfg.a) {
            r.pair = crossjoin_from_exponents(p, *z, parse_exp(*cfg.a), parse_exp(*cfg.b));
            r.h = apply_crossjoin(JoinedFeedback::from_poly(p), r.pair);
        } else {
            r = random_crossjoin(p, *z, seed, 1000000);
        }
        const auto& c = r.pair;
        bool ordered = exponents_in_order(*c.a, *c.b, *c.tau_a, *c.tau_b);
        bool crossing = exponents_interleave(*c.a, *c.b, *c.tau_a, *c.tau_b);
        std::optional<long> deg;
        try {
            deg = r.h.degree();
        } catch (const Error&) {
        }
        std::optional<BitVec> bits;
        if (n <= 20) {
            Anf h = r.h.to_anf(20);
            BitSeq s = fsr_sequence(h, unit_state(n), (uint64_t(1) << n) - 1);
            if (crossing && !is_de_bruijn(insert_zero(s), n)) throw Error(Errc::corrupt_table, "cross-joined sequence failed the window test");
            bits = s.bits;
        }
        std::string anf = format_feedback(r.h);
        detail::json e;
        e["p"] = format_set(p);
        e["a"] = to_dec(*c.a);
        e["b"] = to_dec(*c.b);
        e["tau_a"] = to_dec(*c.tau_a);
        e["tau_b"] = to_dec(*c.tau_b);
        e["seed"] = cfg.a ? detail::json() : detail::json(seed);
        e["ordered"] = ordered;
        e["crossing"] = crossing;
        e["alpha"] = c.alpha.to_string();
        e["beta"] = c.beta.to_string();
        e["anf"] = anf;
        if (deg) e["degree"] = *deg;
        if (bits) e["modified_debruijn"] = detail::bits_text(*bits);
        arr.push_back(e);
        text << "pair " << i << " a=" << to_dec(*c.a) << " b=" << to_dec(*c.b) << " tau_a=" << to_dec(*c.tau_a) << " tau_b=" << to_dec(*c.tau_b);
        if (!cfg.a) text << " seed=" << seed;
        text << (crossing ? "" : " not-crossing");
        if (deg) text << " degree=" << *deg;
        text << "\n";
        if (n <= 64) text << "alpha " << c.alpha.to_string() << "\nbeta " << c.beta.to_string() << "\n";
        text << "anf " << anf << "\n";
        if (bits) text << "bits " << detail::bits_text(*bits) << "\n";
    }
    if (cfg.format == "json")
        out << arr.dump(1) << "\n";
    else
        out << text.str();
    return ok;
}

// ---- fryers ----
inline int cmd_fryers(const RunConfig& cfg, std::ostream& out) {
    detail::check_format(cfg, {"text", "json"});
    if (!cfg.n) throw Error(Errc::invalid_input, "--n is required");
    unsigned n = unsigned(*cfg.n);
    if (n < 2 || n > 40) throw Error(Errc::invalid_input, "n must lie in [2, 40]");
    uint64_t exp_total = (uint64_t(1) << (n - 1)) - n;
    detail::json j;
    j["n"] = n;
    j["log2_total"] = exp_total;
    if (cfg.k) {
        ExpInt v = fryers_coefficient(n, *cfg.k);
        j["k"] = *cfg.k;
        j["coefficient"] = to_dec(v);
        if (cfg.format == "json")
            out << j.dump(1) << "\n";
        else
            out << "N(" << *cfg.k << ")=" << to_dec(v) << "\n";
        return ok;
    }
    if (n > 12) throw Error(Errc::resource, "full coefficient lists are printed for n <= 12; use --k");
    auto cs = fryers_polynomial(n);
    ExpInt total = fryers_total(n);
    std::vector<std::string> strs;
    for (const auto& c : cs) strs.push_back(to_dec(c));
    if (cfg.format == "json") {
        j["coefficients"] = strs;
        j["total"] = to_dec(total);
        out << j.dump(1) << "\n";
    } else {
        out << "# fryers n=" << n << " odd k = 1, 3, ..., " << ((uint64_t(1) << (n - 1)) - 1) << "\n";
        for (size_t i = 0; i < strs.size(); ++i) out << (i ? "," : "") << strs[i];
        out << "\ntotal " << to_dec(total) << " = 2^" << exp_total << "\n";
    }
    return ok;
}

// ---- cyclotomic ----
inline int cmd_cyclotomic(const RunConfig& cfg, std::ostream& out) {
    detail::check_format(cfg, {"text", "json"});
    BinPoly p = detail::need_poly(cfg);
    uint64_t t = detail::need_t(cfg);
    if (t > 4096) throw Error(Errc::resource, "t above 4096 gives too large a matrix");
    std::vector<std::string> notes;
    auto z = detail::obtain_table(cfg, p, notes);
    CycleCtx c = make_cycle_ctx(p, from_u64(t), z);
    auto m = cyclotomic_numbers(c);
    if (cfg.format == "json") {
        detail::json j;
        j["p"] = format_set(p);
        j["t"] = t;
        j["f"] = format_set(c.f);
        j["matrix"] = m;
        out << j.dump(1) << "\n";
    } else {
        out << "# cyclotomic p=" << format_set(p) << " t=" << t << " f=" << format_set(c.f) << "\n";
        for (const auto& row : m) {
            for (size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
            out << "\n";
        }
    }
    return ok;
}

// Runs one command; errors go to err with the mapped exit code.
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.command == "zech") return cmd_zech(cfg, out);
        if (cfg.command == "debruijn") return cmd_debruijn(cfg, out);
        if (cfg.command == "certify") return cmd_certify(cfg, out);
        if (cfg.command == "crossjoin") return cmd_crossjoin(cfg, out);
        if (cfg.command == "fryers") return cmd_fryers(cfg, out);
        if (cfg.command == "cyclotomic") return cmd_cyclotomic(cfg, out);
        err << "unknown command '" << cfg.command << "'\n";
        return bad_input;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
}

}  // namespace debruijn::cli
