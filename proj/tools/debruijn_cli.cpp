#include <debruijn/cli.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using debruijn::cli::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--format", cfg.format, "text|json|dot|hex")->check(CLI::IsMember({"text", "json", "dot", "hex"}));
    sub->add_option("--table", cfg.table, "zech v1 table file to use instead of building one");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Binary de Bruijn sequences from Zech logarithms"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string out_path;
    app.add_option("--out", out_path, "write the result to this file");

    auto* zech = app.add_subcommand("zech", "Zech logarithm table of a primitive polynomial");
    zech->add_option("--p", cfg.p, "polynomial, e.g. n=10;{3} or x^10+x^3+1")->required();
    zech->add_option("--mode", cfg.mode, "bruteforce|propagate")->check(CLI::IsMember({"bruteforce", "propagate"}));
    zech->add_option("--format", cfg.format, "text|json")->check(CLI::IsMember({"text", "json"}));

    auto* db = app.add_subcommand("debruijn", "cycle-joined de Bruijn sequences");
    db->add_option("--p", cfg.p, "primitive polynomial")->required();
    db->add_option("--t", cfg.t, "number of nonzero cycles")->required();
    db->add_option("--count", cfg.count, "sequences to produce (0: subgraph only)");
    db->add_option("--seed", cfg.seed, "first tree seed");
    db->add_option("--mode", cfg.mode, "tree sampler: wilson|kruskal|bfs")->check(CLI::IsMember({"wilson", "kruskal", "bfs"}));
    db->add_option("--budget-z", cfg.budget_z, "cosets fed to the subgraph (0: all)");
    db->add_option("--bits", cfg.bits, "stream this many bits when n > 26");
    add_common(db, cfg);

    auto* cert = app.add_subcommand("certify", "star and almost-star spanning tree certificates");
    cert->add_option("--p", cfg.p, "primitive polynomial")->required();
    cert->add_option("--t", cfg.t, "single t (default: every valid t up to --budget-s)");
    cert->add_option("--l", cfg.l, "almost-star center l");
    cert->add_option("--budget-s", cfg.budget_s, "largest t tried");
    cert->add_option("--budget-z", cfg.budget_z, "odd multipliers tried per t");
    add_common(cert, cfg);

    auto* cj = app.add_subcommand("crossjoin", "NLFSRs from cross-join pairs of an m-sequence");
    cj->add_option("--p", cfg.p, "primitive polynomial")->required();
    cj->add_option("--count", cfg.count, "random pairs to draw");
    cj->add_option("--seed", cfg.seed, "first seed");
    cj->add_option("--a", cfg.a, "force exponent a");
    cj->add_option("--b", cfg.b, "force exponent b");
    add_common(cj, cfg);

    auto* fr = app.add_subcommand("fryers", "coefficients of Fryers' formula");
    fr->add_option("--n", cfg.n, "order")->required();
    fr->add_option("--k", cfg.k, "single coefficient N(l;k)");
    fr->add_option("--format", cfg.format, "text|json")->check(CLI::IsMember({"text", "json"}));

    auto* cy = app.add_subcommand("cyclotomic", "cyclotomic numbers (i,j) of order t");
    cy->add_option("--p", cfg.p, "primitive polynomial")->required();
    cy->add_option("--t", cfg.t, "order t")->required();
    add_common(cy, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : debruijn::cli::bad_input;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    if (out_path.empty()) return debruijn::cli::run_command(cfg, std::cout, std::cerr);
    std::ostringstream buf;
    int rc = debruijn::cli::run_command(cfg, buf, std::cerr);
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return debruijn::cli::bad_input;
    }
    f << buf.str();
    return rc;
}
