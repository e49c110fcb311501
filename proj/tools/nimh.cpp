#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nimh/nimh.hpp"

using namespace nimh;

namespace {

struct Options {
    std::string format = "json";
    std::string output;
    std::string cache;
    int ex_ceiling = 12;
    int exstar_ceiling = 12;
    long long node_budget = 400'000'000;

    int n = -1;
    int m = -1;
    int k = 2;
    std::string pattern;
    std::string coloring;
    std::string coloring_out;
    std::uint64_t seed = 1;
    long long budget = 1000;
    int retry_cap = 64;
    bool exact = false;
    bool reduced = false;
    bool decomposition = false;
    std::string kst;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("unreadable-file", "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

EdgeColoring load_coloring(const std::string& path) { return parse_coloring_text(read_file(path)); }

void require_n(const Options& o) {
    if (o.n < 0) throw invalid_input("missing-n", "--n is required");
}

BipartitePattern require_pattern(const Options& o) {
    if (o.pattern.empty()) throw invalid_input("missing-pattern", "--pattern is required");
    return pattern_from_spec(o.pattern);
}

void maybe_write_coloring(const Options& o, const EdgeColoring& c) {
    if (o.coloring_out.empty()) return;
    std::ofstream out(o.coloring_out);
    if (!out) throw invalid_input("unwritable-file", "cannot write " + o.coloring_out);
    out << to_coloring_text(c);
}

json run(const std::string& cmd, const std::string& variant, const Options& o) {
    TuranLimits limits;
    limits.ex_ceiling = o.ex_ceiling;
    limits.exstar_ceiling = o.exstar_ceiling;
    limits.node_budget = o.node_budget;
    std::optional<std::filesystem::path> cache;
    if (!o.cache.empty()) cache = o.cache;
    TuranSolver solver(limits, cache);

    if (cmd == "ex") {
        require_n(o);
        auto H = require_pattern(o);
        auto j = to_json(solver.ex(o.n, H));
        j["pattern"] = H.name();
        return j;
    }
    if (cmd == "exstar") {
        require_n(o);
        if (o.m < 0) throw invalid_input("missing-m", "--m is required");
        auto H = require_pattern(o);
        if (!H.is_bipartite()) throw invalid_input("not-bipartite", "ex* needs a bipartite pattern");
        SidedPattern p = o.reduced ? H.reduced_oriented() : SidedPattern{H.graph(), H.x()};
        auto j = to_json(solver.ex_star(o.m, o.n, p));
        j["pattern"] = o.reduced ? H.name() + "-w" : H.name();
        return j;
    }
    if (cmd == "f") {
        require_n(o);
        auto H = require_pattern(o);
        auto rep = o.exact ? f_exact(o.n, H, o.k) : f_heuristic(o.n, H, o.k, o.budget, o.seed, solver);
        if (!rep.colorings.empty()) maybe_write_coloring(o, rep.colorings.front());
        return to_json(rep);
    }
    if (cmd == "nim") {
        auto H = require_pattern(o);
        if (o.coloring.empty()) throw invalid_input("missing-coloring", "--coloring is required");
        auto c = load_coloring(o.coloring);
        auto j = to_json(nim_edges(c, H), c);
        j["pattern"] = H.name();
        return j;
    }
    if (cmd == "construct") {
        require_n(o);
        json j;
        EdgeColoring c;
        if (variant == "extremal") {
            auto H = require_pattern(o);
            c = extremal_two_coloring(o.n, H, solver);
            j["pattern"] = H.name();
        } else if (variant == "overlay") {
            auto H = require_pattern(o);
            auto [coloring, cert] = permuted_overlay_coloring(o.n, H, o.k, o.seed, o.retry_cap, solver);
            c = std::move(coloring);
            j["pattern"] = H.name();
            j["seed"] = o.seed;
            j["certificate"] = to_json(cert);
        } else {
            c = pentagon_three_coloring(o.n);
        }
        j["construction"] = variant;
        j["coloring"] = to_json(c);
        if (!o.pattern.empty()) {
            auto report = nim_edges(c, pattern_from_spec(o.pattern));
            j["nim_total"] = report.total;
            j["nim_per_colour"] = report.per_colour;
        }
        maybe_write_coloring(o, c);
        return j;
    }
    if (cmd == "audit2" || cmd == "auditk") {
        auto H = require_pattern(o);
        if (o.coloring.empty()) throw invalid_input("missing-coloring", "--coloring is required");
        auto c = load_coloring(o.coloring);
        auto rep = cmd == "audit2" ? audit_two_color(c, H, solver) : audit_k_color(c, H, solver);
        return to_json(rep, o.decomposition);
    }
    if (cmd == "reduce") {
        json j;
        if (!o.kst.empty()) {
            int s = 0, t = 0;
            char tail = 0;
            if (std::sscanf(o.kst.c_str(), "%d,%d%c", &s, &t, &tail) != 2)
                throw invalid_input("bad-kst", "--kst expects s,t");
            auto v = kst_reducibility(s, t);
            j["s"] = s;
            j["t"] = t;
            j["verdict"] = to_string(v.verdict);
            j["threshold"] = v.threshold;
            j["special_pair"] = v.special_pair;
            return j;
        }
        auto H = require_pattern(o);
        auto v = is_reducible(H);
        j["pattern"] = H.name();
        j["verdict"] = to_string(v.verdict);
        j["rule"] = v.rule;
        if (v.witness >= 0) j["witness_vertex"] = v.witness;
        return j;
    }
    throw invalid_input("unknown-command", "unknown subcommand " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"NIM-H edges, Turan numbers and decomposition audits on edge-colourings of K_n"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    if (const char* env = std::getenv("NIMH_CACHE")) o.cache = env;

    app.add_option("--format", o.format, "json | table")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--output", o.output, "write the report here instead of stdout");
    app.add_option("--cache", o.cache, "Turan cache file (default $NIMH_CACHE)");
    app.add_option("--ex-ceiling", o.ex_ceiling, "largest n solved exactly for ex")->check(CLI::Range(0, 64));
    app.add_option("--exstar-ceiling", o.exstar_ceiling, "largest part size solved exactly for ex*")
        ->check(CLI::Range(0, 64));
    app.add_option("--node-budget", o.node_budget, "search node budget for ex*")->check(CLI::PositiveNumber);

    auto n_opt = [&](CLI::App* s) { s->add_option("--n", o.n, "number of vertices")->check(CLI::Range(0, 64)); };
    auto pattern_opt = [&](CLI::App* s, bool required) {
        auto opt = s->add_option("--pattern", o.pattern, "k3, c4, k3,3, theta2,3 or a JSON descriptor");
        if (required) opt->required();
    };

    auto ex = app.add_subcommand("ex", "exact Turan number ex(n, H)");
    n_opt(ex);
    pattern_opt(ex, true);

    auto exstar = app.add_subcommand("exstar", "one-sided bipartite Turan number ex*(m, n, H)");
    n_opt(exstar);
    exstar->add_option("--m", o.m, "size of the part holding X")->check(CLI::Range(0, 64));
    pattern_opt(exstar, true);
    exstar->add_flag("--reduced", o.reduced, "use H - w oriented with X - w in the m-part");

    auto f = app.add_subcommand("f", "f_k(n, H): exact for small n, otherwise seeded local search");
    n_opt(f);
    pattern_opt(f, true);
    f->add_option("--k", o.k, "number of colours")->check(CLI::Range(2, 255));
    f->add_flag("--exact", o.exact, "exhaustive search");
    f->add_option("--budget", o.budget, "local search steps")->check(CLI::NonNegativeNumber);
    f->add_option("--seed", o.seed, "random seed");
    f->add_option("--coloring-out", o.coloring_out, "write the best colouring here");

    auto nim = app.add_subcommand("nim", "NIM edges of a colouring");
    nim->add_option("--coloring", o.coloring, "colouring file")->required();
    pattern_opt(nim, true);

    auto construct = app.add_subcommand("construct", "explicit colourings");
    construct->require_subcommand(1);
    std::string variant;
    for (const char* name : {"extremal", "overlay", "pentagon"}) {
        auto s = construct->add_subcommand(name);
        n_opt(s);
        pattern_opt(s, std::string(name) != "pentagon");
        if (std::string(name) == "overlay") {
            s->add_option("--k", o.k, "number of colours")->check(CLI::Range(2, 255));
            s->add_option("--seed", o.seed, "random seed");
            s->add_option("--retry-cap", o.retry_cap, "permutation tuples to try")->check(CLI::PositiveNumber);
        }
        s->add_option("--coloring-out", o.coloring_out, "write the colouring here");
        s->callback([&variant, name] { variant = name; });
    }

    for (const char* name : {"audit2", "auditk"}) {
        auto s = app.add_subcommand(name, std::string(name) == "audit2" ? "two-colour decomposition audit"
                                                                        : "multi-colour decomposition audit");
        s->add_option("--coloring", o.coloring, "colouring file")->required();
        pattern_opt(s, true);
        s->add_flag("--decomposition", o.decomposition, "include the full decomposition");
    }

    auto reduce = app.add_subcommand("reduce", "reducibility verdict for H or K_{s,t}");
    pattern_opt(reduce, false);
    reduce->add_option("--kst", o.kst, "s,t");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(Status::InvalidInput);
    }

    std::string cmd = app.get_subcommands().front()->get_name();
    json report;
    int status = 0;
    try {
        report = run(cmd, variant, o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.reason() << ": " << e.what() << "\n";
        report = error_json(e);
        status = static_cast<int>(e.status());
    }
    std::string text = o.format == "table" ? to_tabular(report) : report.dump(2) + "\n";
    if (o.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(o.output);
        out << text;
    }
    return status;
}
