#pragma once

#include <algorithm>
#include <bit>
#include <climits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "coloring.hpp"
#include "mono_scan.hpp"
#include "pattern.hpp"
#include "turan.hpp"

namespace nimh {

struct Star {
    int colour = 0;
    int centre = -1;
    std::vector<int> leaves;   // ascending
    int nim_partner = -1;      // a leaf joined to the centre by a NIM edge
    bool full = false;         // true when the centre had at least h edges of this colour
};

struct VertexClass {
    std::vector<int> key;        // key[j] = colour of the edge to S[j]
    std::vector<int> members;    // ascending
    std::vector<int> feasible;   // colours occurring in key, ascending

    bool constant() const { return feasible.size() == 1; }
    bool feasible_for(int colour) const { return std::binary_search(feasible.begin(), feasible.end(), colour); }
};

/// Stars around NIM edges, the merged vertex set S, and the partition of the remaining vertices
/// by the colours of their edges towards S.
struct StarDecomposition {
    int n = 0;
    int k = 0;
    int h = 0;
    std::vector<Star> stars;            // one per colour, stars[i - 1] for colour i
    std::vector<int> S;                 // ascending
    std::vector<VertexClass> classes;   // ordered by key
    std::vector<int> class_of;          // class index per vertex, -1 on S

    int t() const { return static_cast<int>(S.size()); }
};

namespace detail {

inline Star build_star(const EdgeColoring& c, const NimReport& r, int colour, int h) {
    const int n = c.order();
    auto cls = c.colour_class(colour);
    auto nim = nim_colour_graph(c, r, colour);
    int best = -1;
    for (int x = 0; x < n; ++x) {
        if (!nim.row(x)) continue;
        if (cls.degree(x) >= h) {
            best = x;
            break;
        }
        if (best < 0 || cls.degree(x) > cls.degree(best)) best = x;
    }
    if (best < 0)
        throw not_applicable("no-nim-edge-of-colour", "no NIM edge of colour " + std::to_string(colour));
    Star s;
    s.colour = colour;
    s.centre = best;
    s.nim_partner = std::countr_zero(nim.row(best));
    s.full = cls.degree(best) >= h;
    if (!s.full) {
        for_each_bit(cls.row(best), [&](int v) { s.leaves.push_back(v); });
        return s;
    }
    s.leaves.push_back(s.nim_partner);
    for_each_bit(cls.row(best) & ~bit(s.nim_partner), [&](int v) {
        if (static_cast<int>(s.leaves.size()) < h) s.leaves.push_back(v);
    });
    std::sort(s.leaves.begin(), s.leaves.end());
    return s;
}

} // namespace detail

/// Stars for every colour in `colours` (ascending), then the classes of V \ S.
inline StarDecomposition build_star_decomposition(const EdgeColoring& c, const BipartitePattern& H,
                                                  const NimReport& report, const std::vector<int>& colours) {
    StarDecomposition d;
    d.n = c.order();
    d.k = c.colours();
    d.h = H.h();
    Bits in_s = 0;
    for (int colour : colours) {
        d.stars.push_back(detail::build_star(c, report, colour, d.h));
        in_s |= bit(d.stars.back().centre);
        for (int v : d.stars.back().leaves) in_s |= bit(v);
    }
    for_each_bit(in_s, [&](int v) { d.S.push_back(v); });
    d.class_of.assign(static_cast<std::size_t>(d.n), -1);
    std::map<std::vector<int>, std::vector<int>> by_key;
    for (int z = 0; z < d.n; ++z) {
        if (in_s & bit(z)) continue;
        std::vector<int> key;
        for (int s : d.S) key.push_back(c.colour(z, s));
        by_key[key].push_back(z);
    }
    for (auto& [key, members] : by_key) {
        VertexClass vc;
        vc.key = key;
        vc.members = members;
        std::set<int> f(key.begin(), key.end());
        vc.feasible.assign(f.begin(), f.end());
        for (int z : members) d.class_of[z] = static_cast<int>(d.classes.size());
        d.classes.push_back(std::move(vc));
    }
    return d;
}

inline StarDecomposition build_star_decomposition(const EdgeColoring& c, const BipartitePattern& H) {
    auto report = nim_edges(c, H);
    std::vector<int> all(static_cast<std::size_t>(c.colours()));
    std::iota(all.begin(), all.end(), 1);
    return build_star_decomposition(c, H, report, all);
}

/// One audited inequality. Per-class and per-pair claims are folded into a single row holding
/// the instance with the least slack.
struct ClaimVerdict {
    std::string claim;
    long long measured = 0;
    long long bound = 0;
    long long instances = 0;
    bool pass = true;
    std::string where;   // instance that produced measured/bound

    long long slack() const { return bound - measured; }
};

struct AuditReport {
    std::string kind;   // "audit2" | "auditk"
    int n = 0;
    int k = 0;
    int h = 0;
    std::string pattern;
    long long nim_total = 0;
    std::vector<long long> nim_per_colour;
    StarDecomposition decomposition;
    std::vector<ClaimVerdict> claims;
    std::map<std::string, long long> type_counts;   // auditk only
    std::vector<long long> b;                       // auditk only: b[i - 1] = |B_i|
    long long n_star = 0;
    long long n_star_bound = 0;
    bool pass = true;
    std::string counterexample;   // colouring text, present on failure

    const ClaimVerdict* find(const std::string& claim) const {
        for (const auto& v : claims)
            if (v.claim == claim) return &v;
        return nullptr;
    }
};

namespace detail {

inline long long sat_add(long long a, long long b) { return a > LLONG_MAX - b ? LLONG_MAX : a + b; }

inline long long sat_mul(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    return a > LLONG_MAX / b ? LLONG_MAX : a * b;
}

inline long long sat_pow2(int e) { return e >= 62 ? LLONG_MAX : (1LL << e); }

class ClaimTable {
public:
    void check(const std::string& claim, long long measured, long long bound, const std::string& where = {}) {
        auto it = index_.find(claim);
        if (it == index_.end()) {
            index_[claim] = rows_.size();
            rows_.push_back({claim, measured, bound, 0, true, where});
            it = index_.find(claim);
        }
        auto& row = rows_[it->second];
        ++row.instances;
        if (bound - measured < row.bound - row.measured || row.instances == 1) {
            row.measured = measured;
            row.bound = bound;
            row.where = where;
        }
        if (measured > bound) row.pass = false;
    }

    void require(const std::string& claim, bool ok, const std::string& where = {}) {
        check(claim, ok ? 0 : 1, 0, where);
    }

    // Registers a claim with no instances so it still appears in the report.
    void touch(const std::string& claim) {
        if (!index_.count(claim)) {
            index_[claim] = rows_.size();
            rows_.push_back({claim, 0, 0, 0, true, {}});
        }
    }

    std::vector<ClaimVerdict> rows() const { return rows_; }

private:
    std::vector<ClaimVerdict> rows_;
    std::map<std::string, std::size_t> index_;
};

inline std::string class_name(const VertexClass& vc) {
    std::string s = "A[";
    for (int x : vc.key) s += std::to_string(x);
    return s + "]";
}

inline SimpleGraph nim_inside(const EdgeColoring& c, const NimReport& r, int colour, const std::vector<int>& members) {
    SimpleGraph g(static_cast<int>(members.size()));
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            int idx = edge_index(c.order(), members[a], members[b]);
            if (r.flags[idx] && c.at(idx) == colour) g.add_edge(static_cast<int>(a), static_cast<int>(b));
        }
    return g;
}

inline long long nim_between(const EdgeColoring& c, const NimReport& r, int colour, const std::vector<int>& left,
                             const std::vector<int>& right) {
    long long count = 0;
    for (int a : left)
        for (int b : right) {
            int idx = edge_index(c.order(), a, b);
            if (r.flags[idx] && c.at(idx) == colour) ++count;
        }
    return count;
}

inline void check_reduced_pattern(const BipartitePattern& H) {
    if (!H.is_bipartite()) throw invalid_input("not-bipartite", "audits need a bipartite pattern");
    if (!H.weak()) throw invalid_input("no-weak-vertex", "audits need a weak vertex");
    auto r = H.reduced();
    if (r.graph.edge_count() == 0) throw invalid_input("reduced-pattern-empty", "H - w has no edges");
    if (!r.graph.connected()) throw invalid_input("reduced-pattern-disconnected", "H - w is not connected");
}

// Decomposition invariants shared by both audits.
inline void check_structure(const EdgeColoring& c, const NimReport& r, const StarDecomposition& d, int t_bound,
                            ClaimTable& table) {
    table.check("T", d.t(), t_bound);
    for (const auto& s : d.stars) {
        std::string where = "star " + std::to_string(s.colour);
        bool ok = static_cast<int>(s.leaves.size()) <= d.h && !s.leaves.empty();
        for (int v : s.leaves) ok = ok && c.colour(s.centre, v) == s.colour;
        int idx = edge_index(d.n, s.centre, s.nim_partner);
        ok = ok && r.flags[idx] && std::binary_search(s.leaves.begin(), s.leaves.end(), s.nim_partner);
        table.require("STAR", ok, where);
    }
    std::vector<int> seen(static_cast<std::size_t>(d.n), 0);
    for (int s : d.S) ++seen[s];
    for (const auto& vc : d.classes) {
        for (int z : vc.members) ++seen[z];
        bool ok = true;
        for (std::size_t j = 0; j < d.S.size(); ++j)
            for (int z : vc.members) ok = ok && c.colour(z, d.S[j]) == vc.key[j];
        table.require("BUNDLE", ok, class_name(vc));
    }
    table.touch("BUNDLE");
    table.require("PARTITION", std::all_of(seen.begin(), seen.end(), [](int x) { return x == 1; }));
}

// Every colour's NIM edges form an H-free graph.
inline void check_nim_free(const EdgeColoring& c, const NimReport& r, const Matcher& matcher, ClaimTable& table) {
    for (int colour = 1; colour <= c.colours(); ++colour)
        table.require("NIM-FREE", is_h_free(nim_colour_graph(c, r, colour), matcher), "colour " + std::to_string(colour));
}

inline void finish(AuditReport& rep, const ClaimTable& table, const EdgeColoring& c) {
    rep.claims = table.rows();
    rep.pass = std::all_of(rep.claims.begin(), rep.claims.end(), [](const ClaimVerdict& v) { return v.pass; });
    if (!rep.pass) rep.counterexample = to_coloring_text(c);
}

inline std::vector<int> nim_colours(const NimReport& r) {
    std::vector<int> out;
    for (std::size_t i = 0; i < r.per_colour.size(); ++i)
        if (r.per_colour[i] > 0) out.push_back(static_cast<int>(i) + 1);
    return out;
}

} // namespace detail

/// Recomputes the two-colour decomposition and checks every counting step of the bound
/// |E_c| <= (t+2h)n + 2^{2h+2}*2*ex(n,H-w) + 2^{4h+4}*2*ex(n,H-w) for a colouring whose NIM
/// set has both colours.
inline AuditReport audit_two_color(const EdgeColoring& c, const BipartitePattern& H, TuranSolver& solver) {
    if (c.colours() != 2) throw invalid_input("colour-count", "audit2 needs a two-colouring");
    detail::check_reduced_pattern(H);
    Matcher matcher(H.graph());
    auto report = nim_edges(c, matcher);
    if (report.per_colour[0] == 0 || report.per_colour[1] == 0)
        throw not_applicable("single-color-nim-set", "single-color NIM set, audit not applicable");

    const int n = c.order(), h = H.h();
    const auto reduced = H.reduced();
    const auto oriented = H.reduced_oriented();
    Matcher reduced_matcher(reduced.graph);
    const long long ex_n = solver.ex_value(n, reduced.graph);

    AuditReport rep;
    rep.kind = "audit2";
    rep.n = n;
    rep.k = 2;
    rep.h = h;
    rep.pattern = H.name();
    rep.nim_total = report.total;
    rep.nim_per_colour = report.per_colour;
    rep.decomposition = build_star_decomposition(c, H, report, {1, 2});
    const auto& d = rep.decomposition;
    const int t = d.t();

    detail::ClaimTable table;
    detail::check_structure(c, report, d, 2 * h + 2, table);

    long long constant_size = 0;
    for (const auto& vc : d.classes) {
        if (!vc.constant()) continue;
        constant_size += static_cast<long long>(vc.members.size());
        table.check("C1", static_cast<long long>(vc.members.size()), h - 1, detail::class_name(vc));
    }
    table.touch("C1");

    // NIM edges touching S or a constant class
    long long adjacent = 0;
    auto special = [&](int v) { return d.class_of[v] < 0 || d.classes[d.class_of[v]].constant(); };
    for (int u = 0, idx = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++idx)
            if (report.flags[idx] && (special(u) || special(v))) ++adjacent;
    table.check("ACCOUNT", adjacent, (t + constant_size) * n);
    table.check("ACCOUNT-SIZE", (t + constant_size) * n, static_cast<long long>(t + 2 * h) * n);

    long long inside_total = 0, between_total = 0;
    const int classes = static_cast<int>(d.classes.size());
    for (int a = 0; a < classes; ++a) {
        const auto& A = d.classes[a];
        if (A.constant()) continue;
        long long both = 0;
        for (int colour = 1; colour <= 2; ++colour) {
            auto g = detail::nim_inside(c, report, colour, A.members);
            auto where = detail::class_name(A) + " colour " + std::to_string(colour);
            table.require("C2-FREE", is_h_free(g, reduced_matcher), where);
            table.check("C2", g.edge_count(), solver.ex_value(g.order(), reduced.graph), where);
            both += g.edge_count();
        }
        table.check("C2-LITERAL", both, 2 * ex_n, detail::class_name(A));
        inside_total += both;
        for (int b = a + 1; b < classes; ++b) {
            const auto& B = d.classes[b];
            if (B.constant()) continue;
            const int sa = static_cast<int>(A.members.size()), sb = static_cast<int>(B.members.size());
            long long pair = 0;
            for (int colour = 1; colour <= 2; ++colour) {
                long long count = detail::nim_between(c, report, colour, A.members, B.members);
                auto where = detail::class_name(A) + "," + detail::class_name(B) + " colour " + std::to_string(colour);
                table.check("C3", count, std::min(solver.ex_star_value(sa, sb, oriented), solver.ex_star_value(sb, sa, oriented)),
                            where);
                pair += count;
            }
            table.check("C3-LITERAL", pair, 2 * ex_n, detail::class_name(A) + "," + detail::class_name(B));
            between_total += pair;
        }
    }
    table.touch("C2");
    table.touch("C3");
    table.check("SPLIT", report.total, adjacent + inside_total + between_total);

    const long long classes_bound = detail::sat_pow2(2 * h + 2);
    long long total_bound = static_cast<long long>(t + 2 * h) * n;
    total_bound = detail::sat_add(total_bound, detail::sat_mul(classes_bound, 2 * ex_n));
    total_bound = detail::sat_add(total_bound, detail::sat_mul(detail::sat_mul(classes_bound, classes_bound), 2 * ex_n));
    table.check("CLASSES", classes, classes_bound);
    table.check("TOTAL", report.total, total_bound);
    detail::check_nim_free(c, report, matcher, table);
    detail::finish(rep, table, c);
    return rep;
}

/// Multi-colour audit for a colouring whose NIM set meets every colour: per-colour class sizes,
/// class and pair bounds against ex(.,H-w) and ex*(.,.,H-w), the edge type split, the B_i
/// containment and N* <= sum ex(b_i, H).
inline AuditReport audit_k_color(const EdgeColoring& c, const BipartitePattern& H, TuranSolver& solver) {
    detail::check_reduced_pattern(H);
    Matcher matcher(H.graph());
    auto report = nim_edges(c, matcher);
    const int n = c.order(), k = c.colours(), h = H.h();
    auto present = detail::nim_colours(report);
    if (static_cast<int>(present.size()) < k)
        throw not_applicable("missing-colour-in-nim-set", "some colour has no NIM edge, audit not applicable");

    const auto reduced = H.reduced();
    const auto oriented = H.reduced_oriented();
    Matcher reduced_matcher(reduced.graph);
    const long long ex_n = solver.ex_value(n, reduced.graph);
    const long long ex_star_n = solver.ex_star_value(n, n, oriented);

    AuditReport rep;
    rep.kind = "auditk";
    rep.n = n;
    rep.k = k;
    rep.h = h;
    rep.pattern = H.name();
    rep.nim_total = report.total;
    rep.nim_per_colour = report.per_colour;
    rep.decomposition = build_star_decomposition(c, H, report, present);
    const auto& d = rep.decomposition;

    detail::ClaimTable table;
    detail::check_structure(c, report, d, k * (h + 1), table);

    for (const auto& vc : d.classes)
        if (vc.constant())
            table.check("(1)", static_cast<long long>(vc.members.size()), h - 1, detail::class_name(vc));
    table.touch("(1)");

    // B_i: classes with at least two feasible colours, i not among them
    std::vector<Bits> B(static_cast<std::size_t>(k), 0);
    long long multi_size = 0;
    for (const auto& vc : d.classes) {
        if (vc.feasible.size() < 2) continue;
        multi_size += static_cast<long long>(vc.members.size());
        for (int i = 1; i <= k; ++i)
            if (!vc.feasible_for(i))
                for (int z : vc.members) B[i - 1] |= bit(z);
    }

    std::map<std::string, long long> types{{"(2)", 0}, {"(3)", 0}, {"(i)", 0}, {"(ii)", 0}, {"(iii)", 0}};
    std::vector<SimpleGraph> star_edges(static_cast<std::size_t>(k), SimpleGraph(n));   // type (ii)/(iii) per colour
    bool contained = true;
    for (int u = 0, idx = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++idx) {
            if (!report.flags[idx]) continue;
            const int colour = c.at(idx), cu = d.class_of[u], cv = d.class_of[v];
            if (cu < 0 || cv < 0 || d.classes[cu].constant() || d.classes[cv].constant()) {
                ++types["(i)"];
                continue;
            }
            const auto &A = d.classes[cu], &Bc = d.classes[cv];
            std::string type;
            if (cu == cv)
                type = A.feasible_for(colour) ? "(2)" : "(ii)";
            else
                type = (A.feasible_for(colour) || Bc.feasible_for(colour)) ? "(3)" : "(iii)";
            ++types[type];
            if (type == "(ii)" || type == "(iii)") {
                star_edges[colour - 1].add_edge(u, v);
                contained = contained && (B[colour - 1] & bit(u)) && (B[colour - 1] & bit(v));
            }
        }
    table.require("CONTAIN", contained);

    const int classes = static_cast<int>(d.classes.size());
    for (int a = 0; a < classes; ++a) {
        const auto& A = d.classes[a];
        if (A.constant()) continue;
        for (int i : A.feasible) {
            auto g = detail::nim_inside(c, report, i, A.members);
            auto where = detail::class_name(A) + " colour " + std::to_string(i);
            table.require("(2)-FREE", is_h_free(g, reduced_matcher), where);
            table.check("(2)", g.edge_count(), solver.ex_value(g.order(), reduced.graph), where);
            table.check("(2)-LITERAL", g.edge_count(), ex_n, where);
        }
        for (int b = 0; b < classes; ++b) {
            const auto& Bc = d.classes[b];
            if (b == a || Bc.constant()) continue;
            const int sa = static_cast<int>(A.members.size()), sb = static_cast<int>(Bc.members.size());
            // colours feasible on Bc: no copy of H-w with its Y side in Bc, so the A side is the
            // m-part; each unordered pair is visited from both ends
            for (int i : Bc.feasible) {
                long long count = detail::nim_between(c, report, i, A.members, Bc.members);
                auto where = detail::class_name(A) + "," + detail::class_name(Bc) + " colour " + std::to_string(i);
                table.check("(3)", count, solver.ex_star_value(sa, sb, oriented), where);
                table.check("(3)-LITERAL", count, ex_star_n, where);
            }
        }
    }
    table.touch("(2)");
    table.touch("(3)");

    long long n_star = 0, n_star_bound = 0, b_sum = 0;
    for (int i = 1; i <= k; ++i) {
        const int bi = std::popcount(B[i - 1]);
        rep.b.push_back(bi);
        b_sum += bi;
        const long long ni = star_edges[i - 1].edge_count();
        const long long bound = solver.ex_value(bi, H.graph());
        n_star += ni;
        n_star_bound += bound;
        table.check("N*-COLOUR", ni, bound, "colour " + std::to_string(i));
    }
    rep.n_star = n_star;
    rep.n_star_bound = n_star_bound;
    rep.type_counts = types;
    table.check("N*", n_star, n_star_bound);
    table.check("B-SUM", b_sum, static_cast<long long>(k - 2) * multi_size);
    table.check("T-TYPES", report.total, types["(2)"] + types["(3)"] + types["(i)"] + types["(ii)"] + types["(iii)"]);
    detail::check_nim_free(c, report, matcher, table);
    detail::finish(rep, table, c);
    return rep;
}

enum class Reducibility { Reducible, Unknown };

inline const char* to_string(Reducibility r) { return r == Reducibility::Reducible ? "reducible" : "unknown"; }

struct KstVerdict {
    Reducibility verdict = Reducibility::Unknown;
    bool special_pair = false;   // (3,3) or (4,7)
    long long threshold = 0;     // min(s^2-3s+3, (s-1)!), reducible iff t exceeds it
};

/// K_{s,t} is reducible whenever t > min(s^2 - 3s + 3, (s-1)!). s = 1 is left unknown.
inline KstVerdict kst_reducibility(int s, int t) {
    if (s < 1 || t < s) throw invalid_input("bad-kst", "need 1 <= s <= t");
    KstVerdict v;
    v.special_pair = (s == 3 && t == 3) || (s == 4 && t == 7);
    if (s == 1) return v;
    long long fact = 1;
    for (int i = 2; i <= s - 1 && fact <= t; ++i) fact *= i;
    const long long quad = static_cast<long long>(s) * s - 3LL * s + 3;
    v.threshold = std::min(quad, fact);
    if (t > v.threshold) v.verdict = Reducibility::Reducible;
    return v;
}

struct ReducibilityVerdict {
    Reducibility verdict = Reducibility::Unknown;
    std::string rule;   // "cycle-plus-tree" | "kst" | ""
    int witness = -1;   // vertex whose deletion leaves a tree
};

namespace detail {

inline bool complete_bipartite_sides(const SimpleGraph& g, int& s, int& t) {
    auto sides = g.two_colouring();
    if (sides.empty() || !g.connected()) return false;
    Bits left = 0;
    for (int v = 0; v < g.order(); ++v)
        if (sides[v] == 0) left |= bit(v);
    const Bits right = g.all() & ~left;
    for (int v = 0; v < g.order(); ++v)
        if (g.row(v) != ((left & bit(v)) ? right : left)) return false;
    s = std::popcount(left);
    t = std::popcount(right);
    if (s > t) std::swap(s, t);
    return true;
}

} // namespace detail

/// Sufficient conditions only: H contains a cycle and some H - w is a tree, or H is K_{s,t}
/// with t above the threshold. Everything else is unknown.
inline ReducibilityVerdict is_reducible(const BipartitePattern& H) {
    if (!H.is_bipartite()) throw invalid_input("not-bipartite", "reducibility concerns bipartite patterns");
    const auto& g = H.graph();
    ReducibilityVerdict out;
    if (!g.is_forest()) {
        for (int w = 0; w < g.order(); ++w) {
            auto rest = g.without_vertex(w);
            if (rest.connected() && rest.is_forest()) {
                out.verdict = Reducibility::Reducible;
                out.rule = "cycle-plus-tree";
                out.witness = w;
                return out;
            }
        }
    }
    int s = 0, t = 0;
    if (detail::complete_bipartite_sides(g, s, t) && kst_reducibility(s, t).verdict == Reducibility::Reducible) {
        out.verdict = Reducibility::Reducible;
        out.rule = "kst";
    }
    return out;
}

} // namespace nimh
