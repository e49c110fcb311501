#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "enumerate.hpp"
#include "mono_scan.hpp"
#include "turan.hpp"

namespace nimh {

struct SearchLimits {
    int exact_ceiling_two = 9;     // largest n for the exhaustive two-colour search
    int exact_ceiling_multi = 5;   // largest n for the exhaustive k >= 3 search
    std::size_t max_optima = 32;   // optimal colourings retained in a report
};

/// Outcome of an f_k(n, H) search. `best` is the NIM count of every colouring in `colorings`.
struct SearchReport {
    int n = 0;
    int k = 2;
    std::string pattern;
    std::string mode;                      // "exact" | "heuristic"
    long long best = 0;
    std::vector<EdgeColoring> colorings;   // optimal (exact) or best found (heuristic), up to symmetry
    long long optimum_classes = 0;         // exact mode: optimal colourings up to symmetry
    long long nodes = 0;
    std::uint64_t seed = 0;
    long long budget = 0;
    long long steps = 0;
    long long restarts = 0;
    long long seed_state_count = -1;       // NIM count of the construction used as the start state
    std::string seed_state;
};

namespace detail {

// Least colouring data over all vertex relabelings and colour renamings (small n only).
inline std::vector<std::uint8_t> brute_canonical_colouring(const EdgeColoring& c) {
    const int n = c.order(), k = c.colours();
    std::vector<int> perm(static_cast<std::size_t>(n)), sigma(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::uint8_t> best;
    do {
        auto relabelled = c.relabel(perm);
        std::iota(sigma.begin(), sigma.end(), 1);
        do {
            auto candidate = relabelled.recolour(sigma).data();
            if (best.empty() || candidate < best) best = candidate;
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace detail

/// Exact f_k(n, H). k = 2 walks the red class over graphs up to isomorphism; k >= 3 walks
/// colourings in restricted-growth form with a non-decreasing first row.
inline SearchReport f_exact(int n, const BipartitePattern& H, int k, const SearchLimits& limits = {}) {
    if (n < 0) throw invalid_input("vertex-count", "negative vertex count");
    if (k < 2) throw invalid_input("colour-count", "k must be at least 2");
    const int ceiling = k == 2 ? limits.exact_ceiling_two : limits.exact_ceiling_multi;
    if (n > ceiling)
        throw refused("resource-limit", "exact f search with k=" + std::to_string(k) + " is limited to n <= " +
                                            std::to_string(ceiling));
    Matcher matcher(H.graph());
    SearchReport rep;
    rep.n = n;
    rep.k = k;
    rep.pattern = H.name();
    rep.mode = "exact";
    rep.best = -1;

    if (k == 2) {
        // key: the smaller canonical code of {red class, blue class}
        std::set<std::string> optima;
        enumerate_graphs(
            n,
            [&](const SimpleGraph& red) {
                ++rep.nodes;
                auto c = EdgeColoring::from_red_graph(red);
                long long count = nim_edges(c, matcher).total;
                if (count < rep.best) return;
                if (count > rep.best) {
                    rep.best = count;
                    optima.clear();
                }
                auto a = canonical_form(red).code, b = canonical_form(complement(red)).code;
                optima.insert(std::min(a, b));
            },
            {}, ceiling);
        rep.optimum_classes = static_cast<long long>(optima.size());
        for (const auto& code : optima) {
            if (rep.colorings.size() >= limits.max_optima) break;
            rep.colorings.push_back(EdgeColoring::from_red_graph(from_graph6(code)));
        }
        return rep;
    }

    const int m = static_cast<int>(choose2(n));
    std::vector<std::uint8_t> col(static_cast<std::size_t>(m), 1);
    std::vector<EdgeColoring> optima;
    std::function<void(int, int)> assign = [&](int idx, int used) {
        if (idx == m) {
            ++rep.nodes;
            EdgeColoring c(n, k, col);
            long long count = nim_edges(c, matcher).total;
            if (count < rep.best) return;
            if (count > rep.best) {
                rep.best = count;
                optima.clear();
            }
            optima.push_back(std::move(c));
            return;
        }
        const int first_row = n - 1;   // edges (0,1) .. (0,n-1) come first in index order
        int lo = (idx > 0 && idx < first_row) ? col[idx - 1] : 1;
        for (int c = lo; c <= std::min(k, used + 1); ++c) {
            col[idx] = static_cast<std::uint8_t>(c);
            assign(idx + 1, std::max(used, c));
        }
    };
    if (m == 0) {
        rep.best = 0;
        rep.nodes = 1;
        rep.optimum_classes = 1;
        rep.colorings.push_back(EdgeColoring(n, k, {}));
        return rep;
    }
    assign(0, 0);
    std::set<std::vector<std::uint8_t>> classes;
    for (const auto& c : optima) {
        auto key = n <= 6 ? detail::brute_canonical_colouring(c) : c.data();
        if (classes.insert(key).second && rep.colorings.size() < limits.max_optima) rep.colorings.push_back(c);
    }
    rep.optimum_classes = static_cast<long long>(classes.size());
    return rep;
}

/// Seeded steepest-ascent over single-edge recolourings, restarting from a perturbation of the
/// best colouring whenever a local optimum is reached. Starts from the extremal (k = 2) or
/// overlay (k >= 3) construction when the Turan value is exact, otherwise from a random colouring.
/// `budget` counts neighbourhood scans and restarts.
inline SearchReport f_heuristic(int n, const BipartitePattern& H, int k, long long budget, std::uint64_t seed,
                                TuranSolver& solver) {
    if (n < 1) throw invalid_input("vertex-count", "heuristic search needs n >= 1");
    if (k < 2) throw invalid_input("colour-count", "k must be at least 2");
    if (budget < 0) throw invalid_input("bad-budget", "budget must be non-negative");
    Matcher matcher(H.graph());
    std::mt19937_64 rng(seed);

    SearchReport rep;
    rep.n = n;
    rep.k = k;
    rep.pattern = H.name();
    rep.mode = "heuristic";
    rep.seed = seed;
    rep.budget = budget;

    EdgeColoring current;
    auto ex_rec = solver.ex(n, H);
    if (ex_rec.exact && k == 2) {
        current = extremal_two_coloring(n, H, solver);
        rep.seed_state = "extremal";
    } else if (ex_rec.exact) {
        current = permuted_overlay_coloring(n, H, k, seed, 64, solver).first;
        rep.seed_state = "overlay";
    } else {
        std::vector<std::uint8_t> col(static_cast<std::size_t>(choose2(n)));
        for (auto& c : col) c = static_cast<std::uint8_t>(1 + rng() % static_cast<unsigned>(k));
        current = EdgeColoring(n, k, std::move(col));
        rep.seed_state = "random";
    }
    NimReport report = nim_edges(current, matcher);
    rep.seed_state_count = report.total;

    EdgeColoring best = current;
    long long best_count = report.total;
    const int m = static_cast<int>(choose2(n));

    while (rep.steps < budget) {
        ++rep.steps;
        long long move_value = report.total;
        int move_edge = -1, move_colour = 0;
        for (int e = 0; e < m; ++e) {
            const int old = current.at(e);
            for (int c = 1; c <= k; ++c) {
                if (c == old) continue;
                auto saved = report;
                current.set_at(e, c);
                rescan_colours(current, matcher, {old, c}, report);
                if (report.total > move_value) {
                    move_value = report.total;
                    move_edge = e;
                    move_colour = c;
                }
                current.set_at(e, old);
                report = std::move(saved);
            }
        }
        if (move_edge >= 0) {
            const int old = current.at(move_edge);
            current.set_at(move_edge, move_colour);
            rescan_colours(current, matcher, {old, move_colour}, report);
            if (report.total > best_count || (report.total == best_count && current < best)) {
                best_count = report.total;
                best = current;
            }
            continue;
        }
        // local optimum: perturb the best colouring and revalidate from scratch
        ++rep.restarts;
        current = best;
        for (int i = 0; i < std::max(1, n / 2); ++i) {
            int e = static_cast<int>(rng() % static_cast<unsigned>(m));
            current.set_at(e, 1 + static_cast<int>(rng() % static_cast<unsigned>(k)));
        }
        report = nim_edges(current, matcher);
    }
    rep.best = nim_edges(best, matcher).total;
    rep.colorings.push_back(best);
    rep.nodes = rep.steps;
    return rep;
}

/// True iff some colour class of a two-colouring is H-free with exactly ex(n, H) edges.
inline bool verify_extremal_characterization(const EdgeColoring& c, const BipartitePattern& H, TuranSolver& solver) {
    if (c.colours() != 2) throw invalid_input("colour-count", "extremal characterisation concerns two-colourings");
    auto rec = solver.ex(c.order(), H);
    if (!rec.exact) throw refused("non-exact-turan", "ex(n, H) is not known exactly");
    Matcher matcher(H.graph());
    for (int colour = 1; colour <= 2; ++colour) {
        auto cls = c.colour_class(colour);
        if (cls.edge_count() == rec.value && is_h_free(cls, matcher)) return true;
    }
    return false;
}

} // namespace nimh
