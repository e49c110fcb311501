#pragma once

#include <bit>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "coloring.hpp"
#include "turan.hpp"

namespace nimh {

namespace detail {

inline TuranRecord require_exact_ex(TuranSolver& solver, int n, const BipartitePattern& H) {
    auto rec = solver.ex(n, H);
    if (!rec.exact)
        throw refused("non-exact-turan", "ex(" + std::to_string(n) + ", " + H.name() + ") is not known exactly");
    return rec;
}

} // namespace detail

/// Red class = the lexicographically least canonical extremal graph for ex(n, H); blue = the rest.
inline EdgeColoring extremal_two_coloring(int n, const BipartitePattern& H, TuranSolver& solver) {
    auto rec = detail::require_exact_ex(solver, n, H);
    return EdgeColoring::from_red_graph(rec.witnesses.front());
}

struct Overlap {
    int i = 0;
    int j = 0;
    long long size = 0;
};

/// Evidence for the permuted-overlay colouring: the permutations used, their pairwise edge
/// overlaps and the expectation bound ceil(C(k-1,2) * ex^2 / C(n,2)) they were tested against.
struct OverlayCertificate {
    std::vector<std::vector<int>> permutations;   // permutations[i][v] = image of v under pi_{i+1}
    std::vector<Overlap> overlaps;                // 1-based colour pairs i < j
    long long overlap_total = 0;
    long long union_size = 0;
    long long ex_value = 0;
    long long expectation_bound = 0;
    int attempts = 0;
    bool bound_met = false;
};

namespace detail {

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[rng() % i]);
    return p;
}

inline long long ceil_div(long long a, long long b) { return b <= 0 ? 0 : (a + b - 1) / b; }

} // namespace detail

/// k-1 seeded random relabelings of one extremal graph G; colour i takes the edges of the i-th
/// copy not already claimed by an earlier copy, colour k takes everything else. Permutation
/// tuples are redrawn until the total pairwise overlap is at most the expectation bound, at most
/// retry_cap times; the best tuple seen is kept either way.
inline std::pair<EdgeColoring, OverlayCertificate> permuted_overlay_coloring(int n, const BipartitePattern& H, int k,
                                                                             std::uint64_t seed, int retry_cap,
                                                                             TuranSolver& solver) {
    if (k < 2) throw invalid_input("colour-count", "overlay colouring needs k >= 2");
    if (retry_cap < 1) throw invalid_input("bad-retry-cap", "retry_cap must be at least 1");
    auto rec = detail::require_exact_ex(solver, n, H);
    const SimpleGraph& base = rec.witnesses.front();
    const long long ex = rec.value;

    OverlayCertificate cert;
    cert.ex_value = ex;
    cert.expectation_bound = detail::ceil_div(choose2(k - 1) * ex * ex, choose2(n));

    std::mt19937_64 rng(seed);
    std::vector<SimpleGraph> best_copies;
    long long best_total = -1;
    for (int attempt = 1; attempt <= retry_cap; ++attempt) {
        std::vector<std::vector<int>> perms;
        std::vector<SimpleGraph> copies;
        for (int i = 0; i < k - 1; ++i) {
            perms.push_back(detail::random_permutation(n, rng));
            copies.push_back(base.relabel(perms.back()));
        }
        std::vector<Overlap> overlaps;
        long long total = 0;
        for (int i = 0; i < k - 1; ++i) {
            for (int j = i + 1; j < k - 1; ++j) {
                long long common = 0;
                for (int u = 0; u < n; ++u) common += std::popcount(copies[i].row(u) & copies[j].row(u));
                overlaps.push_back({i + 1, j + 1, common / 2});
                total += common / 2;
            }
        }
        cert.attempts = attempt;
        if (best_total < 0 || total < best_total) {
            best_total = total;
            best_copies = copies;
            cert.permutations = perms;
            cert.overlaps = overlaps;
            cert.overlap_total = total;
        }
        if (total <= cert.expectation_bound) break;
    }
    cert.bound_met = cert.overlap_total <= cert.expectation_bound;

    std::vector<std::uint8_t> col;
    col.reserve(static_cast<std::size_t>(choose2(n)));
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            int c = k;
            for (int i = 0; i < k - 1; ++i) {
                if (best_copies[i].has_edge(u, v)) {
                    c = i + 1;
                    break;
                }
            }
            if (c < k) ++cert.union_size;
            col.push_back(static_cast<std::uint8_t>(c));
        }
    }
    return {EdgeColoring(n, k, std::move(col)), std::move(cert)};
}

// Part of vertex v when n vertices are split into five consecutive blocks, the first n mod 5
// blocks one larger than the rest.
inline int pentagon_part(int n, int v) {
    const int small = n / 5, extra = n % 5;
    const int big_span = extra * (small + 1);
    return v < big_span ? v / (small + 1) : extra + (v - big_span) / small;
}

/// Blow-up of the pentagon: red between consecutive parts, blue between parts two apart, green
/// inside parts.
inline EdgeColoring pentagon_three_coloring(int n) {
    if (n < 5) throw invalid_input("vertex-count", "pentagon colouring needs n >= 5");
    std::vector<std::uint8_t> col;
    col.reserve(static_cast<std::size_t>(choose2(n)));
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            int d = ((pentagon_part(n, v) - pentagon_part(n, u)) % 5 + 5) % 5;
            col.push_back(d == 0 ? 3 : (d == 1 || d == 4) ? 1 : 2);
        }
    }
    return EdgeColoring(n, 3, std::move(col));
}

} // namespace nimh
