#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "coloring.hpp"
#include "embed.hpp"
#include "pattern.hpp"

namespace nimh {

/// Per-edge NIM flags of a colouring (true = the edge lies in no monochromatic copy of H).
struct NimReport {
    std::vector<std::uint8_t> flags;      // by edge index
    std::vector<long long> per_colour;    // per_colour[c - 1]
    long long total = 0;

    bool is_nim(int index) const { return flags[static_cast<std::size_t>(index)] != 0; }
};

// True iff edge {u, v} lies in a copy of H inside its own colour class.
inline bool mono_copy_exists(const EdgeColoring& c, int u, int v, const Matcher& matcher) {
    if (u == v || u < 0 || v < 0 || u >= c.order() || v >= c.order())
        throw invalid_input("bad-edge", "edge endpoints out of range");
    auto cls = c.colour_class(c.colour(u, v));
    return matcher.find_through_edge(cls, u, v);
}

inline bool mono_copy_exists(const EdgeColoring& c, int u, int v, const BipartitePattern& H) {
    return mono_copy_exists(c, u, v, Matcher(H.graph()));
}

namespace detail {

// Recomputes the flags of every edge whose colour is in `colours`; each copy found certifies
// all of its edges at once.
inline void scan_classes(const EdgeColoring& c, const Matcher& matcher, const std::vector<int>& colours,
                         std::vector<std::uint8_t>& flags) {
    const int n = c.order();
    const auto& pattern = matcher.pattern();
    const auto pattern_edges = pattern.edges();
    std::vector<int> image;
    for (int colour : colours) {
        auto cls = c.colour_class(colour);
        std::vector<std::uint8_t> covered(static_cast<std::size_t>(c.edge_count()), 0);
        int idx = 0;
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v, ++idx) {
                if (c.at(idx) != colour) continue;
                if (covered[idx]) {
                    flags[idx] = 0;
                    continue;
                }
                if (matcher.find_through_edge(cls, u, v, &image)) {
                    for (auto [p, q] : pattern_edges) covered[edge_index(n, image[p], image[q])] = 1;
                    flags[idx] = 0;
                } else {
                    flags[idx] = 1;
                }
            }
        }
    }
}

inline void tally(const EdgeColoring& c, NimReport& r) {
    r.per_colour.assign(static_cast<std::size_t>(c.colours()), 0);
    r.total = 0;
    for (std::size_t i = 0; i < r.flags.size(); ++i) {
        if (!r.flags[i]) continue;
        ++r.per_colour[c.data()[i] - 1];
        ++r.total;
    }
}

} // namespace detail

inline NimReport nim_edges(const EdgeColoring& c, const Matcher& matcher) {
    NimReport r;
    r.flags.assign(static_cast<std::size_t>(c.edge_count()), 1);
    std::vector<int> all(static_cast<std::size_t>(c.colours()));
    std::iota(all.begin(), all.end(), 1);
    detail::scan_classes(c, matcher, all, r.flags);
    detail::tally(c, r);
    return r;
}

inline NimReport nim_edges(const EdgeColoring& c, const BipartitePattern& H) { return nim_edges(c, Matcher(H.graph())); }

// Refreshes a report after edges changed colour: only the listed colour classes are rescanned.
inline void rescan_colours(const EdgeColoring& c, const Matcher& matcher, const std::vector<int>& colours,
                           NimReport& r) {
    detail::scan_classes(c, matcher, colours, r.flags);
    detail::tally(c, r);
}

// Graph formed by the NIM edges of one colour.
inline SimpleGraph nim_colour_graph(const EdgeColoring& c, const NimReport& r, int colour) {
    SimpleGraph g(c.order());
    int idx = 0;
    for (int u = 0; u < c.order(); ++u)
        for (int v = u + 1; v < c.order(); ++v, ++idx)
            if (r.flags[idx] && c.at(idx) == colour) g.add_edge(u, v);
    return g;
}

/// Distinct copies (as subgraphs) of H inside one colour class, each given as the vertex
/// injection of its first discovery. Plain lexicographic scan over injective h-tuples with no
/// pinning or bitset candidate sets; kept deliberately naive so it can serve as a test oracle.
inline std::vector<std::vector<int>> enumerate_mono_copies(const EdgeColoring& c, int colour, const BipartitePattern& H,
                                                           std::size_t limit) {
    if (limit < 1) throw invalid_input("bad-limit", "limit must be at least 1");
    const int n = c.order(), h = H.h();
    const auto& pat = H.graph();
    std::vector<std::vector<int>> out;
    std::set<std::vector<int>> seen;
    std::vector<int> image(static_cast<std::size_t>(h), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    auto edge_coloured = [&](int a, int b) { return c.colour(a, b) == colour; };
    std::function<bool(int)> rec = [&](int p) -> bool {
        if (p == h) {
            std::vector<int> key;
            for (auto [a, b] : pat.edges()) key.push_back(edge_index(n, image[a], image[b]));
            std::sort(key.begin(), key.end());
            if (seen.insert(key).second) {
                out.push_back(image);
                if (out.size() >= limit) return true;
            }
            return false;
        }
        for (int x = 0; x < n; ++x) {
            if (used[x]) continue;
            bool ok = true;
            for (int q = 0; q < p && ok; ++q)
                if (pat.has_edge(p, q) && !edge_coloured(x, image[q])) ok = false;
            if (!ok) continue;
            used[x] = true;
            image[p] = x;
            bool stop = rec(p + 1);
            used[x] = false;
            if (stop) return true;
        }
        return false;
    };
    if (h <= n) rec(0);
    return out;
}

} // namespace nimh
