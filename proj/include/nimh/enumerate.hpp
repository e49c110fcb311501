#pragma once

#include <functional>
#include <string>
#include <unordered_set>

#include "canon.hpp"

namespace nimh {

/// Selects one of `count` independent sub-streams: graphs are split by the index (in generation
/// order) of their ancestor at `level` vertices. Sub-streams are disjoint and cover the stream.
struct StreamPartition {
    int level = 0;
    int index = 0;
    int count = 1;
};

struct AugmentStep {
    bool accepted = false;
    std::string code;   // canonical graph6 of the child, valid when accepted
};

// Orderly acceptance test: the new vertex must lie in the orbit of the canonical deletion
// vertex (the last-labelled vertex of minimum degree).
inline AugmentStep canonical_child(const SimpleGraph& child, int added) {
    const int n = child.order();
    int min_deg = n;
    for (int v = 0; v < n; ++v) min_deg = std::min(min_deg, child.degree(v));
    if (child.degree(added) != min_deg) return {};
    auto lab = canonical_labeling(child);
    int deletion = -1;
    for (int i = n - 1; i >= 0; --i) {
        if (child.degree(lab.order[i]) == min_deg) {
            deletion = lab.order[i];
            break;
        }
    }
    AugmentStep step{false, to_graph6(lab.graph)};
    if (deletion == added) {
        step.accepted = true;
        return step;
    }
    // orbit under the automorphisms already found, then the exact colour-highlight test
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& perm : lab.automorphisms)
        for (int v = 0; v < n; ++v) parent[find(v)] = find(perm[v]);
    step.accepted = find(added) == find(deletion) || same_orbit(child, added, deletion);
    return step;
}

// Calls f(child) for every neighbourhood of a new vertex that `edge_ok` admits. `edge_ok(g, w, u)`
// is asked after edge wu is added and must be monotone: once false, no superset is admissible.
template <class EdgeOk, class F>
void for_each_extension(const SimpleGraph& parent, EdgeOk&& edge_ok, F&& f) {
    SimpleGraph child = parent.with_vertex(0);
    const int w = parent.order();
    std::function<void(int)> rec = [&](int next) {
        f(static_cast<const SimpleGraph&>(child));
        for (int u = next; u < w; ++u) {
            child.add_edge(w, u);
            if (edge_ok(static_cast<const SimpleGraph&>(child), w, u)) rec(u + 1);
            child.remove_edge(w, u);
        }
    };
    rec(0);
}

struct AlwaysOk {
    bool operator()(const SimpleGraph&, int, int) const { return true; }
};

namespace detail {

template <class EdgeOk, class Visit>
void grow(const SimpleGraph& g, int target, EdgeOk& edge_ok, Visit& visit, const StreamPartition& part,
          long long& level_counter) {
    if (g.order() == target) {
        visit(g);
        return;
    }
    std::unordered_set<std::string> seen;
    for_each_extension(g, edge_ok, [&](const SimpleGraph& child) {
        auto step = canonical_child(child, child.order() - 1);
        if (!step.accepted || !seen.insert(step.code).second) return;
        if (part.count > 1 && child.order() == part.level) {
            if (level_counter++ % part.count != part.index) return;
        }
        grow(child, target, edge_ok, visit, part, level_counter);
    });
}

} // namespace detail

/// One representative per isomorphism class of graphs on n vertices that are reachable through
/// `edge_ok`-admissible vertex additions (all graphs when edge_ok accepts everything; all H-free
/// graphs when it rejects edges that complete a copy of H). Deterministic order.
template <class EdgeOk, class Visit>
void enumerate_hereditary(int n, EdgeOk edge_ok, Visit visit, StreamPartition part = {}) {
    if (n < 0) throw invalid_input("vertex-count", "negative vertex count");
    if (part.count < 1 || part.index < 0 || part.index >= part.count)
        throw invalid_input("bad-partition", "sub-stream index out of range");
    long long counter = 0;
    SimpleGraph empty(0);
    if (part.count > 1 && (part.level <= 0 || n < part.level) && part.index != 0) return;
    detail::grow(empty, n, edge_ok, visit, part, counter);
}

/// Every graph on n vertices up to isomorphism; refuses above `ceiling`.
template <class Visit>
void enumerate_graphs(int n, Visit visit, StreamPartition part = {}, int ceiling = 10) {
    if (n > ceiling)
        throw refused("resource-limit", "graph enumeration above ceiling " + std::to_string(ceiling));
    enumerate_hereditary(n, AlwaysOk{}, std::move(visit), part);
}

inline std::vector<SimpleGraph> all_graphs(int n, int ceiling = 10) {
    std::vector<SimpleGraph> out;
    enumerate_graphs(n, [&](const SimpleGraph& g) { out.push_back(g); }, {}, ceiling);
    return out;
}

} // namespace nimh
