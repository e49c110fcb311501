#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"

namespace nimh {

/// Byte string naming an isomorphism class: graph6 of the canonical relabeling,
/// followed by the vertex-colour cell sizes when a colouring was supplied.
struct CanonicalCode {
    std::string code;

    friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
};

struct CanonicalLabeling {
    std::vector<int> order;                        // order[i] = vertex placed at canonical position i
    SimpleGraph graph;                             // g relabelled by order
    std::vector<std::vector<int>> automorphisms;   // generators met during the search (not necessarily complete)
    long long leaves = 0;
};

namespace detail {

// Splits cells against every set in `queue` until the partition is equitable.
// Only cell order and neighbour counts drive the splitting, so the result commutes with relabeling.
inline void refine(const SimpleGraph& g, std::vector<Bits>& cells, std::vector<Bits> queue) {
    std::array<Bits, kMaxVertices + 1> bucket{};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Bits splitter = queue[head];
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const Bits cell = cells[c];
            if ((cell & (cell - 1)) == 0) continue;
            int lo = kMaxVertices + 1, hi = -1;
            for_each_bit(cell, [&](int v) {
                int k = std::popcount(g.row(v) & splitter);
                bucket[k] |= bit(v);
                lo = std::min(lo, k);
                hi = std::max(hi, k);
            });
            if (lo == hi) {
                bucket[lo] = 0;
                continue;
            }
            std::vector<Bits> pieces;
            for (int k = lo; k <= hi; ++k) {
                if (bucket[k]) {
                    pieces.push_back(bucket[k]);
                    bucket[k] = 0;
                }
            }
            cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(c));
            cells.insert(cells.begin() + static_cast<std::ptrdiff_t>(c), pieces.begin(), pieces.end());
            queue.insert(queue.end(), pieces.begin(), pieces.end());
            c += pieces.size() - 1;
        }
    }
}

class Canonizer {
public:
    explicit Canonizer(const SimpleGraph& g) : g_(g), n_(g.order()) {}

    CanonicalLabeling run(std::vector<Bits> cells) {
        refine(g_, cells, cells);
        std::vector<int> path;
        search(cells, path);
        CanonicalLabeling out;
        out.order = best_order_;
        std::vector<int> pos(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) pos[best_order_[i]] = i;
        out.graph = g_.relabel(pos);
        out.automorphisms = std::move(autos_);
        out.leaves = leaves_;
        return out;
    }

private:
    std::vector<Bits> certificate(const std::vector<int>& order) const {
        std::vector<int> pos(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) pos[order[i]] = i;
        std::vector<Bits> cert(static_cast<std::size_t>(n_), 0);
        for (int i = 0; i < n_; ++i)
            for_each_bit(g_.row(order[i]), [&](int v) { cert[i] |= bit(pos[v]); });
        return cert;
    }

    void record_automorphism(const std::vector<int>& from, const std::vector<int>& to) {
        std::vector<int> perm(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) perm[from[i]] = to[i];
        autos_.push_back(std::move(perm));
    }

    static int common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
        int k = 0;
        while (k < static_cast<int>(a.size()) && k < static_cast<int>(b.size()) && a[k] == b[k]) ++k;
        return k;
    }

    // Union-find orbits of the group generated by the recorded automorphisms fixing `path` pointwise.
    std::vector<int> stabiliser_orbits(const std::vector<int>& path) const {
        std::vector<int> parent(static_cast<std::size_t>(n_));
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& perm : autos_) {
            bool fixes = std::all_of(path.begin(), path.end(), [&](int v) { return perm[v] == v; });
            if (!fixes) continue;
            for (int v = 0; v < n_; ++v) {
                int a = find(v), b = find(perm[v]);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
        for (int v = 0; v < n_; ++v) parent[v] = find(v);
        return parent;
    }

    // Returns the depth the search should resume at; smaller than the caller's depth means unwind.
    int search(const std::vector<Bits>& cells, std::vector<int>& path) {
        const int depth = static_cast<int>(path.size());
        if (static_cast<int>(cells.size()) == n_) return leaf(cells, path);

        std::size_t target = cells.size();
        int target_size = kMaxVertices + 1;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            int sz = std::popcount(cells[c]);
            if (sz > 1 && sz < target_size) {
                target = c;
                target_size = sz;
            }
        }
        const Bits cell = cells[target];

        std::vector<int> explored;
        std::size_t autos_seen = static_cast<std::size_t>(-1);
        std::vector<int> orbit;
        int result = depth;
        for_each_bit(cell, [&](int v) {
            if (result < depth) return;
            if (!explored.empty()) {
                if (autos_seen != autos_.size()) {
                    orbit = stabiliser_orbits(path);
                    autos_seen = autos_.size();
                }
                bool redundant = std::any_of(explored.begin(), explored.end(), [&](int u) { return orbit[u] == orbit[v]; });
                if (redundant) return;
            }
            std::vector<Bits> child;
            child.reserve(cells.size() + 1);
            child.insert(child.end(), cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(target));
            child.push_back(bit(v));
            child.push_back(cell & ~bit(v));
            child.insert(child.end(), cells.begin() + static_cast<std::ptrdiff_t>(target) + 1, cells.end());
            refine(g_, child, {bit(v)});
            path.push_back(v);
            int r = search(child, path);
            path.pop_back();
            if (r < depth) {
                result = r;
                return;
            }
            explored.push_back(v);
        });
        return result;
    }

    int leaf(const std::vector<Bits>& cells, const std::vector<int>& path) {
        ++leaves_;
        const int depth = static_cast<int>(path.size());
        std::vector<int> order(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) order[i] = std::countr_zero(cells[i]);
        auto cert = certificate(order);
        if (first_order_.empty()) {
            first_order_ = best_order_ = order;
            first_cert_ = best_cert_ = std::move(cert);
            first_path_ = best_path_ = path;
            return depth;
        }
        if (cert == first_cert_) {
            record_automorphism(first_order_, order);
            return common_prefix(path, first_path_);
        }
        if (cert == best_cert_) {
            record_automorphism(best_order_, order);
            return common_prefix(path, best_path_);
        }
        if (cert > best_cert_) {
            best_order_ = order;
            best_cert_ = std::move(cert);
            best_path_ = path;
        }
        return depth;
    }

    const SimpleGraph& g_;
    int n_;
    std::vector<int> first_order_, best_order_, first_path_, best_path_;
    std::vector<Bits> first_cert_, best_cert_;
    std::vector<std::vector<int>> autos_;
    long long leaves_ = 0;
};

inline std::vector<Bits> colour_cells(int n, std::span<const int> colours, std::string* suffix) {
    if (colours.empty()) return n == 0 ? std::vector<Bits>{} : std::vector<Bits>{low_bits(n)};
    if (static_cast<int>(colours.size()) != n)
        throw invalid_input("bad-colouring", "vertex colouring length does not match graph order");
    std::map<int, Bits> by_colour;
    for (int v = 0; v < n; ++v) by_colour[colours[v]] |= bit(v);
    std::vector<Bits> cells;
    for (auto& [c, mask] : by_colour) {
        cells.push_back(mask);
        if (suffix) *suffix += "|" + std::to_string(c) + ":" + std::to_string(std::popcount(mask));
    }
    return cells;
}

} // namespace detail

/// Canonical relabeling by equitable refinement plus individualisation, pruned with the
/// automorphisms found along the way. `colours` (optional) fixes an ordered vertex partition.
inline CanonicalLabeling canonical_labeling(const SimpleGraph& g, std::span<const int> colours = {}) {
    auto cells = detail::colour_cells(g.order(), colours, nullptr);
    if (g.order() == 0) return CanonicalLabeling{{}, g, {}, 1};
    return detail::Canonizer(g).run(std::move(cells));
}

inline CanonicalCode canonical_form(const SimpleGraph& g, std::span<const int> colours = {}) {
    std::string suffix;
    auto cells = detail::colour_cells(g.order(), colours, &suffix);
    if (g.order() == 0) return {to_graph6(g) + suffix};
    auto lab = detail::Canonizer(g).run(std::move(cells));
    return {to_graph6(lab.graph) + suffix};
}

inline bool isomorphic(const SimpleGraph& a, const SimpleGraph& b) {
    if (a.order() != b.order() || a.edge_count() != b.edge_count()) return false;
    return canonical_form(a) == canonical_form(b);
}

// True iff some automorphism of g maps u to v.
inline bool same_orbit(const SimpleGraph& g, int u, int v) {
    if (u == v) return true;
    if (g.degree(u) != g.degree(v)) return false;
    std::vector<int> cu(static_cast<std::size_t>(g.order()), 0), cv(cu);
    cu[u] = 1;
    cv[v] = 1;
    return canonical_form(g, cu) == canonical_form(g, cv);
}

} // namespace nimh
