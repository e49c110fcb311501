#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace nimh {

using Bits = std::uint64_t;

inline constexpr int kMaxVertices = 64;

inline constexpr Bits bit(int v) { return Bits{1} << v; }

inline constexpr Bits low_bits(int count) {
    return count >= 64 ? ~Bits{0} : (Bits{1} << count) - 1;
}

template <class F>
inline void for_each_bit(Bits mask, F&& f) {
    while (mask) {
        int v = std::countr_zero(mask);
        mask &= mask - 1;
        f(v);
    }
}

inline constexpr long long choose2(long long n) { return n * (n - 1) / 2; }

// Row-major upper-triangle index of the unordered pair {u, v}.
inline constexpr int edge_index(int n, int u, int v) {
    if (u > v) std::swap(u, v);
    return u * n - u * (u + 1) / 2 + (v - u - 1);
}

// Inverse of edge_index for every pair, in index order.
inline std::vector<std::pair<int, int>> edge_list(int n) {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(choose2(n)));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) out.emplace_back(u, v);
    return out;
}

/// Undirected loop-free graph on vertices 0..n-1 with one bit-row per vertex.
class SimpleGraph {
public:
    SimpleGraph() = default;

    explicit SimpleGraph(int n) : n_(n) {
        if (n < 0 || n > kMaxVertices)
            throw invalid_input("vertex-count", "graph order must lie in [0, 64], got " + std::to_string(n));
        rows_.assign(static_cast<std::size_t>(n), 0);
    }

    SimpleGraph(int n, std::span<const std::pair<int, int>> edges) : SimpleGraph(n) {
        for (auto [u, v] : edges) add_edge(u, v);
    }

    static SimpleGraph complete(int n) {
        SimpleGraph g(n);
        for (int u = 0; u < n; ++u) g.rows_[u] = low_bits(n) & ~bit(u);
        return g;
    }

    static SimpleGraph cycle(int n) {
        SimpleGraph g(n);
        for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
        return g;
    }

    static SimpleGraph path(int n) {
        SimpleGraph g(n);
        for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
        return g;
    }

    int order() const noexcept { return n_; }
    Bits all() const noexcept { return low_bits(n_); }

    Bits row(int u) const { return rows_[u]; }
    std::span<const Bits> rows() const noexcept { return rows_; }

    bool has_edge(int u, int v) const { return (rows_[u] >> v) & 1U; }

    void add_edge(int u, int v) {
        check_pair(u, v);
        rows_[u] |= bit(v);
        rows_[v] |= bit(u);
    }

    void remove_edge(int u, int v) {
        check_pair(u, v);
        rows_[u] &= ~bit(v);
        rows_[v] &= ~bit(u);
    }

    void set_row(int u, Bits neighbours) {
        // caller keeps symmetry; used by generators that fill a whole new vertex
        rows_[u] = neighbours;
    }

    int degree(int u) const { return std::popcount(rows_[u]); }

    int edge_count() const {
        int twice = 0;
        for (Bits r : rows_) twice += std::popcount(r);
        return twice / 2;
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n_; ++u)
            for_each_bit(rows_[u] & ~low_bits(u + 1), [&](int v) { out.emplace_back(u, v); });
        return out;
    }

    // Graph on n+1 vertices: this one plus a vertex joined to `neighbours`.
    SimpleGraph with_vertex(Bits neighbours) const {
        SimpleGraph g(n_ + 1);
        for (int u = 0; u < n_; ++u) g.rows_[u] = rows_[u] | (((neighbours >> u) & 1U) ? bit(n_) : 0);
        g.rows_[n_] = neighbours;
        return g;
    }

    SimpleGraph without_vertex(int w) const {
        SimpleGraph g(n_ - 1);
        for (int u = 0, i = 0; u < n_; ++u) {
            if (u == w) continue;
            g.rows_[i++] = squeeze(rows_[u], w);
        }
        return g;
    }

    SimpleGraph induced(Bits vertices) const {
        std::vector<int> keep;
        for_each_bit(vertices & all(), [&](int v) { keep.push_back(v); });
        SimpleGraph g(static_cast<int>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t j = i + 1; j < keep.size(); ++j)
                if (has_edge(keep[i], keep[j])) g.add_edge(static_cast<int>(i), static_cast<int>(j));
        return g;
    }

    // perm[v] is the new label of vertex v.
    SimpleGraph relabel(std::span<const int> perm) const {
        SimpleGraph g(n_);
        for (int u = 0; u < n_; ++u)
            for_each_bit(rows_[u], [&](int v) { g.rows_[perm[u]] |= bit(perm[v]); });
        return g;
    }

    bool connected() const {
        if (n_ == 0) return true;
        Bits seen = bit(0), frontier = bit(0);
        while (frontier) {
            Bits next = 0;
            for_each_bit(frontier, [&](int v) { next |= rows_[v]; });
            frontier = next & ~seen;
            seen |= next;
        }
        return seen == all();
    }

    // 2-colouring of every component, rooted at its lowest vertex; empty if an odd cycle exists.
    std::vector<int> two_colouring() const {
        std::vector<int> side(static_cast<std::size_t>(n_), -1);
        for (int r = 0; r < n_; ++r) {
            if (side[r] >= 0) continue;
            side[r] = 0;
            std::vector<int> stack{r};
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                bool clash = false;
                for_each_bit(rows_[u], [&](int v) {
                    if (side[v] < 0) {
                        side[v] = 1 - side[u];
                        stack.push_back(v);
                    } else if (side[v] == side[u]) {
                        clash = true;
                    }
                });
                if (clash) return {};
            }
        }
        return side;
    }

    bool is_forest() const {
        // components = n - |E| exactly when acyclic
        int components = 0;
        Bits seen = 0;
        for (int r = 0; r < n_; ++r) {
            if (seen & bit(r)) continue;
            ++components;
            Bits comp = bit(r), frontier = bit(r);
            while (frontier) {
                Bits next = 0;
                for_each_bit(frontier, [&](int v) { next |= rows_[v]; });
                frontier = next & ~comp;
                comp |= next;
            }
            seen |= comp;
        }
        return edge_count() == n_ - components;
    }

    friend bool operator==(const SimpleGraph&, const SimpleGraph&) = default;

private:
    void check_pair(int u, int v) const {
        if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v)
            throw invalid_input("bad-edge", "invalid edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }

    static Bits squeeze(Bits r, int w) {
        Bits lo = r & low_bits(w);
        Bits hi = (w + 1 >= 64) ? 0 : (r >> (w + 1)) << w;
        return lo | hi;
    }

    int n_ = 0;
    std::vector<Bits> rows_;
};

inline SimpleGraph complement(const SimpleGraph& g) {
    SimpleGraph c(g.order());
    for (int u = 0; u < g.order(); ++u) c.set_row(u, ~g.row(u) & g.all() & ~bit(u));
    return c;
}

// graph6: byte n+63 (n<63) or '~' plus 18 bits, then the upper triangle column by column, 6 bits per byte.
inline std::string to_graph6(const SimpleGraph& g) {
    const int n = g.order();
    std::string out;
    if (n < 63) {
        out.push_back(static_cast<char>(n + 63));
    } else {
        out.push_back('~');
        for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
    }
    int acc = 0, used = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            acc = (acc << 1) | (g.has_edge(i, j) ? 1 : 0);
            if (++used == 6) {
                out.push_back(static_cast<char>(acc + 63));
                acc = used = 0;
            }
        }
    }
    if (used > 0) out.push_back(static_cast<char>((acc << (6 - used)) + 63));
    return out;
}

inline SimpleGraph from_graph6(std::string_view s) {
    auto fail = [&](const std::string& why) { return invalid_input("bad-graph6", "graph6 \"" + std::string(s) + "\": " + why); };
    if (!s.empty() && s.back() == '\n') s.remove_suffix(1);
    if (s.starts_with(">>graph6<<")) s.remove_prefix(10);
    if (s.empty()) throw fail("empty");
    for (char ch : s)
        if (ch < 63 || ch > 126) throw fail("character out of range");
    std::size_t pos = 0;
    int n = 0;
    if (s[0] != '~') {
        n = s[0] - 63;
        pos = 1;
    } else {
        if (s.size() < 4 || s[1] == '~') throw fail("unsupported size header");
        n = ((s[1] - 63) << 12) | ((s[2] - 63) << 6) | (s[3] - 63);
        pos = 4;
    }
    if (n > kMaxVertices) throw fail("more than 64 vertices");
    const long long bits = choose2(n);
    const std::size_t need = static_cast<std::size_t>((bits + 5) / 6);
    if (s.size() - pos != need) throw fail("length does not match vertex count");
    SimpleGraph g(n);
    long long k = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++k) {
            int byte = s[pos + static_cast<std::size_t>(k / 6)] - 63;
            if ((byte >> (5 - k % 6)) & 1) g.add_edge(i, j);
        }
    }
    // padding bits must be zero
    if (bits % 6 != 0) {
        int last = s.back() - 63;
        if (last & static_cast<int>(low_bits(static_cast<int>(6 - bits % 6)))) throw fail("non-zero padding");
    }
    return g;
}

} // namespace nimh
