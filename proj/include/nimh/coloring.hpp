#pragma once

#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "graph.hpp"

namespace nimh {

/// Total colouring of the edges of K_n with colours 1..k, stored in edge-index order.
/// In two-colour contexts 1 is red and 2 is blue.
class EdgeColoring {
public:
    EdgeColoring() = default;

    EdgeColoring(int n, int k, std::vector<std::uint8_t> colours) : n_(n), k_(k), colour_(std::move(colours)) {
        if (n < 0 || n > kMaxVertices) throw invalid_input("vertex-count", "colouring order must lie in [0, 64]");
        if (k < 2 || k > 255) throw invalid_input("colour-count", "colour count must lie in [2, 255]");
        if (static_cast<long long>(colour_.size()) != choose2(n))
            throw invalid_input("bad-coloring", "expected " + std::to_string(choose2(n)) + " edge colours, got " +
                                                    std::to_string(colour_.size()));
        for (auto c : colour_)
            if (c < 1 || c > k) throw invalid_input("bad-coloring", "edge colour out of range 1.." + std::to_string(k));
    }

    static EdgeColoring monochromatic(int n, int k, int c = 1) {
        return EdgeColoring(n, k, std::vector<std::uint8_t>(static_cast<std::size_t>(choose2(n)), static_cast<std::uint8_t>(c)));
    }

    // Red (1) on the edges of g, blue (2) elsewhere.
    static EdgeColoring from_red_graph(const SimpleGraph& red) {
        const int n = red.order();
        std::vector<std::uint8_t> col;
        col.reserve(static_cast<std::size_t>(choose2(n)));
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) col.push_back(red.has_edge(u, v) ? 1 : 2);
        return EdgeColoring(n, 2, std::move(col));
    }

    int order() const noexcept { return n_; }
    int colours() const noexcept { return k_; }
    long long edge_count() const noexcept { return static_cast<long long>(colour_.size()); }

    int at(int index) const { return colour_[static_cast<std::size_t>(index)]; }
    int colour(int u, int v) const { return at(edge_index(n_, u, v)); }
    void set(int u, int v, int c) { set_at(edge_index(n_, u, v), c); }
    void set_at(int index, int c) {
        if (c < 1 || c > k_) throw invalid_input("bad-coloring", "edge colour out of range");
        colour_[static_cast<std::size_t>(index)] = static_cast<std::uint8_t>(c);
    }

    const std::vector<std::uint8_t>& data() const noexcept { return colour_; }

    SimpleGraph colour_class(int c) const {
        SimpleGraph g(n_);
        std::size_t i = 0;
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v, ++i)
                if (colour_[i] == c) g.add_edge(u, v);
        return g;
    }

    // perm[v] is the new label of v.
    EdgeColoring relabel(std::span<const int> perm) const {
        EdgeColoring out(*this);
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v) out.set(perm[u], perm[v], colour(u, v));
        return out;
    }

    // sigma[c - 1] is the new colour of colour c.
    EdgeColoring recolour(std::span<const int> sigma) const {
        EdgeColoring out(*this);
        for (std::size_t i = 0; i < colour_.size(); ++i) out.colour_[i] = static_cast<std::uint8_t>(sigma[colour_[i] - 1]);
        return out;
    }

    friend bool operator==(const EdgeColoring&, const EdgeColoring&) = default;
    friend auto operator<=>(const EdgeColoring& a, const EdgeColoring& b) {
        return std::tie(a.n_, a.k_, a.colour_) <=> std::tie(b.n_, b.k_, b.colour_);
    }

private:
    int n_ = 0;
    int k_ = 2;
    std::vector<std::uint8_t> colour_;
};

// Coloring file: "n k" on the first line, then the C(n,2) colours in edge-index order.
inline std::string to_coloring_text(const EdgeColoring& c) {
    std::string out = std::to_string(c.order()) + " " + std::to_string(c.colours()) + "\n";
    for (std::size_t i = 0; i < c.data().size(); ++i) {
        if (i) out.push_back(' ');
        out += std::to_string(c.data()[i]);
    }
    out.push_back('\n');
    return out;
}

inline EdgeColoring parse_coloring_text(const std::string& text) {
    std::istringstream in(text);
    long long n = -1, k = -1;
    if (!(in >> n >> k)) throw invalid_input("bad-coloring", "coloring header must be \"n k\"");
    if (n < 0 || n > kMaxVertices || k < 2 || k > 255) throw invalid_input("bad-coloring", "coloring header out of range");
    std::vector<std::uint8_t> col;
    col.reserve(static_cast<std::size_t>(choose2(n)));
    long long c = 0;
    while (in >> c) {
        if (c < 1 || c > k) throw invalid_input("bad-coloring", "edge colour out of range 1.." + std::to_string(k));
        col.push_back(static_cast<std::uint8_t>(c));
    }
    if (!in.eof()) throw invalid_input("bad-coloring", "non-numeric token in coloring");
    return EdgeColoring(static_cast<int>(n), static_cast<int>(k), std::move(col));
}

} // namespace nimh
