#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "canon.hpp"
#include "graph.hpp"
#include "json.hpp"

namespace nimh {

/// A bipartite graph with a distinguished side: copies must map `left` into the m-part of K_{m,n}.
struct SidedPattern {
    SimpleGraph graph;
    Bits left = 0;

    Bits right() const { return graph.all() & ~left; }
    int left_size() const { return std::popcount(left); }
    int right_size() const { return std::popcount(right()); }

    std::vector<int> side_colours() const {
        std::vector<int> c(static_cast<std::size_t>(graph.order()));
        for (int v = 0; v < graph.order(); ++v) c[v] = (left & bit(v)) ? 0 : 1;
        return c;
    }

    // Orientation-aware isomorphism-class key.
    std::string fingerprint() const {
        auto colours = side_colours();
        return canonical_form(graph, colours).code;
    }
};

/// The forbidden pattern H with bipartition (X, Y) and an optional weak vertex w in X.
/// Non-bipartite patterns (cliques) are admitted for copy detection only: X and Y are empty.
class BipartitePattern {
public:
    static BipartitePattern bipartite(SimpleGraph g, Bits x, Bits y, std::optional<int> weak, std::string name) {
        BipartitePattern p;
        p.graph_ = std::move(g);
        p.x_ = x;
        p.y_ = y;
        p.weak_ = weak;
        p.bipartite_ = true;
        p.name_ = std::move(name);
        p.validate();
        return p;
    }

    static BipartitePattern non_bipartite(SimpleGraph g, std::string name) {
        BipartitePattern p;
        p.graph_ = std::move(g);
        p.bipartite_ = false;
        p.name_ = std::move(name);
        if (p.graph_.order() < 2) throw invalid_input("pattern-too-small", "pattern needs at least 2 vertices");
        if (p.graph_.edge_count() == 0) throw invalid_input("pattern-no-edges", "pattern needs at least one edge");
        return p;
    }

    const SimpleGraph& graph() const noexcept { return graph_; }
    int h() const noexcept { return graph_.order(); }
    bool is_bipartite() const noexcept { return bipartite_; }
    Bits x() const noexcept { return x_; }
    Bits y() const noexcept { return y_; }
    std::optional<int> weak() const noexcept { return weak_; }
    const std::string& name() const noexcept { return name_; }

    // H - w with vertices renumbered in order; (X - w) is the left side.
    SidedPattern reduced() const {
        if (!weak_) throw invalid_input("no-weak-vertex", "pattern " + name_ + " has no weak vertex");
        const int w = *weak_;
        SidedPattern r;
        r.graph = graph_.without_vertex(w);
        for (int v = 0, i = 0; v < h(); ++v) {
            if (v == w) continue;
            if (x_ & bit(v)) r.left |= bit(i);
            ++i;
        }
        return r;
    }

    bool reduced_connected() const { return weak_ && reduced().graph.connected(); }

    // Reduced pattern for orientation-dependent work; a disconnected H - w has no unique bipartition.
    SidedPattern reduced_oriented() const {
        auto r = reduced();
        if (!r.graph.connected())
            throw invalid_input("ambiguous-bipartition",
                                "H - w is disconnected for pattern " + name_ + "; its bipartition is not unique");
        return r;
    }

    std::string fingerprint() const { return canonical_form(graph_).code; }

private:
    void validate() const {
        const int n = graph_.order();
        if (n < 2) throw invalid_input("pattern-too-small", "pattern needs at least 2 vertices");
        if (graph_.edge_count() == 0) throw invalid_input("pattern-no-edges", "pattern needs at least one edge");
        if ((x_ & y_) || ((x_ | y_) != graph_.all()))
            throw invalid_input("not-a-bipartition", "X and Y must partition the vertex set");
        for (auto [u, v] : graph_.edges()) {
            bool ux = x_ & bit(u), vx = x_ & bit(v);
            if (ux == vx) throw invalid_input("not-a-bipartition", "edge inside one side: not a bipartition");
        }
        if (weak_ && (*weak_ < 0 || *weak_ >= n || !(x_ & bit(*weak_))))
            throw invalid_input("invalid-weak-vertex", "weak vertex must belong to X");
    }

    SimpleGraph graph_;
    Bits x_ = 0, y_ = 0;
    std::optional<int> weak_;
    bool bipartite_ = false;
    std::string name_;
};

enum class FamilyTag { Clique, EvenCycle, Theta, CompleteBipartite };

/// Named pattern families. Clique: a = r. EvenCycle: a = l for C_{2l}. Theta: a = k paths of
/// length b. CompleteBipartite: K_{a,b} with a <= b.
struct PatternFamily {
    FamilyTag tag;
    int a = 0;
    int b = 0;
};

inline BipartitePattern build_pattern(const PatternFamily& f) {
    auto bad = [](const std::string& what) { return invalid_input("invalid-parameters", what); };
    switch (f.tag) {
    case FamilyTag::Clique: {
        if (f.a < 3 || f.a > 16) throw bad("clique order must lie in [3, 16]");
        return BipartitePattern::non_bipartite(SimpleGraph::complete(f.a), "k" + std::to_string(f.a));
    }
    case FamilyTag::EvenCycle: {
        if (f.a < 2 || 2 * f.a > 32) throw bad("even cycle C_{2l} needs 2 <= l <= 16");
        const int n = 2 * f.a;
        Bits x = 0;
        for (int v = 0; v < n; v += 2) x |= bit(v);
        return BipartitePattern::bipartite(SimpleGraph::cycle(n), x, low_bits(n) & ~x, 0, "c" + std::to_string(n));
    }
    case FamilyTag::Theta: {
        const int k = f.a, l = f.b;
        if (k < 2 || l < 2) throw bad("theta graph needs k, l >= 2");
        const int n = 2 + k * (l - 1);
        if (n > 32) throw bad("theta graph too large");
        SimpleGraph g(n);
        for (int i = 0; i < k; ++i) {
            int prev = 0;
            for (int j = 0; j < l - 1; ++j) {
                int v = 2 + i * (l - 1) + j;
                g.add_edge(prev, v);
                prev = v;
            }
            g.add_edge(prev, 1);
        }
        auto side = g.two_colouring();
        Bits x = 0;
        for (int v = 0; v < n; ++v)
            if (side[v] == side[2]) x |= bit(v);
        return BipartitePattern::bipartite(std::move(g), x, low_bits(n) & ~x, 2,
                                           "theta" + std::to_string(k) + "," + std::to_string(l));
    }
    case FamilyTag::CompleteBipartite: {
        const int s = f.a, t = f.b;
        if (s < 1 || s > t || s + t > 32) throw bad("K_{s,t} needs 1 <= s <= t and s + t <= 32");
        SimpleGraph g(s + t);
        for (int u = 0; u < s; ++u)
            for (int v = s; v < s + t; ++v) g.add_edge(u, v);
        return BipartitePattern::bipartite(std::move(g), low_bits(s), low_bits(s + t) & ~low_bits(s), 0,
                                           "k" + std::to_string(s) + "," + std::to_string(t));
    }
    }
    throw bad("unknown family");
}

namespace detail {

inline std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<std::pair<int, int>> parse_int_pair(std::string_view s) {
    auto comma = s.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    auto a = parse_int(s.substr(0, comma));
    auto b = parse_int(s.substr(comma + 1));
    if (!a || !b) return std::nullopt;
    return std::make_pair(*a, *b);
}

} // namespace detail

/// Compact family names: "k3", "c4", "c6", "k3,3", "theta2,3".
inline PatternFamily parse_family(std::string_view spec) {
    auto bad = [&] { return invalid_input("bad-pattern-name", "unrecognised pattern name \"" + std::string(spec) + "\""); };
    if (spec.starts_with("theta")) {
        auto kl = detail::parse_int_pair(spec.substr(5));
        if (!kl) throw bad();
        return {FamilyTag::Theta, kl->first, kl->second};
    }
    if (spec.starts_with("c")) {
        auto len = detail::parse_int(spec.substr(1));
        if (!len || *len % 2 != 0) throw bad();
        return {FamilyTag::EvenCycle, *len / 2, 0};
    }
    if (spec.starts_with("k")) {
        auto rest = spec.substr(1);
        if (rest.find(',') != std::string_view::npos) {
            auto st = detail::parse_int_pair(rest);
            if (!st) throw bad();
            return {FamilyTag::CompleteBipartite, st->first, st->second};
        }
        auto r = detail::parse_int(rest);
        if (!r) throw bad();
        return {FamilyTag::Clique, *r, 0};
    }
    throw bad();
}

/// Pattern descriptor document (JSON):
///   {"n": 4, "edges": [[0,1], "12", "2-3", ...], "X": [0,2], "Y": [1,3], "weak": 0}
/// "bipartite": false admits an arbitrary graph (X and Y are then ignored).
inline BipartitePattern parse_pattern(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input("bad-descriptor", std::string("pattern descriptor is not valid JSON: ") + e.what());
    }
    auto field = [&](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key)) throw invalid_input("bad-descriptor", std::string("descriptor lacks field \"") + key + "\"");
        return doc.at(key);
    };
    try {
        const int n = field("n").get<int>();
        if (n < 2 || n > 32) throw invalid_input("bad-descriptor", "pattern order must lie in [2, 32]");
        SimpleGraph g(n);
        for (const auto& e : field("edges")) {
            int u = -1, v = -1;
            if (e.is_array() && e.size() == 2) {
                u = e[0].get<int>();
                v = e[1].get<int>();
            } else if (e.is_string()) {
                auto s = e.get<std::string>();
                auto dash = s.find('-');
                if (dash != std::string::npos) {
                    u = detail::parse_int(std::string_view(s).substr(0, dash)).value_or(-1);
                    v = detail::parse_int(std::string_view(s).substr(dash + 1)).value_or(-1);
                } else if (s.size() == 2 && n <= 10) {
                    u = s[0] - '0';
                    v = s[1] - '0';
                }
            }
            if (u < 0 || v < 0 || u >= n || v >= n || u == v)
                throw invalid_input("bad-descriptor", "malformed edge " + e.dump());
            g.add_edge(u, v);
        }
        std::string name = doc.value("name", std::string("custom"));
        if (!doc.value("bipartite", true)) return BipartitePattern::non_bipartite(std::move(g), name);
        auto side = [&](const char* key) {
            Bits m = 0;
            for (const auto& v : field(key)) {
                int i = v.get<int>();
                if (i < 0 || i >= n) throw invalid_input("bad-descriptor", std::string("vertex out of range in ") + key);
                m |= bit(i);
            }
            return m;
        };
        Bits x = side("X"), y = side("Y");
        std::optional<int> weak;
        if (doc.contains("weak") && !doc.at("weak").is_null()) weak = doc.at("weak").get<int>();
        return BipartitePattern::bipartite(std::move(g), x, y, weak, name);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input("bad-descriptor", std::string("pattern descriptor field has wrong type: ") + e.what());
    }
}

// Accepts either a family name or, when the text starts with '{', a descriptor document.
inline BipartitePattern pattern_from_spec(std::string_view spec) {
    auto first = spec.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && spec[first] == '{') return parse_pattern(spec);
    return build_pattern(parse_family(spec));
}

} // namespace nimh
