#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "embed.hpp"
#include "enumerate.hpp"
#include "pattern.hpp"

namespace nimh {

struct TuranLimits {
    int ex_ceiling = 10;          // largest n for ex(n, H) by exhaustive search
    int exstar_ceiling = 10;      // largest part size for ex*(m, n, H)
    long long node_budget = 400'000'000;
    int fallback_trials = 64;     // greedy restarts for the lower bound returned above the ceiling
};

/// An exact (or, above the ceiling, lower-bound) Turan-type value with extremal witnesses.
/// kind "ex": n vertices, witnesses are H-free graphs on n vertices (all of them up to
/// isomorphism, in canonical form, sorted by graph6).
/// kind "exstar": host K_{m,n} with the m-part on vertices 0..m-1; one witness.
struct TuranRecord {
    std::string kind;
    std::string fingerprint;
    int m = 0;
    int n = 0;
    long long value = 0;
    std::vector<SimpleGraph> witnesses;
    bool exact = false;

    friend bool operator==(const TuranRecord&, const TuranRecord&) = default;
};

inline bool is_h_free(const SimpleGraph& g, const Matcher& matcher) { return !matcher.find_any(g); }
inline bool is_h_free(const SimpleGraph& g, const BipartitePattern& H) { return is_h_free(g, Matcher(H.graph())); }

namespace detail {

class BudgetExceeded {};

inline SidedPattern sided_from_fingerprint(const std::string& fp) {
    auto bar = fp.find('|');
    if (bar == std::string::npos) throw invalid_input("bad-fingerprint", "sided fingerprint lacks colour cells");
    SidedPattern p;
    p.graph = from_graph6(fp.substr(0, bar));
    // cells are "|0:a|1:b"; colour 0 marks the left side and occupies the first a canonical positions
    std::istringstream cells(fp.substr(bar));
    std::string cell;
    int offset = 0;
    while (std::getline(cells, cell, '|')) {
        if (cell.empty()) continue;
        auto colon = cell.find(':');
        int colour = std::stoi(cell.substr(0, colon));
        int size = std::stoi(cell.substr(colon + 1));
        if (colour == 0) p.left |= low_bits(offset + size) & ~low_bits(offset);
        offset += size;
    }
    if (offset != p.graph.order()) throw invalid_input("bad-fingerprint", "colour cells do not cover the pattern");
    return p;
}

inline std::vector<Bits> side_masks(const SidedPattern& p, int m, int n) {
    std::vector<Bits> allowed(static_cast<std::size_t>(p.graph.order()));
    const Bits left_host = low_bits(m), right_host = low_bits(m + n) & ~low_bits(m);
    for (int v = 0; v < p.graph.order(); ++v) allowed[v] = (p.left & bit(v)) ? left_host : right_host;
    return allowed;
}

// A copy of the oriented pattern that uses host vertex x of the m-part.
inline bool oriented_copy_through(const Matcher& matcher, const SidedPattern& p, const SimpleGraph& host,
                                  std::span<const Bits> allowed, int x) {
    bool hit = false;
    for_each_bit(p.left, [&](int q) {
        if (!hit && matcher.find_through_vertex(host, q, x, allowed)) hit = true;
    });
    return hit;
}

inline bool valid_bipartite_host(const SimpleGraph& g, int m) {
    const Bits left = low_bits(m), right = g.all() & ~left;
    for (int v = 0; v < g.order(); ++v) {
        Bits same = (left & bit(v)) ? left : right;
        if (g.row(v) & same) return false;
    }
    return true;
}

} // namespace detail

/// ex(n, H) by isomorph-free generation of H-free graphs; all extremal graphs are returned.
/// Above `limits.ex_ceiling` (or when the node budget runs out) a greedy lower bound is
/// returned with exact = false.
inline TuranRecord ex_exact(int n, const SimpleGraph& pattern, const TuranLimits& limits = {}) {
    if (n < 0) throw invalid_input("vertex-count", "negative vertex count");
    Matcher matcher(pattern);
    TuranRecord rec;
    rec.kind = "ex";
    rec.fingerprint = canonical_form(pattern).code;
    rec.n = n;

    if (n < pattern.order()) {
        rec.value = choose2(n);
        rec.witnesses.push_back(SimpleGraph::complete(n));
        rec.exact = true;
        return rec;
    }

    auto edge_ok = [&](const SimpleGraph& g, int w, int u) { return !matcher.find_through_edge(g, w, u); };

    if (n <= limits.ex_ceiling) {
        long long nodes = 0;
        long long best = -1;
        std::set<std::string> maximisers;
        try {
            std::function<void(const SimpleGraph&)> grow = [&](const SimpleGraph& g) {
                if (++nodes > limits.node_budget) throw detail::BudgetExceeded{};
                if (g.order() == n - 1) {
                    if (g.edge_count() + (n - 1) < best) return;
                    for_each_extension(g, edge_ok, [&](const SimpleGraph& child) {
                        if (++nodes > limits.node_budget) throw detail::BudgetExceeded{};
                        long long e = child.edge_count();
                        if (e < best) return;
                        if (e > best) {
                            best = e;
                            maximisers.clear();
                        }
                        maximisers.insert(canonical_form(child).code);
                    });
                    return;
                }
                std::unordered_set<std::string> seen;
                for_each_extension(g, edge_ok, [&](const SimpleGraph& child) {
                    auto step = canonical_child(child, child.order() - 1);
                    if (!step.accepted || !seen.insert(step.code).second) return;
                    grow(child);
                });
            };
            grow(SimpleGraph(0));
            rec.value = best;
            for (const auto& code : maximisers) rec.witnesses.push_back(from_graph6(code));
            rec.exact = true;
            return rec;
        } catch (const detail::BudgetExceeded&) {
            rec.witnesses.clear();
        }
    }

    // greedy maximal H-free graphs from seeded random edge orders
    std::mt19937_64 rng(0x5eed0000ULL + static_cast<unsigned>(n));
    auto order = edge_list(n);
    SimpleGraph best_graph(n);
    for (int trial = 0; trial < std::max(1, limits.fallback_trials); ++trial) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
        SimpleGraph g(n);
        for (auto [u, v] : order) {
            g.add_edge(u, v);
            if (matcher.find_through_edge(g, u, v)) g.remove_edge(u, v);
        }
        if (g.edge_count() > best_graph.edge_count()) best_graph = g;
    }
    rec.value = best_graph.edge_count();
    rec.witnesses = {canonical_labeling(best_graph).graph};
    rec.exact = false;
    return rec;
}

inline TuranRecord ex_exact(int n, const BipartitePattern& H, const TuranLimits& limits = {}) {
    return ex_exact(n, H.graph(), limits);
}

/// ex*(m, n, P): most edges of a spanning subgraph of K_{m,n} with no copy of P whose left side
/// lies in the m-part. Rows of the m-part are chosen in non-increasing (degree, mask) order and
/// the first row is pinned to the top bits, which removes both part symmetries without losing
/// optima; branches that cannot beat the incumbent are cut.
inline TuranRecord ex_star_exact(int m, int n, const SidedPattern& p, const TuranLimits& limits = {}) {
    if (m < 0 || n < 0) throw invalid_input("vertex-count", "negative part size");
    if (m + n > kMaxVertices) throw invalid_input("vertex-count", "m + n must not exceed 64");
    if (!p.graph.connected())
        throw invalid_input("ambiguous-bipartition", "reduced pattern is disconnected; orientation is ambiguous");
    TuranRecord rec;
    rec.kind = "exstar";
    rec.fingerprint = p.fingerprint();
    rec.m = m;
    rec.n = n;

    SimpleGraph host(m + n);
    auto fill_complete = [&] {
        for (int u = 0; u < m; ++u)
            for (int v = m; v < m + n; ++v) host.add_edge(u, v);
    };
    if (p.left_size() > m || p.right_size() > n) {
        fill_complete();
        rec.value = static_cast<long long>(m) * n;
        rec.witnesses.push_back(host);
        rec.exact = true;
        return rec;
    }

    Matcher matcher(p.graph);
    auto allowed = detail::side_masks(p, m, n);
    auto set_row = [&](int r, Bits mask, bool on) {
        for_each_bit(mask, [&](int j) {
            if (on) host.add_edge(r, m + j);
            else host.remove_edge(r, m + j);
        });
    };

    if (m <= limits.exstar_ceiling && n <= limits.exstar_ceiling) {
        long long nodes = 0;
        try {
            // rows that are admissible on their own, by monotone growth over right vertices
            std::vector<Bits> rows;
            std::function<void(Bits, int)> grow_row = [&](Bits mask, int next) {
                if (++nodes > limits.node_budget) throw detail::BudgetExceeded{};
                rows.push_back(mask);
                for (int j = next; j < n; ++j) {
                    set_row(0, mask | bit(j), true);
                    bool bad = detail::oriented_copy_through(matcher, p, host, allowed, 0);
                    set_row(0, mask | bit(j), false);
                    if (!bad) grow_row(mask | bit(j), j + 1);
                }
            };
            grow_row(0, 0);
            std::sort(rows.begin(), rows.end(), [](Bits a, Bits b) {
                int pa = std::popcount(a), pb = std::popcount(b);
                return pa != pb ? pa > pb : a > b;
            });

            long long best = -1;
            std::vector<Bits> chosen(static_cast<std::size_t>(m)), best_rows;
            std::function<void(int, std::size_t, long long)> place = [&](int r, std::size_t from, long long edges) {
                if (++nodes > limits.node_budget) throw detail::BudgetExceeded{};
                if (r == m) {
                    if (edges > best) {
                        best = edges;
                        best_rows = chosen;
                    }
                    return;
                }
                for (std::size_t i = from; i < rows.size(); ++i) {
                    const Bits row = rows[i];
                    const int pc = std::popcount(row);
                    if (best >= 0 && edges + static_cast<long long>(m - r) * pc <= best) break;
                    if (r == 0 && row != (low_bits(pc) << (n - pc))) continue;
                    set_row(r, row, true);
                    bool bad = detail::oriented_copy_through(matcher, p, host, allowed, r);
                    if (!bad) {
                        chosen[r] = row;
                        place(r + 1, i, edges + pc);
                    }
                    set_row(r, row, false);
                }
            };
            place(0, 0, 0);
            for (int r = 0; r < m; ++r) set_row(r, best_rows[r], true);
            rec.value = best;
            rec.witnesses.push_back(host);
            rec.exact = true;
            return rec;
        } catch (const detail::BudgetExceeded&) {
            host = SimpleGraph(m + n);
        }
    }

    std::mt19937_64 rng(0x5eed5eedULL + static_cast<unsigned>(m * 97 + n));
    std::vector<std::pair<int, int>> order;
    for (int u = 0; u < m; ++u)
        for (int v = m; v < m + n; ++v) order.emplace_back(u, v);
    SimpleGraph best_graph(m + n);
    for (int trial = 0; trial < std::max(1, limits.fallback_trials); ++trial) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
        host = SimpleGraph(m + n);
        for (auto [u, v] : order) {
            host.add_edge(u, v);
            if (detail::oriented_copy_through(matcher, p, host, allowed, u)) host.remove_edge(u, v);
        }
        if (host.edge_count() > best_graph.edge_count()) best_graph = host;
    }
    rec.value = best_graph.edge_count();
    rec.witnesses = {best_graph};
    rec.exact = false;
    return rec;
}

// Checks a record against its own claims: witness shape, edge count and freeness.
inline bool revalidate(const TuranRecord& rec) {
    try {
        if (rec.witnesses.empty() || rec.value < 0) return false;
        if (rec.kind == "ex") {
            Matcher matcher(from_graph6(rec.fingerprint));
            for (const auto& w : rec.witnesses)
                if (w.order() != rec.n || w.edge_count() != rec.value || !is_h_free(w, matcher)) return false;
            return true;
        }
        if (rec.kind == "exstar") {
            auto p = detail::sided_from_fingerprint(rec.fingerprint);
            Matcher matcher(p.graph);
            auto allowed = detail::side_masks(p, rec.m, rec.n);
            for (const auto& w : rec.witnesses) {
                if (w.order() != rec.m + rec.n || w.edge_count() != rec.value) return false;
                if (!detail::valid_bipartite_host(w, rec.m)) return false;
                if (p.left_size() <= rec.m && p.right_size() <= rec.n && matcher.find_any(w, allowed)) return false;
            }
            return true;
        }
    } catch (const Error&) {
    }
    return false;
}

inline std::string record_to_line(const TuranRecord& r) {
    std::string line = r.kind + " " + r.fingerprint + " " + std::to_string(r.m) + " " + std::to_string(r.n) + " " +
                       std::to_string(r.value) + " " + (r.exact ? "1" : "0");
    for (const auto& w : r.witnesses) line += " " + to_graph6(w);
    return line;
}

inline std::optional<TuranRecord> record_from_line(const std::string& line) {
    std::istringstream in(line);
    TuranRecord r;
    int exact = -1;
    if (!(in >> r.kind >> r.fingerprint >> r.m >> r.n >> r.value >> exact)) return std::nullopt;
    if (exact != 0 && exact != 1) return std::nullopt;
    r.exact = exact == 1;
    std::string g6;
    try {
        while (in >> g6) r.witnesses.push_back(from_graph6(g6));
    } catch (const Error&) {
        return std::nullopt;
    }
    return r;
}

/// Line-oriented persistent store of exact records. Corrupt or inconsistent lines are skipped
/// with a warning and never trusted. Appends take an advisory lock on the file.
class TuranCache {
public:
    explicit TuranCache(std::filesystem::path path) : path_(std::move(path)) {}

    const std::filesystem::path& path() const noexcept { return path_; }

    std::vector<TuranRecord> load(std::ostream& warn = std::cerr) const {
        std::vector<TuranRecord> out;
        std::ifstream in(path_);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            auto rec = record_from_line(line);
            if (!rec || !rec->exact || !revalidate(*rec)) {
                warn << "warning: " << path_.string() << ":" << lineno << ": discarding invalid cache record\n";
                continue;
            }
            out.push_back(std::move(*rec));
        }
        return out;
    }

    void append(const TuranRecord& rec) const {
        if (!rec.exact) throw invalid_input("non-exact-record", "only exact records are cached");
        if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
        int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
        if (fd < 0) throw refused("cache-io", "cannot open cache file " + path_.string());
        ::flock(fd, LOCK_EX);
        std::string line = record_to_line(rec) + "\n";
        ssize_t written = ::write(fd, line.data(), line.size());
        ::flock(fd, LOCK_UN);
        ::close(fd);
        if (written != static_cast<ssize_t>(line.size())) throw refused("cache-io", "short write to cache file");
    }

private:
    std::filesystem::path path_;
};

// Persists a record and reads it back through the validating loader.
inline std::optional<TuranRecord> cache_roundtrip(const TuranRecord& rec, const std::filesystem::path& path) {
    TuranCache cache(path);
    cache.append(rec);
    std::ostringstream warnings;
    for (auto& r : cache.load(warnings))
        if (r.kind == rec.kind && r.fingerprint == rec.fingerprint && r.m == rec.m && r.n == rec.n) return r;
    return std::nullopt;
}

/// Memoising front end to ex_exact / ex_star_exact, optionally backed by a TuranCache file.
/// Lookups may run concurrently; inserts are serialised.
class TuranSolver {
public:
    explicit TuranSolver(TuranLimits limits = {}, std::optional<std::filesystem::path> cache_path = std::nullopt)
        : limits_(limits) {
        if (cache_path) {
            cache_.emplace(*cache_path);
            for (auto& r : cache_->load()) records_.emplace(key(r.kind, r.fingerprint, r.m, r.n), std::move(r));
        }
    }

    const TuranLimits& limits() const noexcept { return limits_; }

    TuranRecord ex(int n, const SimpleGraph& pattern) {
        auto fp = canonical_form(pattern).code;
        return lookup_or(key("ex", fp, 0, n), [&] { return ex_exact(n, pattern, limits_); });
    }

    TuranRecord ex(int n, const BipartitePattern& H) { return ex(n, H.graph()); }

    TuranRecord ex_star(int m, int n, const SidedPattern& p) {
        return lookup_or(key("exstar", p.fingerprint(), m, n), [&] { return ex_star_exact(m, n, p, limits_); });
    }

    // Exact values only; anything else is a refusal.
    long long ex_value(int n, const SimpleGraph& pattern) {
        auto r = ex(n, pattern);
        if (!r.exact)
            throw refused("non-exact-turan", "ex(" + std::to_string(n) + ", H) is not known exactly within the limits");
        return r.value;
    }

    long long ex_star_value(int m, int n, const SidedPattern& p) {
        auto r = ex_star(m, n, p);
        if (!r.exact)
            throw refused("non-exact-turan", "ex*(" + std::to_string(m) + "," + std::to_string(n) +
                                                 ", H-w) is not known exactly within the limits");
        return r.value;
    }

private:
    static std::string key(const std::string& kind, const std::string& fp, int m, int n) {
        return kind + " " + fp + " " + std::to_string(m) + " " + std::to_string(n);
    }

    template <class Compute>
    TuranRecord lookup_or(const std::string& k, Compute&& compute) {
        {
            std::shared_lock lock(mutex_);
            auto it = records_.find(k);
            if (it != records_.end()) return it->second;
        }
        TuranRecord rec = compute();
        std::unique_lock lock(mutex_);
        auto [it, inserted] = records_.emplace(k, rec);
        if (inserted && rec.exact && cache_) cache_->append(rec);
        return it->second;
    }

    TuranLimits limits_;
    std::optional<TuranCache> cache_;
    std::map<std::string, TuranRecord> records_;
    std::shared_mutex mutex_;
};

} // namespace nimh
