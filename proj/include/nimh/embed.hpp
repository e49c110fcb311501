#pragma once

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace nimh {

/// Backtracking search for (not necessarily induced) copies of a small pattern graph inside a
/// host, with candidate sets built by intersecting host bit-rows. Supports pinning a pattern arc
/// or vertex to a host edge or vertex, and per-pattern-vertex host restrictions.
class Matcher {
public:
    explicit Matcher(SimpleGraph pattern) : pattern_(std::move(pattern)), h_(pattern_.order()) {
        free_plan_ = make_plan({});
        auto autos = collect_automorphisms();
        automorphism_count_ = static_cast<long long>(autos.size());
        // one representative arc per orbit of Aut(H) on ordered adjacent pairs
        std::vector<std::pair<int, int>> arcs;
        for (int p = 0; p < h_; ++p)
            for_each_bit(pattern_.row(p), [&](int q) { arcs.emplace_back(p, q); });
        std::vector<bool> covered(arcs.size(), false);
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            if (covered[i]) continue;
            arc_reps_.push_back(arcs[i]);
            for (const auto& a : autos) {
                auto img = std::make_pair(a[arcs[i].first], a[arcs[i].second]);
                auto it = std::find(arcs.begin(), arcs.end(), img);
                covered[static_cast<std::size_t>(it - arcs.begin())] = true;
            }
        }
        for (auto [p, q] : arc_reps_) arc_plans_.push_back(make_plan({p, q}));
        for (int p = 0; p < h_; ++p) vertex_plans_.push_back(make_plan({p}));
        automorphisms_ = std::move(autos);
    }

    const SimpleGraph& pattern() const noexcept { return pattern_; }
    const std::vector<std::pair<int, int>>& arc_representatives() const noexcept { return arc_reps_; }
    const std::vector<std::vector<int>>& automorphisms() const noexcept { return automorphisms_; }
    long long automorphism_count() const noexcept { return automorphism_count_; }

    // Any copy of the pattern; `allowed[p]` restricts the image of pattern vertex p.
    bool find_any(const SimpleGraph& host, std::span<const Bits> allowed = {}, std::vector<int>* out = nullptr) const {
        if (h_ > host.order()) return false;
        std::vector<int> img;
        return run(free_plan_, host, img, allowed, out);
    }

    // A copy that uses host edge {a, b}.
    bool find_through_edge(const SimpleGraph& host, int a, int b, std::vector<int>* out = nullptr) const {
        if (!host.has_edge(a, b)) return false;
        for (std::size_t i = 0; i < arc_reps_.size(); ++i) {
            std::vector<int> img{a, b};
            if (run(arc_plans_[i], host, img, {}, out)) return true;
        }
        return false;
    }

    // A copy in which pattern vertex p lands on host vertex x.
    bool find_through_vertex(const SimpleGraph& host, int p, int x, std::span<const Bits> allowed = {},
                             std::vector<int>* out = nullptr) const {
        if (h_ > host.order()) return false;
        std::vector<int> img{x};
        return run(vertex_plans_[static_cast<std::size_t>(p)], host, img, allowed, out);
    }

    // Every embedding (injective, edge-preserving map pattern -> host); f returns true to stop.
    template <class F>
    void for_each_embedding(const SimpleGraph& host, F&& f) const {
        if (h_ > host.order()) return;
        std::vector<int> img;
        run_all(free_plan_, host, img, {}, f);
    }

private:
    struct Plan {
        std::vector<int> order;             // pattern vertices in placement order
        std::vector<std::vector<int>> back; // back[i] = earlier positions adjacent to order[i]
        std::size_t fixed = 0;              // leading positions supplied by the caller
    };

    Plan make_plan(std::vector<int> prefix) const {
        Plan plan;
        plan.fixed = prefix.size();
        plan.order = std::move(prefix);
        std::vector<bool> placed(static_cast<std::size_t>(h_), false);
        for (int p : plan.order) placed[p] = true;
        while (static_cast<int>(plan.order.size()) < h_) {
            int best = -1, best_links = -1, best_deg = -1;
            for (int u = 0; u < h_; ++u) {
                if (placed[u]) continue;
                int links = 0;
                for (int p : plan.order) links += pattern_.has_edge(u, p) ? 1 : 0;
                int deg = pattern_.degree(u);
                if (links > best_links || (links == best_links && deg > best_deg)) {
                    best = u;
                    best_links = links;
                    best_deg = deg;
                }
            }
            placed[best] = true;
            plan.order.push_back(best);
        }
        plan.back.resize(plan.order.size());
        for (std::size_t i = 0; i < plan.order.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (pattern_.has_edge(plan.order[i], plan.order[j])) plan.back[i].push_back(static_cast<int>(j));
        return plan;
    }

    // img holds the images of the plan's fixed prefix on entry.
    bool run(const Plan& plan, const SimpleGraph& host, std::vector<int>& img, std::span<const Bits> allowed,
             std::vector<int>* out) const {
        bool found = false;
        run_all(plan, host, img, allowed, [&](const std::vector<int>& map) {
            if (out) *out = map;
            found = true;
            return true;
        });
        return found;
    }

    template <class F>
    void run_all(const Plan& plan, const SimpleGraph& host, std::vector<int>& img, std::span<const Bits> allowed,
                 F&& f) const {
        Bits used = 0;
        for (std::size_t i = 0; i < img.size(); ++i) {
            int p = plan.order[i], x = img[i];
            if (used & bit(x)) return;
            if (host.degree(x) < pattern_.degree(p)) return;
            if (!allowed.empty() && !(allowed[p] & bit(x))) return;
            for (int j : plan.back[i])
                if (!host.has_edge(x, img[j])) return;
            used |= bit(x);
        }
        img.resize(static_cast<std::size_t>(h_));
        std::vector<int> map(static_cast<std::size_t>(h_));
        bool stop = false;
        extend(plan, host, img, used, allowed, plan.fixed, map, f, stop);
    }

    template <class F>
    void extend(const Plan& plan, const SimpleGraph& host, std::vector<int>& img, Bits used,
                std::span<const Bits> allowed, std::size_t pos, std::vector<int>& map, F& f, bool& stop) const {
        if (pos == plan.order.size()) {
            for (std::size_t i = 0; i < plan.order.size(); ++i) map[plan.order[i]] = img[i];
            stop = f(static_cast<const std::vector<int>&>(map));
            return;
        }
        const int p = plan.order[pos];
        Bits cand = host.all() & ~used;
        if (!allowed.empty()) cand &= allowed[p];
        for (int j : plan.back[pos]) cand &= host.row(img[j]);
        const int need = pattern_.degree(p);
        while (cand && !stop) {
            int x = std::countr_zero(cand);
            cand &= cand - 1;
            if (host.degree(x) < need) continue;
            img[pos] = x;
            extend(plan, host, img, used | bit(x), allowed, pos + 1, map, f, stop);
        }
    }

    std::vector<std::vector<int>> collect_automorphisms() const {
        std::vector<std::vector<int>> autos;
        for_each_embedding(pattern_, [&](const std::vector<int>& m) {
            autos.push_back(m);
            return false;
        });
        return autos;
    }

    SimpleGraph pattern_;
    int h_;
    Plan free_plan_;
    std::vector<std::pair<int, int>> arc_reps_;
    std::vector<Plan> arc_plans_;
    std::vector<Plan> vertex_plans_;
    std::vector<std::vector<int>> automorphisms_;
    long long automorphism_count_ = 0;
};

} // namespace nimh
