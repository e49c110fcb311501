#include <random>

#include <gtest/gtest.h>

#include "nimh/audit.hpp"
#include "nimh/constructions.hpp"
#include "nimh/report.hpp"
#include "oracle.hpp"

using namespace nimh;

namespace {

TuranSolver& audit_solver() {
    static TuranSolver solver([] {
        TuranLimits l;
        l.ex_ceiling = 40;   // only sparse patterns reach large n here
        l.exstar_ceiling = 30;
        return l;
    }());
    return solver;
}

Error error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    return Error(Status::Ok, "", "");
}

// Random two-colouring of random red density with one vertex that has a single blue edge,
// which is then NIM for C4.
EdgeColoring planted_two_colouring(int n, std::mt19937_64& rng) {
    const unsigned red = static_cast<unsigned>(rng() % 100);
    std::vector<std::uint8_t> col(static_cast<std::size_t>(choose2(n)));
    for (auto& x : col) x = rng() % 100 < red ? 1 : 2;
    EdgeColoring c(n, 2, std::move(col));
    int z = static_cast<int>(rng() % n), keep = (z + 1) % n;
    for (int v = 0; v < n; ++v)
        if (v != z) c.set(z, v, v == keep ? 2 : 1);
    return c;
}

} // namespace

TEST(StarDecomposition, FivecycleStarHasThreeVertices) {
    auto K3 = build_pattern(parse_family("k3"));
    auto c = EdgeColoring::from_red_graph(SimpleGraph::cycle(5));
    auto d = build_star_decomposition(c, K3);
    ASSERT_EQ(d.stars.size(), 2u);
    EXPECT_EQ(d.stars[0].leaves.size() + 1, 3u);
    EXPECT_FALSE(d.stars[0].full);
    EXPECT_EQ(d.stars[0].centre, 0);
}

TEST(StarDecomposition, FullStarHasHPlusOneVertices) {
    auto C4 = build_pattern(parse_family("c4"));
    auto c = EdgeColoring::monochromatic(6, 2, 1);
    // vertex 5 keeps a single red edge, so that edge is NIM
    for (int v = 0; v < 5; ++v) c.set(5, v, v == 0 ? 1 : 2);
    auto r = nim_edges(c, C4);
    ASSERT_TRUE(r.is_nim(edge_index(6, 0, 5)));
    auto d = build_star_decomposition(c, C4, r, {1});
    ASSERT_EQ(d.stars.size(), 1u);
    EXPECT_TRUE(d.stars[0].full);
    EXPECT_EQ(d.stars[0].leaves.size() + 1, static_cast<std::size_t>(C4.h() + 1));
    EXPECT_EQ(d.stars[0].centre, 0);
    EXPECT_EQ(d.stars[0].nim_partner, 5);
}

TEST(StarDecomposition, BundlesAreMonochromatic) {
    std::mt19937_64 rng(4);
    auto C4 = build_pattern(parse_family("c4"));
    for (int rep = 0; rep < 30; ++rep) {
        auto c = planted_two_colouring(12 + static_cast<int>(rng() % 10), rng);
        auto r = nim_edges(c, C4);
        if (!r.per_colour[0] || !r.per_colour[1]) continue;
        auto d = build_star_decomposition(c, C4, r, {1, 2});
        EXPECT_LE(d.t(), 2 * C4.h() + 2);
        for (const auto& vc : d.classes)
            for (std::size_t j = 0; j < d.S.size(); ++j)
                for (int z : vc.members) EXPECT_EQ(c.colour(z, d.S[j]), vc.key[j]);
    }
}

TEST(Audit2, FivecycleSplitPasses) {
    auto C4 = build_pattern(parse_family("c4"));
    auto c = EdgeColoring::from_red_graph(SimpleGraph::cycle(5));
    auto rep = audit_two_color(c, C4, audit_solver());
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.nim_total, 10);
    for (const char* claim : {"T", "STAR", "BUNDLE", "PARTITION", "C1", "C2", "C3", "ACCOUNT", "TOTAL", "NIM-FREE"})
        EXPECT_NE(rep.find(claim), nullptr) << claim;
}

TEST(Audit2, SingleColourNimSetIsNotApplicable) {
    auto C4 = build_pattern(parse_family("c4"));
    auto c = extremal_two_coloring(8, C4, audit_solver());
    auto e = error_of([&] { audit_two_color(c, C4, audit_solver()); });
    EXPECT_EQ(e.status(), Status::NotApplicable);
    EXPECT_EQ(e.reason(), "single-color-nim-set");
}

TEST(Audit2, RejectsNonBipartiteAndRefusesInexactBounds) {
    auto K3 = build_pattern(parse_family("k3"));
    auto c = EdgeColoring::from_red_graph(SimpleGraph::cycle(5));
    EXPECT_EQ(error_of([&] { audit_two_color(c, K3, audit_solver()); }).status(), Status::InvalidInput);

    TuranLimits tight;
    tight.ex_ceiling = 2;
    TuranSolver weak_solver(tight);
    std::mt19937_64 rng(9);
    auto C4 = build_pattern(parse_family("c4"));
    for (int rep = 0; rep < 20; ++rep) {
        auto d = planted_two_colouring(14, rng);
        auto r = nim_edges(d, C4);
        if (!r.per_colour[0] || !r.per_colour[1]) continue;
        auto e = error_of([&] { audit_two_color(d, C4, weak_solver); });
        EXPECT_EQ(e.status(), Status::Refused);
        EXPECT_EQ(e.reason(), "non-exact-turan");
        return;
    }
    FAIL() << "no applicable colouring generated";
}

TEST(Audit2, RandomColouringsPassAndVerdictsRecompute) {
    std::mt19937_64 rng(12);
    auto C4 = build_pattern(parse_family("c4"));
    int audited = 0;
    for (int rep = 0; rep < 120 && audited < 40; ++rep) {
        auto c = planted_two_colouring(8 + static_cast<int>(rng() % 16), rng);
        auto r = nim_edges(c, C4);
        if (!r.per_colour[0] || !r.per_colour[1]) continue;
        auto a = audit_two_color(c, C4, audit_solver());
        ++audited;
        EXPECT_TRUE(a.pass) << to_json(a).dump();
        // the class table and NIM flags alone determine the class-local counts
        long long inside = 0;
        for (const auto& vc : a.decomposition.classes)
            for (std::size_t i = 0; i < vc.members.size(); ++i)
                for (std::size_t j = i + 1; j < vc.members.size(); ++j)
                    inside += r.is_nim(edge_index(c.order(), vc.members[i], vc.members[j]));
        EXPECT_LE(inside, r.total);
        EXPECT_EQ(a.find("SPLIT")->measured, r.total);
    }
    EXPECT_GE(audited, 20);
}

TEST(AuditK, RandomThreeColouringsPass) {
    std::mt19937_64 rng(13);
    auto C4 = build_pattern(parse_family("c4"));
    int audited = 0;
    for (int rep = 0; rep < 80; ++rep) {
        int n = 10 + static_cast<int>(rng() % 10);
        auto c = oracle::random_coloring(n, 3, rng);
        for (int i = 1; i <= 3; ++i) {
            int z = (3 * i + rep) % n, keep = (z + 1 + static_cast<int>(rng() % (n - 1))) % n;
            for (int v = 0; v < n; ++v)
                if (v != z) c.set(z, v, v == keep ? i : 1 + i % 3);
        }
        try {
            auto a = audit_k_color(c, C4, audit_solver());
            ++audited;
            EXPECT_TRUE(a.pass) << to_json(a).dump();
            long long types = 0;
            for (const auto& [name, count] : a.type_counts) types += count;
            EXPECT_EQ(types, a.nim_total);
            EXPECT_LE(a.decomposition.t(), 3 * (C4.h() + 1));
        } catch (const Error& e) {
            EXPECT_EQ(e.status(), Status::NotApplicable) << e.what();
        }
    }
    EXPECT_GE(audited, 20);
}

TEST(AuditK, MissingColourIsNotApplicable) {
    auto C4 = build_pattern(parse_family("c4"));
    auto c = EdgeColoring::monochromatic(8, 3, 3);
    auto e = error_of([&] { audit_k_color(c, C4, audit_solver()); });
    EXPECT_EQ(e.status(), Status::NotApplicable);
}

TEST(AuditK, ConstantClassHasSingleFeasibleColour) {
    VertexClass vc;
    vc.key = {3, 3, 3};
    vc.feasible = {3};
    EXPECT_TRUE(vc.constant());
    EXPECT_TRUE(vc.feasible_for(3));
    EXPECT_FALSE(vc.feasible_for(1));
}

TEST(Reducibility, CompleteBipartiteRule) {
    EXPECT_EQ(kst_reducibility(3, 3).verdict, Reducibility::Reducible);
    EXPECT_TRUE(kst_reducibility(3, 3).special_pair);
    EXPECT_EQ(kst_reducibility(4, 7).verdict, Reducibility::Reducible);
    EXPECT_TRUE(kst_reducibility(4, 7).special_pair);
    EXPECT_EQ(kst_reducibility(2, 2).verdict, Reducibility::Reducible);
    EXPECT_EQ(kst_reducibility(4, 5).verdict, Reducibility::Unknown);
    EXPECT_EQ(kst_reducibility(4, 6).verdict, Reducibility::Unknown);
    EXPECT_EQ(kst_reducibility(5, 14).verdict, Reducibility::Reducible);
    EXPECT_EQ(kst_reducibility(5, 13).verdict, Reducibility::Unknown);
    EXPECT_EQ(kst_reducibility(5, 14).threshold, 13);
    EXPECT_EQ(error_of([] { kst_reducibility(3, 2); }).status(), Status::InvalidInput);
    EXPECT_EQ(error_of([] { kst_reducibility(0, 2); }).status(), Status::InvalidInput);
}

TEST(Reducibility, MonotoneInT) {
    for (int s = 1; s <= 8; ++s) {
        bool seen = false;
        for (int t = s; t <= 60; ++t) {
            bool r = kst_reducibility(s, t).verdict == Reducibility::Reducible;
            EXPECT_TRUE(r || !seen) << s << "," << t;
            seen = seen || r;
        }
    }
}

TEST(Reducibility, PatternVerdicts) {
    for (const char* name : {"c4", "c6", "c8", "theta2,3", "k2,2", "k3,3"})
        EXPECT_EQ(is_reducible(build_pattern(parse_family(name))).verdict, Reducibility::Reducible) << name;
    EXPECT_EQ(is_reducible(build_pattern(parse_family("k4,5"))).verdict, Reducibility::Unknown);
    EXPECT_EQ(is_reducible(build_pattern(parse_family("k3,3"))).rule, "kst");
    EXPECT_EQ(is_reducible(build_pattern(parse_family("c6"))).rule, "cycle-plus-tree");
    EXPECT_EQ(error_of([] { is_reducible(build_pattern(parse_family("k3"))); }).status(), Status::InvalidInput);
}
