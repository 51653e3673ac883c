#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "metrdim/chordal.hpp"
#include "metrdim/generators.hpp"
#include "metrdim/projection.hpp"
#include "metrdim/tl_solver.hpp"
#include "metrdim/tree_decomposition.hpp"

using namespace metrdim;

namespace {

// components of g with the vertices of x removed
std::vector<std::vector<int>> components_without(const Graph& g, const VertexSet& x) {
    std::vector<int> comp(g.n, -1);
    int nc = 0;
    for (int s = 0; s < g.n; ++s) {
        if (comp[s] >= 0 || set_contains(x, s)) continue;
        std::vector<int> q{s};
        comp[s] = nc;
        for (size_t h = 0; h < q.size(); ++h)
            for (int t : g.adj[q[h]])
                if (comp[t] < 0 && !set_contains(x, t)) {
                    comp[t] = nc;
                    q.push_back(t);
                }
        ++nc;
    }
    std::vector<std::vector<int>> out(nc);
    for (int v = 0; v < g.n; ++v)
        if (comp[v] >= 0) out[comp[v]].push_back(v);
    return out;
}

Graph sample_graph(std::mt19937_64& rng) {
    int pick = static_cast<int>(rng() % 3);
    int n = 6 + static_cast<int>(rng() % 5);
    if (pick == 0) return gen(Family::random_tree, n, rng());
    if (pick == 1) return gen(Family::random_chordal, n, rng());
    return gen(Family::random_bounded_degree, n, rng(), 3);
}

}  // namespace

TEST_CASE("path and width bounds match their closed forms") {
    CHECK(alpha(3, 1) == 38);
    CHECK(alpha(2, 1) == 24);
    CHECK(alpha(3, 2) == 98);
    CHECK(width_bound(3, 1) == 3);
    CHECK(width_bound(3, 2) == 6);
    CHECK(width_bound(2, 5) == 2);
    CHECK(locality_radius(3, 1) == 114);
    CHECK(locality_radius(2, 1) == 72);
    CHECK(locality_radius(3, 2) == 490);
}

TEST_CASE("bound helpers reject bad arguments and overflow") {
    CHECK_THROWS_AS(alpha(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(alpha(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(width_bound(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(alpha(10, 30), std::overflow_error);
    CHECK_THROWS_AS(width_bound(10, 25), std::overflow_error);
    CHECK_THROWS_AS(locality_radius(7, 25), std::overflow_error);
}

TEST_CASE("projection splits a set by distance offset") {
    Graph p4 = gen(Family::path, 4);
    auto d = all_pairs_distances(p4);
    OrderedPartition part = project(d, 0, {1, 2}, 1);
    CHECK(part.classes() == std::vector<VertexSet>{{1}, {2}});

    OrderedPartition self = project(d, 0, {0}, 0);
    CHECK(self.classes() == std::vector<VertexSet>{{0}});

    Graph c5 = gen(Family::cycle, 5);
    auto dc = all_pairs_distances(c5);
    OrderedPartition both = project(dc, 0, {2, 3}, 1);
    CHECK(both.classes() == std::vector<VertexSet>{{2, 3}, {}});

    // class 0 is never empty
    for (int v = 0; v < 5; ++v) {
        OrderedPartition p = project(dc, v, {1, 2, 4}, 2);
        CHECK(!p.classes()[0].empty());
    }
}

TEST_CASE("projection rejects sets wider than the depth") {
    Graph p4 = gen(Family::path, 4);
    auto d = all_pairs_distances(p4);
    CHECK_THROWS_AS(project(d, 0, {1, 3}, 1), std::invalid_argument);
    CHECK_THROWS_AS(project(d, 0, {}, 1), std::invalid_argument);
}

TEST_CASE("cover maps a partition across the separator") {
    Graph p4 = gen(Family::path, 4);
    auto d = all_pairs_distances(p4);

    OrderedPartition base = project(d, 0, {1}, 1);
    OrderedPartition img = cover(d, base, {2, 3}, 1);
    CHECK(img.classes() == std::vector<VertexSet>{{2}, {3}});

    // identity case: covering a projection onto its own set gives it back
    OrderedPartition part = project(d, 0, {1, 2}, 1);
    CHECK(cover(d, part, {1, 2}, 1) == part);

    // a single target vertex always lands in class 0
    OrderedPartition one = cover(d, part, {3}, 1);
    CHECK(one.classes() == std::vector<VertexSet>{{3}, {}});

    OrderedPartition empty_part;
    CHECK_THROWS_AS(cover(d, empty_part, {1}, 1), std::invalid_argument);
}

TEST_CASE("empty classes are skipped by the offset minimum") {
    // star with a pendant path: distances from the far end leave gaps
    Graph g = parse_edge_list("n 6\n0 1\n1 2\n2 3\n3 4\n3 5\n");
    auto d = all_pairs_distances(g);
    OrderedPartition p = project(d, 0, {2, 4, 5}, 2);
    CHECK(p.classes() == std::vector<VertexSet>{{2}, {}, {4, 5}});
    // min(0 + d(2,3), 2 + d({4,5},3)) with class 1 contributing nothing
    CHECK(partition_offset(d, p, 3) == 1);
    CHECK(partition_offset(d, p, 0) == 2);
}

TEST_CASE("resolved_across matches the definition on fixed cases") {
    Graph p5 = gen(Family::path, 5);
    auto d = all_pairs_distances(p5);
    OrderedPartition sep = project(d, 0, {2}, 0);
    CHECK(resolved_across(d, sep, 3, 4));
    CHECK_FALSE(resolved_across(d, sep, 1, 3));
}

TEST_CASE("across-separator resolution equals direct distance comparison") {
    std::mt19937_64 rng(20240911);
    int exercised = 0;
    for (int it = 0; it < 150; ++it) {
        Graph g = sample_graph(rng);
        if (!is_connected(g)) continue;
        auto d = all_pairs_distances(g);
        int xs = 1 + static_cast<int>(rng() % 3);
        VertexSet x;
        while (static_cast<int>(x.size()) < xs) set_insert(x, static_cast<int>(rng() % g.n));
        auto comps = components_without(g, x);
        if (comps.size() < 2) continue;
        const auto& a = comps[0];
        std::vector<char> in_a(g.n, 0);
        for (int v : a) in_a[v] = 1;
        int depth = d.diam_of_set(x);
        for (int v : a) {
            OrderedPartition part = project(d, v, x, depth);
            auto offs = partition_offsets(d, part);
            for (int p = 0; p < g.n; ++p) {
                if (in_a[p]) continue;
                for (int q = p + 1; q < g.n; ++q) {
                    if (in_a[q]) continue;
                    ++exercised;
                    CHECK(resolved_across(d, part, p, q) == resolves(d, v, p, q));
                    CHECK(resolved_across(d, part, p, q) == (offs[p] != offs[q]));
                }
            }
        }
    }
    REQUIRE(exercised > 1000);
}

TEST_CASE("covering a projection equals projecting directly") {
    std::mt19937_64 rng(20240912);
    int exercised = 0;
    for (int it = 0; it < 150; ++it) {
        Graph g = sample_graph(rng);
        auto d = all_pairs_distances(g);
        int xs = 1 + static_cast<int>(rng() % 3);
        VertexSet x;
        while (static_cast<int>(x.size()) < xs) set_insert(x, static_cast<int>(rng() % g.n));
        auto comps = components_without(g, x);
        if (comps.size() < 2) continue;
        const auto& a = comps[0];
        std::vector<char> in_a(g.n, 0);
        for (int v : a) in_a[v] = 1;
        VertexSet far_side;
        for (int v = 0; v < g.n; ++v)
            if (!in_a[v]) far_side.push_back(v);
        VertexSet x_prime;
        for (int v : far_side)
            if (rng() & 1) x_prime.push_back(v);
        if (x_prime.empty()) x_prime.push_back(far_side[0]);
        int depth = std::max(d.diam_of_set(x), d.diam_of_set(x_prime));
        for (int v : a) {
            OrderedPartition via = cover(d, project(d, v, x, depth), x_prime, depth);
            CHECK(via == project(d, v, x_prime, depth));
            ++exercised;
        }
    }
    REQUIRE(exercised > 100);
}

TEST_CASE("profile sets stay sorted, deduplicated, and type checked") {
    Graph p5 = gen(Family::path, 5);
    auto d = all_pairs_distances(p5);
    ProfileSet ps({1, 2}, 2);
    OrderedPartition a = project(d, 0, {1, 2}, 2);
    OrderedPartition b = project(d, 4, {1, 2}, 2);
    ps.insert(b);
    ps.insert(a);
    ps.insert(b);
    REQUIRE(ps.size() == 2);
    CHECK(std::is_sorted(ps.items.begin(), ps.items.end()));
    CHECK(ps.contains(a));
    CHECK(ps.contains(b));
    OrderedPartition other = project(d, 0, {3}, 2);
    CHECK_THROWS_AS(ps.insert(other), std::invalid_argument);
}

namespace {

struct RContext {
    Graph g;
    DistanceMatrix d{0};
    NiceTreeDecomposition nice;
    int ell = 1;
};

RContext nice_for(Family family, int n, unsigned long long seed, int root) {
    RContext ctx{gen(family, n, seed), DistanceMatrix{0}, {}, 1};
    ctx.d = all_pairs_distances(ctx.g);
    TreeDecomposition td = heuristic_td(ctx.g);
    ctx.nice = make_nice(ctx.g, td, root);
    ctx.ell = std::max(1, validate_td(ctx.g, ctx.nice.to_td()).length);
    return ctx;
}

std::map<int, ProfileSet> empty_profiles(const RContext& ctx, int i, long long s) {
    std::map<int, ProfileSet> out;
    for (int j : detail::frontier_at(ctx.nice, i, s))
        out.emplace(j, ProfileSet(ctx.nice.nodes[j].bag, ctx.ell));
    return out;
}

}  // namespace

TEST_CASE("far-profile transfer follows the per-kind rules") {
    SECTION("shallow subtree yields an empty mapping") {
        RContext ctx = nice_for(Family::path, 6, 0, 0);
        auto out = build_R(ctx.nice, ctx.d, ctx.nice.root, {}, {}, 1000, ctx.ell);
        CHECK(out.empty());
    }

    SECTION("leaf frontier nodes get empty sets") {
        RContext ctx = nice_for(Family::path, 6, 0, 0);
        bool found = false;
        for (long long s = 2; s <= 6 && !found; ++s)
            for (int i = 0; i < ctx.nice.size() && !found; ++i) {
                for (int j : detail::frontier_at(ctx.nice, i, s - 1))
                    if (ctx.nice.nodes[j].kind == NiceKind::leaf) {
                        auto out = build_R(ctx.nice, ctx.d, i, {}, empty_profiles(ctx, i, s), s,
                                           ctx.ell);
                        REQUIRE(out.count(j) == 1);
                        CHECK(out.at(j).empty());
                        found = true;
                        break;
                    }
            }
        REQUIRE(found);
    }

    SECTION("forgotten solution vertices enter their bag profile") {
        RContext ctx = nice_for(Family::path, 6, 0, 0);
        bool found = false;
        for (long long s = 2; s <= 8 && !found; ++s)
            for (int i = 0; i < ctx.nice.size() && !found; ++i) {
                for (int j : detail::frontier_at(ctx.nice, i, s - 1)) {
                    if (ctx.nice.nodes[j].kind != NiceKind::forget) continue;
                    int v = ctx.nice.nodes[j].vertex;
                    auto out =
                        build_R(ctx.nice, ctx.d, i, {v}, empty_profiles(ctx, i, s), s, ctx.ell);
                    OrderedPartition pv = project(ctx.d, v, ctx.nice.nodes[j].bag, ctx.ell);
                    REQUIRE(out.count(j) == 1);
                    CHECK(out.at(j).contains(pv));
                    // without v in the tracked set the profile stays empty
                    auto bare =
                        build_R(ctx.nice, ctx.d, i, {}, empty_profiles(ctx, i, s), s, ctx.ell);
                    CHECK(bare.at(j).empty());
                    found = true;
                    break;
                }
            }
        REQUIRE(found);
    }

    SECTION("join frontier nodes take the union of their children") {
        bool found = false;
        for (unsigned long long seed = 1; seed <= 6 && !found; ++seed) {
            RContext ctx = nice_for(Family::random_tree, 9, seed, 0);
            for (long long s = 2; s <= 8 && !found; ++s)
                for (int i = 0; i < ctx.nice.size() && !found; ++i) {
                    for (int j : detail::frontier_at(ctx.nice, i, s - 1)) {
                        if (ctx.nice.nodes[j].kind != NiceKind::join) continue;
                        auto profiles = empty_profiles(ctx, i, s);
                        const auto& nd = ctx.nice.nodes[j];
                        OrderedPartition p1 = project(ctx.d, 0, nd.bag, ctx.ell);
                        OrderedPartition p2 = project(ctx.d, ctx.g.n - 1, nd.bag, ctx.ell);
                        profiles.at(nd.left).insert(p1);
                        profiles.at(nd.right).insert(p2);
                        auto out = build_R(ctx.nice, ctx.d, i, {}, profiles, s, ctx.ell);
                        REQUIRE(out.count(j) == 1);
                        CHECK(out.at(j).contains(p1));
                        CHECK(out.at(j).contains(p2));
                        size_t expect = p1 == p2 ? 1 : 2;
                        CHECK(out.at(j).size() == expect);
                        found = true;
                        break;
                    }
                }
        }
        REQUIRE(found);
    }

    SECTION("mismatched profile keys are rejected") {
        RContext ctx = nice_for(Family::path, 6, 0, 0);
        bool found = false;
        for (long long s = 2; s <= 6 && !found; ++s)
            for (int i = 0; i < ctx.nice.size() && !found; ++i) {
                auto far = detail::frontier_at(ctx.nice, i, s);
                if (far.empty()) continue;
                auto profiles = empty_profiles(ctx, i, s);
                profiles.erase(far[0]);
                CHECK_THROWS_AS(build_R(ctx.nice, ctx.d, i, {}, profiles, s, ctx.ell),
                                std::invalid_argument);
                found = true;
            }
        REQUIRE(found);
    }
}
