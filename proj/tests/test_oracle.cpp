#include <catch2/catch_amalgamated.hpp>

#include "metrdim/generators.hpp"
#include "metrdim/oracle.hpp"

using namespace metrdim;

TEST_CASE("brute force on known graphs") {
    SECTION("single vertex") {
        auto r = metric_dimension_bruteforce(parse_edge_list("n 1\n"));
        REQUIRE(r.ok());
        REQUIRE(r.md == 1);
        REQUIRE(r.witness == VertexSet{0});
    }
    SECTION("paths have dimension one") {
        for (int n = 2; n <= 8; ++n) {
            auto r = metric_dimension_bruteforce(gen(Family::path, n));
            REQUIRE(r.md == 1);
            REQUIRE(r.witness == VertexSet{0});  // lexicographically least
        }
    }
    SECTION("frozen values") {
        REQUIRE(metric_dimension_bruteforce(gen(Family::cycle, 6)).md == 2);
        REQUIRE(metric_dimension_bruteforce(gen(Family::complete, 4)).md == 3);
        REQUIRE(metric_dimension_bruteforce(gen(Family::petersen, 10)).md == 3);
        REQUIRE(metric_dimension_bruteforce(gen(Family::star, 6)).md == 4);
    }
    SECTION("witness is canonical and valid") {
        Graph g = gen(Family::cycle, 6);
        auto r = metric_dimension_bruteforce(g);
        REQUIRE(r.witness == VertexSet{0, 1});
        REQUIRE(verify_witness(g, r.witness));
    }
    SECTION("budget respected") {
        auto r = metric_dimension_bruteforce(gen(Family::complete, 5), 2);
        REQUIRE(r.budget_exceeded);
        auto r2 = metric_dimension_bruteforce(gen(Family::complete, 5), 4);
        REQUIRE(r2.ok());
        REQUIRE(r2.md == 4);
    }
    SECTION("disconnected input is an error") {
        REQUIRE_THROWS_AS(metric_dimension_bruteforce(parse_edge_list("n 3\n0 1\n")),
                          std::invalid_argument);
    }
}

TEST_CASE("brute force properties") {
    SECTION("supersets of a witness still resolve") {
        for (unsigned long long seed = 0; seed < 10; ++seed) {
            Graph g = gen(Family::random_chordal, 8, seed);
            auto d = all_pairs_distances(g);
            auto r = metric_dimension_bruteforce(g);
            VertexSet w = r.witness;
            for (int v = 0; v < g.n; ++v) {
                VertexSet bigger = w;
                set_insert(bigger, v);
                REQUIRE(is_resolving_set(g, d, bigger));
            }
        }
    }
    SECTION("no smaller set resolves") {
        Graph g = gen(Family::petersen, 10);
        auto d = all_pairs_distances(g);
        auto r = metric_dimension_bruteforce(g);
        REQUIRE(r.md == 3);
        for (int x = 0; x < g.n; ++x)
            for (int y = x + 1; y < g.n; ++y)
                REQUIRE_FALSE(is_resolving_set(g, d, {x, y}));
    }
    SECTION("degree bound holds on solved instances") {
        for (unsigned long long seed = 0; seed < 20; ++seed) {
            Graph g = gen(Family::random_bounded_degree, 9, seed, 4);
            auto r = metric_dimension_bruteforce(g);
            auto st = graph_stats(g);
            REQUIRE(st.max_degree <= (1 << r.md) + r.md - 1);
        }
    }
}

TEST_CASE("tree closed form") {
    SECTION("paths give one") {
        for (int n = 2; n <= 10; ++n) REQUIRE(tree_metric_dimension(gen(Family::path, n)) == 1);
        REQUIRE(tree_metric_dimension(parse_edge_list("n 1\n")) == 1);
    }
    SECTION("stars give leaves minus one") {
        REQUIRE(tree_metric_dimension(gen(Family::star, 6)) == 4);
        REQUIRE(tree_metric_dimension(gen(Family::star, 3)) == 1);
    }
    SECTION("spider with three legs of length two") {
        Graph g = parse_edge_list("0 1\n1 2\n0 3\n3 4\n0 5\n5 6\n");
        REQUIRE(tree_metric_dimension(g) == 2);
    }
    SECTION("matches brute force on random trees") {
        for (unsigned long long seed = 0; seed < 60; ++seed) {
            int n = 2 + static_cast<int>(seed % 9);
            Graph g = gen(Family::random_tree, n, seed);
            REQUIRE(tree_metric_dimension(g) == metric_dimension_bruteforce(g).md);
        }
    }
    SECTION("non-trees are rejected") {
        REQUIRE_THROWS_AS(tree_metric_dimension(gen(Family::cycle, 4)), std::invalid_argument);
        REQUIRE_THROWS_AS(tree_metric_dimension(parse_edge_list("n 4\n0 1\n2 3\n")),
                          std::invalid_argument);
    }
}

TEST_CASE("witness verification") {
    Graph g = gen(Family::cycle, 6);
    REQUIRE(verify_witness(g, {0, 1}));
    REQUIRE_FALSE(verify_witness(g, {0}));
    REQUIRE_FALSE(verify_witness(g, {0, 3}));
    REQUIRE_FALSE(verify_witness(g, {}));
    REQUIRE(verify_witness(g, {1, 0, 1}));  // normalization applied
    REQUIRE(verify_witness(parse_edge_list("n 1\n"), {}));
    REQUIRE_THROWS_AS(verify_witness(g, {0, 99}), std::invalid_argument);
    REQUIRE_THROWS_AS(verify_witness(parse_edge_list("n 3\n0 1\n"), {0}), std::invalid_argument);

    SECTION("agrees with matrix-based check everywhere") {
        std::mt19937_64 rng(42);
        for (int t = 0; t < 50; ++t) {
            Graph g2 = gen(Family::random_bounded_degree, 7, t, 6);
            auto d = all_pairs_distances(g2);
            VertexSet w;
            for (int v = 0; v < g2.n; ++v)
                if (rng() & 1) w.push_back(v);
            if (w.empty()) w.push_back(0);
            REQUIRE(verify_witness(g2, w) == is_resolving_set(g2, d, w));
        }
    }
}
