#include <catch2/catch_amalgamated.hpp>

#include "metrdim/generators.hpp"
#include "metrdim/modular_decomposition.hpp"

using namespace metrdim;

namespace {

// every graph on <= 16 vertices, by edge mask over a fixed vertex count
Graph graph_from_mask(int n, unsigned long long mask) {
    std::vector<std::pair<int, int>> es;
    int bit = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++bit)
            if (mask >> bit & 1ULL) es.emplace_back(u, v);
    return Graph::from_edges(n, es);
}

void check_tree_invariants(const Graph& g, const ModularTree& t) {
    REQUIRE(!t.nodes.empty());
    const ModularNode& root = t.nodes[t.root];
    VertexSet all;
    for (int v = 0; v < g.n; ++v) all.push_back(v);
    REQUIRE(root.vertices == all);
    for (const auto& node : t.nodes) {
        REQUIRE(is_module(g, node.vertices));
        if (node.kind == ModKind::leaf) {
            REQUIRE(node.children.empty());
            REQUIRE(node.vertices == VertexSet{node.vertex});
            continue;
        }
        REQUIRE(node.children.size() >= 2);
        // children partition the node's vertex set and are listed by least vertex
        VertexSet merged;
        int prev_min = -1;
        for (int c : node.children) {
            const auto& cv = t.nodes[c].vertices;
            REQUIRE(cv.front() > prev_min);
            prev_min = cv.front();
            VertexSet overlap = set_intersection(merged, cv);
            REQUIRE(overlap.empty());
            merged = set_union(merged, cv);
        }
        REQUIRE(merged == node.vertices);
        if (node.kind == ModKind::union_node || node.kind == ModKind::join_node) {
            bool want_edge = node.kind == ModKind::join_node;
            for (size_t a = 0; a < node.children.size(); ++a)
                for (size_t b = a + 1; b < node.children.size(); ++b) {
                    int u = t.nodes[node.children[a]].vertices[0];
                    int v = t.nodes[node.children[b]].vertices[0];
                    REQUIRE(g.has_edge(u, v) == want_edge);
                }
        } else {
            REQUIRE(node.kind == ModKind::prime);
            int h = static_cast<int>(node.children.size());
            REQUIRE(node.quotient.n == h);
            REQUIRE(node.quotient.n >= 4);
            // quotient edges mirror the original adjacency between modules
            for (int a = 0; a < h; ++a)
                for (int b = a + 1; b < h; ++b) {
                    int u = t.nodes[node.children[a]].vertices[0];
                    int v = t.nodes[node.children[b]].vertices[0];
                    REQUIRE(node.quotient.has_edge(a, b) == g.has_edge(u, v));
                }
            // the quotient itself has no modules except singletons and everything
            if (h <= 12) {
                for (unsigned long long m = 1; m < (1ULL << h); ++m) {
                    int size = __builtin_popcountll(m);
                    if (size < 2 || size == h) continue;
                    VertexSet mod;
                    for (int i = 0; i < h; ++i)
                        if (m >> i & 1ULL) mod.push_back(i);
                    REQUIRE_FALSE(is_module(node.quotient, mod));
                }
            }
        }
    }
}

}  // namespace

TEST_CASE("module predicate") {
    Graph p4 = gen(Family::path, 4);
    REQUIRE(is_module(p4, {0}));
    REQUIRE(is_module(p4, {0, 1, 2, 3}));
    REQUIRE_FALSE(is_module(p4, {0, 1}));
    REQUIRE_FALSE(is_module(p4, {1, 2}));
    Graph c4 = gen(Family::cycle, 4);
    REQUIRE(is_module(c4, {0, 2}));
    REQUIRE(is_module(c4, {1, 3}));
    REQUIRE_FALSE(is_module(c4, {0, 1}));
}

TEST_CASE("decomposition of fixed graphs") {
    SECTION("single vertex is a leaf") {
        ModularTree t = modular_decompose(parse_edge_list("n 1\n"));
        REQUIRE(t.nodes.size() == 1);
        REQUIRE(t.nodes[t.root].kind == ModKind::leaf);
        REQUIRE(t.modular_width() == 0);
    }
    SECTION("edge is a join of two leaves") {
        ModularTree t = modular_decompose(gen(Family::path, 2));
        REQUIRE(t.nodes[t.root].kind == ModKind::join_node);
        REQUIRE(t.nodes[t.root].children.size() == 2);
        REQUIRE(t.modular_width() == 0);
    }
    SECTION("complete graph is one join of singletons") {
        ModularTree t = modular_decompose(gen(Family::complete, 5));
        REQUIRE(t.nodes[t.root].kind == ModKind::join_node);
        REQUIRE(t.nodes[t.root].children.size() == 5);
        for (int c : t.nodes[t.root].children)
            REQUIRE(t.nodes[c].kind == ModKind::leaf);
    }
    SECTION("disconnected graph roots at a union") {
        Graph two = parse_edge_list("n 4\n0 1\n2 3\n");
        ModularTree t = modular_decompose(two);
        REQUIRE(t.nodes[t.root].kind == ModKind::union_node);
        REQUIRE(t.nodes[t.root].children.size() == 2);
    }
    SECTION("four-cycle is a join of two non-edges") {
        ModularTree t = modular_decompose(gen(Family::cycle, 4));
        const auto& root = t.nodes[t.root];
        REQUIRE(root.kind == ModKind::join_node);
        REQUIRE(root.children.size() == 2);
        for (int c : root.children) {
            REQUIRE(t.nodes[c].kind == ModKind::union_node);
            REQUIRE(t.nodes[c].vertices.size() == 2);
        }
        REQUIRE(t.modular_width() == 0);
    }
    SECTION("star decomposes as center joined to independent leaves") {
        ModularTree t = modular_decompose(gen(Family::star, 6));
        const auto& root = t.nodes[t.root];
        REQUIRE(root.kind == ModKind::join_node);
        REQUIRE(root.children.size() == 2);
        REQUIRE(t.modular_width() == 0);
    }
    SECTION("paths of length at least four are prime") {
        for (int n : {4, 5, 6, 7}) {
            ModularTree t = modular_decompose(gen(Family::path, n));
            REQUIRE(t.nodes[t.root].kind == ModKind::prime);
            REQUIRE(t.nodes[t.root].children.size() == static_cast<size_t>(n));
            REQUIRE(t.modular_width() == n);
        }
    }
    SECTION("petersen graph is prime") {
        ModularTree t = modular_decompose(gen(Family::petersen, 10));
        REQUIRE(t.nodes[t.root].kind == ModKind::prime);
        REQUIRE(t.modular_width() == 10);
    }
    SECTION("blown-up path keeps a four-vertex quotient") {
        // P4 with vertex 1 replaced by a two-vertex clique {1,4}
        Graph g = parse_edge_list("n 5\n0 1\n0 4\n1 4\n1 2\n4 2\n2 3\n");
        ModularTree t = modular_decompose(g);
        const auto& root = t.nodes[t.root];
        REQUIRE(root.kind == ModKind::prime);
        REQUIRE(root.children.size() == 4);
        REQUIRE(t.modular_width() == 4);
        bool found = false;
        for (int c : root.children)
            if (t.nodes[c].vertices == VertexSet{1, 4}) {
                found = true;
                REQUIRE(t.nodes[c].kind == ModKind::join_node);
            }
        REQUIRE(found);
    }
}

TEST_CASE("decomposition invariants over graph corpora") {
    SECTION("every graph on up to five vertices") {
        for (int n = 1; n <= 5; ++n) {
            int bits = n * (n - 1) / 2;
            for (unsigned long long mask = 0; mask < (1ULL << bits); ++mask) {
                Graph g = graph_from_mask(n, mask);
                check_tree_invariants(g, modular_decompose(g));
            }
        }
    }
    SECTION("random families") {
        for (unsigned long long seed = 0; seed < 12; ++seed) {
            for (auto fam : {Family::random_cograph, Family::random_chordal,
                             Family::random_bounded_degree, Family::random_tree}) {
                Graph g = gen(fam, 14, seed);
                check_tree_invariants(g, modular_decompose(g));
            }
        }
    }
    SECTION("cographs always get width zero") {
        for (unsigned long long seed = 0; seed < 20; ++seed) {
            Graph g = gen(Family::random_cograph, 30, seed);
            ModularTree t = modular_decompose(g);
            REQUIRE(t.modular_width() == 0);
            for (const auto& node : t.nodes) REQUIRE(node.kind != ModKind::prime);
        }
    }
    SECTION("decomposition is deterministic") {
        for (unsigned long long seed = 0; seed < 6; ++seed) {
            Graph g = gen(Family::random_bounded_degree, 13, seed);
            ModularTree a = modular_decompose(g);
            ModularTree b = modular_decompose(g);
            REQUIRE(a.root == b.root);
            REQUIRE(a.nodes.size() == b.nodes.size());
            for (size_t i = 0; i < a.nodes.size(); ++i) {
                REQUIRE(a.nodes[i].kind == b.nodes[i].kind);
                REQUIRE(a.nodes[i].vertices == b.nodes[i].vertices);
                REQUIRE(a.nodes[i].children == b.nodes[i].children);
            }
        }
    }
}
