#pragma once

#include <map>
#include <optional>

#include "metrdim/graph.hpp"

namespace metrdim {

struct BruteForceResult {
    bool budget_exceeded = false;
    int md = -1;            // valid only when !budget_exceeded
    VertexSet witness;      // lexicographically least among minimum witnesses
    bool ok() const { return !budget_exceeded; }
};

// Exhaustive search over subsets by ascending cardinality, lexicographic
// within each cardinality, so the returned witness is canonical.
// budget_k limits the subset size tried; exceeding it is reported, never
// silently truncated. The single-vertex graph has metric dimension 1.
inline BruteForceResult metric_dimension_bruteforce(const Graph& g,
                                                    std::optional<int> budget_k = std::nullopt) {
    if (!is_connected(g)) throw std::invalid_argument("metric_dimension_bruteforce: graph is disconnected");
    BruteForceResult res;
    if (g.n == 1) {
        if (budget_k && *budget_k < 1) {
            res.budget_exceeded = true;
            return res;
        }
        res.md = 1;
        res.witness = {0};
        return res;
    }
    auto d = all_pairs_distances(g);
    int max_k = g.n - 1;  // all-but-one always resolves
    int cap = budget_k ? std::min(*budget_k, max_k) : max_k;
    for (int k = 1; k <= cap; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            VertexSet w(idx.begin(), idx.end());
            if (is_resolving_set(g, d, w)) {
                res.md = k;
                res.witness = w;
                return res;
            }
            int i = k - 1;
            while (i >= 0 && idx[i] == g.n - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    if (budget_k && *budget_k < max_k) {
        res.budget_exceeded = true;
        return res;
    }
    // unreachable for connected graphs, but keep the contract explicit
    res.md = max_k;
    res.witness.resize(max_k);
    for (int i = 0; i < max_k; ++i) res.witness[i] = i;
    return res;
}

// Closed form for trees: leaves minus exterior major vertices; paths give 1.
inline int tree_metric_dimension(const Graph& g) {
    if (!is_connected(g) || g.edge_count() != g.n - 1)
        throw std::invalid_argument("tree_metric_dimension: input is not a tree");
    if (g.n == 1) return 1;
    bool is_path = true;
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) > 2) is_path = false;
    if (is_path) return 1;

    int leaves = 0;
    std::vector<char> exterior_major(g.n, 0);
    for (int v = 0; v < g.n; ++v) {
        if (g.degree(v) != 1) continue;
        ++leaves;
        // walk through degree-2 vertices to the first major vertex
        int prev = v, cur = g.adj[v][0];
        while (g.degree(cur) == 2) {
            int nxt = g.adj[cur][0] == prev ? g.adj[cur][1] : g.adj[cur][0];
            prev = cur;
            cur = nxt;
        }
        if (g.degree(cur) >= 3) exterior_major[cur] = 1;
    }
    int ex = 0;
    for (char c : exterior_major) ex += c;
    return leaves - ex;
}

// Recomputes distances from scratch (BFS per witness vertex only, so this
// scales to large graphs) and checks that distance signatures are distinct.
inline bool verify_witness(const Graph& g, const VertexSet& w_in) {
    if (!is_connected(g)) throw std::invalid_argument("verify_witness: graph is disconnected");
    VertexSet w = normalized(w_in);
    for (int v : w)
        if (v < 0 || v >= g.n) throw std::invalid_argument("verify_witness: vertex id out of range");
    if (g.n == 1) return true;
    if (w.empty()) return false;
    std::vector<std::vector<int>> sig(g.n);
    for (int src : w) {
        auto dist = bfs_distances(g, src);
        for (int v = 0; v < g.n; ++v) sig[v].push_back(dist[v]);
    }
    std::sort(sig.begin(), sig.end());
    return std::adjacent_find(sig.begin(), sig.end()) == sig.end();
}

}  // namespace metrdim
