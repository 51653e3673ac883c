#pragma once

#include "metrdim/tree_decomposition.hpp"

namespace metrdim {

struct not_chordal_error : std::runtime_error {
    std::vector<int> cycle;  // chordless cycle of length >= 4
    explicit not_chordal_error(std::vector<int> cyc)
        : std::runtime_error("graph is not chordal"), cycle(std::move(cyc)) {}
};

namespace detail {

// maximum cardinality search; returns an elimination order (first out first)
inline std::vector<int> mcs_elimination_order(const Graph& g) {
    std::vector<int> weight(g.n, 0), order(g.n);
    std::vector<char> numbered(g.n, 0);
    for (int k = g.n - 1; k >= 0; --k) {
        int best = -1;
        for (int v = 0; v < g.n; ++v)
            if (!numbered[v] && (best < 0 || weight[v] > weight[best])) best = v;
        numbered[best] = 1;
        order[k] = best;
        for (int u : g.adj[best])
            if (!numbered[u]) ++weight[u];
    }
    return order;
}

// shortest (hence chordless) path from a to b avoiding N[v] minus {a,b};
// empty result means no such path
inline std::vector<int> chordless_detour(const Graph& g, int v, int a, int b) {
    std::vector<char> blocked(g.n, 0);
    blocked[v] = 1;
    for (int u : g.adj[v]) blocked[u] = 1;
    blocked[a] = blocked[b] = 0;
    std::vector<int> prev(g.n, -1);
    std::queue<int> q;
    q.push(a);
    prev[a] = a;
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        if (x == b) break;
        for (int y : g.adj[x])
            if (!blocked[y] && prev[y] < 0) {
                prev[y] = x;
                q.push(y);
            }
    }
    if (prev[b] < 0) return {};
    std::vector<int> path = {b};
    while (path.back() != a) path.push_back(prev[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

// find any chordless cycle through non-adjacent neighbors of some vertex
inline std::vector<int> find_chordless_cycle(const Graph& g, int hint_v, int hint_a, int hint_b) {
    auto attempt = [&](int v, int a, int b) -> std::vector<int> {
        auto path = chordless_detour(g, v, a, b);
        if (path.size() < 3) return {};
        std::vector<int> cycle = {v};
        cycle.insert(cycle.end(), path.begin(), path.end());
        return cycle;
    };
    if (hint_v >= 0) {
        auto c = attempt(hint_v, hint_a, hint_b);
        if (!c.empty()) return c;
    }
    for (int v = 0; v < g.n; ++v)
        for (size_t i = 0; i < g.adj[v].size(); ++i)
            for (size_t j = i + 1; j < g.adj[v].size(); ++j) {
                int a = g.adj[v][i], b = g.adj[v][j];
                if (g.has_edge(a, b)) continue;
                auto c = attempt(v, a, b);
                if (!c.empty()) return c;
            }
    return {};
}

}  // namespace detail

// Tests chordality via maximum cardinality search. On failure fills *cycle
// (when given) with a chordless cycle of length at least four.
inline bool is_chordal(const Graph& g, std::vector<int>* cycle = nullptr) {
    auto order = detail::mcs_elimination_order(g);
    std::vector<int> pos(g.n);
    for (int i = 0; i < g.n; ++i) pos[order[i]] = i;
    for (int i = 0; i < g.n; ++i) {
        int v = order[i];
        int parent = -1;
        for (int u : g.adj[v])
            if (pos[u] > i && (parent < 0 || pos[u] < pos[parent])) parent = u;
        if (parent < 0) continue;
        for (int u : g.adj[v]) {
            if (pos[u] <= i || u == parent || g.has_edge(parent, u)) continue;
            if (cycle) *cycle = detail::find_chordless_cycle(g, v, parent, u);
            return false;
        }
    }
    return true;
}

// Clique tree of a chordal graph: bags are the maximal cliques, tree edges
// form a maximum-weight spanning tree under intersection sizes, which yields
// a valid decomposition of length one. Throws not_chordal_error otherwise.
inline TreeDecomposition clique_tree(const Graph& g) {
    std::vector<int> cyc;
    if (!is_chordal(g, &cyc)) throw not_chordal_error(cyc);

    auto order = detail::mcs_elimination_order(g);
    std::vector<int> pos(g.n);
    for (int i = 0; i < g.n; ++i) pos[order[i]] = i;
    std::vector<VertexSet> cand;
    for (int i = 0; i < g.n; ++i) {
        int v = order[i];
        VertexSet c = {v};
        for (int u : g.adj[v])
            if (pos[u] > i) set_insert(c, u);
        cand.push_back(std::move(c));
    }
    std::vector<VertexSet> cliques;
    for (const auto& c : cand) {
        bool maximal = true;
        for (const auto& other : cand)
            if (&other != &c && other.size() >= c.size() &&
                std::includes(other.begin(), other.end(), c.begin(), c.end()) && other != c) {
                maximal = false;
                break;
            }
        if (maximal && std::find(cliques.begin(), cliques.end(), c) == cliques.end())
            cliques.push_back(c);
    }

    TreeDecomposition td;
    td.bags = cliques;
    int q = td.size();
    if (q <= 1) return td;
    // Prim over intersection weights; zero-weight links keep the tree whole
    std::vector<char> in_tree(q, 0);
    std::vector<int> best_w(q, -1), best_to(q, 0);
    in_tree[0] = 1;
    for (int j = 1; j < q; ++j)
        best_w[j] = static_cast<int>(set_intersection(td.bags[0], td.bags[j]).size());
    for (int step = 1; step < q; ++step) {
        int pick = -1;
        for (int j = 0; j < q; ++j)
            if (!in_tree[j] && (pick < 0 || best_w[j] > best_w[pick])) pick = j;
        in_tree[pick] = 1;
        td.edges.emplace_back(best_to[pick], pick);
        for (int j = 0; j < q; ++j)
            if (!in_tree[j]) {
                int w = static_cast<int>(set_intersection(td.bags[pick], td.bags[j]).size());
                if (w > best_w[j]) {
                    best_w[j] = w;
                    best_to[j] = pick;
                }
            }
    }
    return td;
}

// Min-fill elimination heuristic; works on any graph. Bags are the closed
// neighborhoods at elimination time, linked along the elimination tree.
inline TreeDecomposition heuristic_td(const Graph& g) {
    std::vector<std::vector<char>> a(g.n, std::vector<char>(g.n, 0));
    for (int v = 0; v < g.n; ++v)
        for (int u : g.adj[v]) a[v][u] = 1;
    std::vector<char> gone(g.n, 0);
    std::vector<VertexSet> bags;
    std::vector<int> elim;  // elimination order
    std::vector<int> when(g.n, -1);

    for (int step = 0; step < g.n; ++step) {
        int best = -1;
        long long best_fill = -1;
        for (int v = 0; v < g.n; ++v) {
            if (gone[v]) continue;
            std::vector<int> nb;
            for (int u = 0; u < g.n; ++u)
                if (!gone[u] && a[v][u]) nb.push_back(u);
            long long fill = 0;
            for (size_t i = 0; i < nb.size(); ++i)
                for (size_t j = i + 1; j < nb.size(); ++j)
                    if (!a[nb[i]][nb[j]]) ++fill;
            if (best < 0 || fill < best_fill) {
                best = v;
                best_fill = fill;
            }
        }
        std::vector<int> nb;
        for (int u = 0; u < g.n; ++u)
            if (!gone[u] && a[best][u]) nb.push_back(u);
        VertexSet bag = normalized(nb);
        set_insert(bag, best);
        bags.push_back(bag);
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j) a[nb[i]][nb[j]] = a[nb[j]][nb[i]] = 1;
        gone[best] = 1;
        when[best] = step;
        elim.push_back(best);
    }

    TreeDecomposition td;
    td.bags = bags;
    for (int step = 0; step < g.n; ++step) {
        // attach to the bag of the earliest-eliminated later neighbor
        int nxt = -1;
        for (int u : td.bags[step])
            if (when[u] > step && (nxt < 0 || when[u] < when[nxt])) nxt = u;
        if (nxt >= 0) td.edges.emplace_back(step, when[nxt]);
        else if (step + 1 < g.n) td.edges.emplace_back(step, step + 1);
    }
    return td;
}

}  // namespace metrdim
