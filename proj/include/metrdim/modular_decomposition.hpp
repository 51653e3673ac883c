#pragma once

#include "metrdim/graph.hpp"

namespace metrdim {

enum class ModKind { leaf, union_node, join_node, prime };

struct ModularNode {
    ModKind kind = ModKind::leaf;
    int vertex = -1;            // leaf nodes only
    std::vector<int> children;  // ordered by smallest contained vertex
    VertexSet vertices;
    Graph quotient;  // prime nodes only; vertex i stands for children[i]
};

struct ModularTree {
    std::vector<ModularNode> nodes;
    int root = -1;

    int modular_width() const {
        int w = 0;
        for (const auto& nd : nodes)
            if (nd.kind == ModKind::prime) w = std::max(w, nd.quotient.n);
        return w;
    }
};

inline bool is_module(const Graph& g, const VertexSet& m) {
    for (int out = 0; out < g.n; ++out) {
        if (set_contains(m, out)) continue;
        int seen = 0;
        for (int v : m)
            if (g.has_edge(out, v)) ++seen;
        if (seen != 0 && seen != static_cast<int>(m.size())) return false;
    }
    return true;
}

namespace detail {

struct SubGraph {
    std::vector<std::vector<int>> adj;  // local ids, sorted
    std::vector<int> orig;              // local id -> original vertex
    int n() const { return static_cast<int>(orig.size()); }
};

inline SubGraph induced(const SubGraph& g, const std::vector<int>& verts) {
    SubGraph s;
    s.orig.reserve(verts.size());
    std::vector<int> local(g.n(), -1);
    for (size_t i = 0; i < verts.size(); ++i) {
        local[verts[i]] = static_cast<int>(i);
        s.orig.push_back(g.orig[verts[i]]);
    }
    s.adj.resize(verts.size());
    for (size_t i = 0; i < verts.size(); ++i)
        for (int u : g.adj[verts[i]])
            if (local[u] >= 0) s.adj[i].push_back(local[u]);
    return s;
}

inline std::vector<std::vector<int>> sub_components(const SubGraph& g) {
    std::vector<std::vector<int>> comps;
    std::vector<char> seen(g.n(), 0);
    for (int s = 0; s < g.n(); ++s) {
        if (seen[s]) continue;
        std::vector<int> comp, stack = {s};
        seen[s] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int u : g.adj[v])
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

// components of the complement without materializing it: a BFS step keeps
// only the still-unvisited vertices adjacent to the popped vertex, so every
// retained scan is charged to a real edge
inline std::vector<std::vector<int>> sub_co_components(const SubGraph& g) {
    std::vector<std::vector<int>> comps;
    std::vector<int> pool(g.n());
    for (int i = 0; i < g.n(); ++i) pool[i] = i;
    while (!pool.empty()) {
        int start = pool.back();
        pool.pop_back();
        std::vector<int> comp = {start}, queue = {start};
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            std::vector<int> keep;
            keep.reserve(pool.size());
            for (int u : pool) {
                if (std::binary_search(g.adj[v].begin(), g.adj[v].end(), u)) keep.push_back(u);
                else {
                    comp.push_back(u);
                    queue.push_back(u);
                }
            }
            pool.swap(keep);
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

// smallest module containing {u,v}; empty result means it is everything
inline std::vector<int> smallest_module(const SubGraph& g, int u, int v) {
    int n = g.n();
    std::vector<char> in_m(n, 0);
    std::vector<int> members, count(n, 0);
    auto push = [&](int x) {
        in_m[x] = 1;
        members.push_back(x);
        for (int y : g.adj[x]) ++count[y];
    };
    push(u);
    push(v);
    bool grew = true;
    while (grew) {
        grew = false;
        int sz = static_cast<int>(members.size());
        for (int w = 0; w < n; ++w)
            if (!in_m[w] && count[w] > 0 && count[w] < sz) {
                push(w);
                grew = true;
                break;
            }
    }
    if (static_cast<int>(members.size()) == n) return {};
    std::sort(members.begin(), members.end());
    return members;
}

// maximal proper modules of a graph that is connected and co-connected;
// by Gallai they are disjoint and partition the vertices
inline std::vector<std::vector<int>> maximal_modular_partition(const SubGraph& g) {
    int n = g.n();
    std::vector<int> assigned(n, -1);
    std::vector<std::vector<int>> parts;
    for (int u = 0; u < n; ++u) {
        if (assigned[u] >= 0) continue;
        std::vector<char> in_u(n, 0);
        in_u[u] = 1;
        for (int v = 0; v < n; ++v) {
            if (v == u || in_u[v]) continue;
            auto m = smallest_module(g, u, v);
            for (int x : m) in_u[x] = 1;
        }
        std::vector<int> part;
        for (int x = 0; x < n; ++x)
            if (in_u[x]) {
                if (assigned[x] >= 0)
                    throw std::logic_error("modular partition classes overlap");
                assigned[x] = static_cast<int>(parts.size());
                part.push_back(x);
            }
        parts.push_back(std::move(part));
    }
    return parts;
}

}  // namespace detail

// Modular decomposition tree. Single vertices are leaves; a disconnected
// graph is the union of its components; a graph with disconnected complement
// is the join of its co-components; otherwise the node is prime and carries
// the quotient over its maximal modular partition.
inline ModularTree modular_decompose(const Graph& g) {
    if (g.n < 1) throw std::invalid_argument("modular_decompose: empty graph");
    ModularTree tree;

    std::function<int(const detail::SubGraph&)> rec = [&](const detail::SubGraph& s) -> int {
        if (s.n() == 1) {
            tree.nodes.push_back({ModKind::leaf, s.orig[0], {}, {s.orig[0]}, Graph()});
            return static_cast<int>(tree.nodes.size()) - 1;
        }
        auto build = [&](ModKind kind, const std::vector<std::vector<int>>& parts) {
            std::vector<int> kids;
            for (const auto& p : parts) kids.push_back(rec(detail::induced(s, p)));
            std::sort(kids.begin(), kids.end(), [&](int a, int b) {
                return tree.nodes[a].vertices[0] < tree.nodes[b].vertices[0];
            });
            VertexSet all;
            for (int k : kids) all = set_union(all, tree.nodes[k].vertices);
            Graph quot;
            if (kind == ModKind::prime) {
                std::vector<std::pair<int, int>> qe;
                // representatives index the sorted child order
                std::vector<int> rep;
                for (int k : kids) {
                    int orig_rep = tree.nodes[k].vertices[0];
                    for (int i = 0; i < s.n(); ++i)
                        if (s.orig[i] == orig_rep) {
                            rep.push_back(i);
                            break;
                        }
                }
                for (size_t i = 0; i < rep.size(); ++i)
                    for (size_t j = i + 1; j < rep.size(); ++j)
                        if (std::binary_search(s.adj[rep[i]].begin(), s.adj[rep[i]].end(), rep[j]))
                            qe.emplace_back(static_cast<int>(i), static_cast<int>(j));
                quot = Graph::from_edges(static_cast<int>(kids.size()), qe);
            }
            tree.nodes.push_back({kind, -1, std::move(kids), std::move(all), std::move(quot)});
            return static_cast<int>(tree.nodes.size()) - 1;
        };

        auto comps = detail::sub_components(s);
        if (comps.size() > 1) return build(ModKind::union_node, comps);
        auto cocomps = detail::sub_co_components(s);
        if (cocomps.size() > 1) return build(ModKind::join_node, cocomps);
        return build(ModKind::prime, detail::maximal_modular_partition(s));
    };

    detail::SubGraph whole;
    whole.adj = g.adj;
    whole.orig.resize(g.n);
    for (int i = 0; i < g.n; ++i) whole.orig[i] = i;
    tree.root = rec(whole);
    return tree;
}

}  // namespace metrdim
