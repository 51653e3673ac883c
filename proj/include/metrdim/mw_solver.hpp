#pragma once

#include <array>
#include <climits>

#include "metrdim/modular_decomposition.hpp"

namespace metrdim {

// Table values w(H,p,q): minimum size of W inside the module H such that W
// resolves H after adding a universal vertex, p says whether some vertex of
// H is at distance 1 from all of W in that augmented graph, and q the same
// for distance 2. Indexed by p*2+q.
struct MwEntry {
    bool feasible = false;
    long long value = 0;
    VertexSet witness;
};

struct MwNodeTable {
    std::array<MwEntry, 4> pq;
};

struct MwResult {
    int md = 0;
    VertexSet witness;
    int width = 0;
};

namespace detail {

constexpr long long MW_INF = LLONG_MAX / 4;

struct MwProv {
    VertexSet direct;                        // vertices added at this step
    std::vector<std::array<int, 3>> sub;     // {table id, p, q}
};

struct MwTable {
    std::array<long long, 4> val{MW_INF, MW_INF, MW_INF, MW_INF};
    std::array<MwProv, 4> prov;
};

struct MwOp {  // operand of a union/join combine: a vertex or a table
    bool single = false;
    int vertex = -1;
    int table = -1;
};

struct MwState {
    const ModularTree* tree = nullptr;
    std::vector<MwTable> arena;
    std::vector<int> node_table;  // tree node -> arena id, -1 for leaves

    int fresh() {
        arena.emplace_back();
        return static_cast<int>(arena.size()) - 1;
    }

    void relax(int tid, int pq, long long v, MwProv prov) {
        if (v < arena[tid].val[pq]) {
            arena[tid].val[pq] = v;
            arena[tid].prov[pq] = std::move(prov);
        }
    }

    VertexSet collect(int tid, int pq) const {
        VertexSet out = arena[tid].prov[pq].direct;
        for (const auto& [sid, p, q] : arena[tid].prov[pq].sub)
            out = set_union(out, collect(sid, p * 2 + q));
        return out;
    }

    // one union/join combine step of the left-associative fold
    int combine(const MwOp& a, const MwOp& b, bool join) {
        int t = fresh();
        if (a.single && b.single) {
            int lo = std::min(a.vertex, b.vertex), hi = std::max(a.vertex, b.vertex);
            // distance between the two vertices in the augmented graph is 1
            // under join and 2 under union, which swaps the roles of p and q
            relax(t, join ? 2 : 1, 1, {{lo}, {}});  // (true,false) vs (false,true)
            relax(t, 0, 2, {{lo, hi}, {}});
            return t;
        }
        if (!a.single && !b.single) {
            const auto& A = arena[a.table];
            const auto& B = arena[b.table];
            for (int p1 = 0; p1 < 2; ++p1)
                for (int q1 = 0; q1 < 2; ++q1)
                    for (int p2 = 0; p2 < 2; ++p2)
                        for (int q2 = 0; q2 < 2; ++q2) {
                            long long va = A.val[p1 * 2 + q1], vb = B.val[p2 * 2 + q2];
                            if (va >= MW_INF || vb >= MW_INF) continue;
                            MwProv prov{{}, {{a.table, p1, q1}, {b.table, p2, q2}}};
                            if (!join) {
                                // union: nobody is adjacent to everything
                                if (q1 != q2) relax(t, 1, va + vb, prov);
                                if (!q1 && !q2) relax(t, 0, va + vb, prov);
                            } else {
                                // join: nobody is at distance 2 from everything
                                if (p1 != p2) relax(t, 2, va + vb, prov);
                                if (!p1 && !p2) relax(t, 0, va + vb, prov);
                            }
                        }
            return t;
        }
        const MwOp& s = a.single ? a : b;
        const MwOp& h = a.single ? b : a;
        const auto& B = arena[h.table];
        auto bv = [&](int p, int q) { return B.val[p * 2 + q]; };
        auto sub = [&](int p, int q) { return MwProv{{}, {{h.table, p, q}}}; };
        auto sub_s = [&](int p, int q) { return MwProv{{s.vertex}, {{h.table, p, q}}}; };
        if (!join) {
            // lone vertex sits at distance 2 from the rest
            relax(t, 3, bv(1, 0), sub(1, 0));                    // (T,T), vertex left out
            relax(t, 1, bv(0, 0), sub(0, 0));                    // (F,T), vertex left out
            relax(t, 1, bv(1, 1) + 1, sub_s(1, 1));              // (F,T), vertex taken
            relax(t, 1, bv(0, 1) + 1, sub_s(0, 1));
            relax(t, 0, bv(1, 0) + 1, sub_s(1, 0));              // (F,F), vertex taken
            relax(t, 0, bv(0, 0) + 1, sub_s(0, 0));
        } else {
            // lone vertex sits at distance 1 from the rest
            relax(t, 3, bv(0, 1), sub(0, 1));                    // (T,T), vertex left out
            relax(t, 2, bv(0, 0), sub(0, 0));                    // (T,F), vertex left out
            relax(t, 2, bv(1, 1) + 1, sub_s(1, 1));              // (T,F), vertex taken
            relax(t, 2, bv(1, 0) + 1, sub_s(1, 0));
            relax(t, 0, bv(0, 1) + 1, sub_s(0, 1));              // (F,F), vertex taken
            relax(t, 0, bv(0, 0) + 1, sub_s(0, 0));
        }
        return t;
    }

    MwOp op_of(int node) const {
        const auto& nd = tree->nodes[node];
        if (nd.kind == ModKind::leaf) return {true, nd.vertex, -1};
        return {false, -1, node_table[node]};
    }

    // inner table for a prime node: enumerate chosen trivial modules I and
    // per-nontrivial (p_i,q_i); quotient distances clamp to {1,2} because of
    // the universal vertex
    int prime_table(int node) {
        const auto& nd = tree->nodes[node];
        const Graph& f = nd.quotient;
        int s = f.n;
        std::vector<int> triv, nontriv;
        for (int i = 0; i < s; ++i) {
            if (tree->nodes[nd.children[i]].kind == ModKind::leaf) triv.push_back(i);
            else nontriv.push_back(i);
        }
        int h = static_cast<int>(triv.size());
        int c = static_cast<int>(nontriv.size());
        auto dfp = [&](int i, int j) { return i == j ? 0 : (f.has_edge(i, j) ? 1 : 2); };

        int t = fresh();
        std::vector<int> pi(c), qi(c);
        for (unsigned long long imask = 0; imask < (1ULL << h); ++imask) {
            std::vector<char> in_z(s, 0);
            VertexSet zidx;
            for (int x = 0; x < h; ++x)
                if (imask >> x & 1) {
                    in_z[triv[x]] = 1;
                    zidx.push_back(triv[x]);
                }
            for (int i : nontriv) {
                in_z[i] = 1;
                zidx.push_back(i);
            }
            std::sort(zidx.begin(), zidx.end());
            auto resolver = [&](int i, int j) {
                for (int r : zidx)
                    if (r != i && r != j && dfp(r, i) != dfp(r, j)) return true;
                return false;
            };
            // a) Z resolves the quotient in F'
            bool ok = true;
            for (int i = 0; i < s && ok; ++i)
                for (int j = i + 1; j < s && ok; ++j) {
                    if (in_z[i] || in_z[j]) continue;
                    if (!resolver(i, j)) ok = false;
                }
            if (!ok) continue;

            for (unsigned long long amask = 0; amask < (1ULL << (2 * c)); ++amask) {
                long long total = static_cast<long long>(zidx.size()) - c;  // |I|
                bool feasible = true;
                for (int x = 0; x < c && feasible; ++x) {
                    pi[x] = amask >> (2 * x) & 1;
                    qi[x] = amask >> (2 * x + 1) & 1;
                    long long wv = arena[node_table[nd.children[nontriv[x]]]].val[pi[x] * 2 + qi[x]];
                    if (wv >= MW_INF) feasible = false;
                    else total += wv;
                }
                if (!feasible) continue;
                // b),c) against unchosen trivial modules; d),e) pairwise
                for (int x = 0; x < c && feasible; ++x) {
                    int i = nontriv[x];
                    if (pi[x])
                        for (int j : triv)
                            if (!in_z[j] && dfp(i, j) != 2 && !resolver(i, j)) {
                                feasible = false;
                                break;
                            }
                    if (!feasible) break;
                    if (qi[x])
                        for (int j : triv)
                            if (!in_z[j] && dfp(i, j) != 1 && !resolver(i, j)) {
                                feasible = false;
                                break;
                            }
                }
                for (int x = 0; x < c && feasible; ++x)
                    for (int y = x + 1; y < c && feasible; ++y) {
                        int i = nontriv[x], j = nontriv[y];
                        if (pi[x] && pi[y] && dfp(i, j) != 2 && !resolver(i, j)) feasible = false;
                        if (qi[x] && qi[y] && dfp(i, j) != 1 && !resolver(i, j)) feasible = false;
                    }
                if (!feasible) continue;
                // f),g) fix the resulting (p,q)
                auto all_dist = [&](int i, int want) {
                    for (int r : zidx)
                        if (r != i && dfp(r, i) != want) return false;
                    return true;
                };
                bool p = false, q = false;
                for (int j : triv)
                    if (!in_z[j]) {
                        if (all_dist(j, 1)) p = true;
                        if (all_dist(j, 2)) q = true;
                    }
                for (int x = 0; x < c; ++x) {
                    if (pi[x] && all_dist(nontriv[x], 1)) p = true;
                    if (qi[x] && all_dist(nontriv[x], 2)) q = true;
                }
                MwProv prov;
                for (int x = 0; x < h; ++x)
                    if (imask >> x & 1)
                        prov.direct.push_back(tree->nodes[nd.children[triv[x]]].vertex);
                prov.direct = normalized(prov.direct);
                for (int x = 0; x < c; ++x)
                    prov.sub.push_back({node_table[nd.children[nontriv[x]]], pi[x], qi[x]});
                relax(t, (p ? 2 : 0) + (q ? 1 : 0), total, std::move(prov));
            }
        }
        return t;
    }

    void process_all(int skip_root = -1) {
        std::vector<int> order;
        std::vector<int> stack = {tree->root};
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            order.push_back(i);
            for (int ch : tree->nodes[i].children) stack.push_back(ch);
        }
        std::reverse(order.begin(), order.end());
        node_table.assign(tree->nodes.size(), -1);
        for (int i : order) {
            const auto& nd = tree->nodes[i];
            if (nd.kind == ModKind::leaf || i == skip_root) continue;
            if (nd.kind == ModKind::prime) {
                node_table[i] = prime_table(i);
                continue;
            }
            bool join = nd.kind == ModKind::join_node;
            MwOp acc = op_of(nd.children[0]);
            for (size_t k = 1; k < nd.children.size(); ++k)
                acc = MwOp{false, -1, combine(acc, op_of(nd.children[k]), join)};
            node_table[i] = acc.table;
        }
    }
};

}  // namespace detail

// Table of w(H,p,q) values and witnesses for the module of one decomposition
// node. Defined for modules with at least two vertices.
inline MwNodeTable mw_table(const Graph& g, const ModularTree& tree, int node) {
    if (node < 0 || node >= static_cast<int>(tree.nodes.size()))
        throw std::invalid_argument("mw_table: node index out of range");
    if (tree.nodes[node].vertices.size() < 2)
        throw std::invalid_argument("mw_table: module must have at least two vertices");
    if (tree.nodes[node].vertices.back() >= g.n)
        throw std::invalid_argument("mw_table: decomposition does not match the graph");
    detail::MwState st;
    st.tree = &tree;
    st.process_all();
    MwNodeTable out;
    int tid = st.node_table[node];
    for (int pq = 0; pq < 4; ++pq) {
        if (st.arena[tid].val[pq] >= detail::MW_INF) continue;
        out.pq[pq].feasible = true;
        out.pq[pq].value = st.arena[tid].val[pq];
        out.pq[pq].witness = st.collect(tid, pq);
    }
    return out;
}

inline MwResult md_modular(const Graph& g, const ModularTree& tree) {
    MwResult res;
    res.width = tree.modular_width();
    if (g.n == 1) {
        res.md = 1;
        res.witness = {0};
        return res;
    }
    // a union root is exactly a disconnected graph; checking the root kind
    // replaces an edge traversal, keeping this O(nodes) given the tree
    if (tree.root < 0 || tree.nodes[tree.root].kind == ModKind::union_node)
        throw std::invalid_argument("md_modular: graph is disconnected");

    detail::MwState st;
    st.tree = &tree;
    st.process_all(tree.root);
    const auto& root = tree.nodes[tree.root];
    long long best = detail::MW_INF;
    VertexSet best_w;

    if (root.kind == ModKind::join_node) {
        detail::MwOp acc = st.op_of(root.children[0]);
        for (size_t k = 1; k + 1 < root.children.size(); ++k)
            acc = detail::MwOp{false, -1, st.combine(acc, st.op_of(root.children[k]), true)};
        detail::MwOp last = st.op_of(root.children.back());
        if (acc.single && last.single) {
            best = 1;
            best_w = {std::min(acc.vertex, last.vertex)};
        } else if (acc.single || last.single) {
            const detail::MwOp& s = acc.single ? acc : last;
            const detail::MwOp& t = acc.single ? last : acc;
            const auto& B = st.arena[t.table];
            auto try_branch = [&](int p, int q, long long extra, bool add_single) {
                long long v = B.val[p * 2 + q];
                if (v >= detail::MW_INF || v + extra >= best) return;
                best = v + extra;
                best_w = st.collect(t.table, p * 2 + q);
                if (add_single) set_insert(best_w, s.vertex);
            };
            try_branch(0, 1, 0, false);
            try_branch(0, 0, 0, false);
            try_branch(1, 1, 1, true);
            try_branch(1, 0, 1, true);
        } else {
            const auto& A = st.arena[acc.table];
            const auto& B = st.arena[last.table];
            for (int p1 = 0; p1 < 2; ++p1)
                for (int q1 = 0; q1 < 2; ++q1)
                    for (int p2 = 0; p2 < 2; ++p2)
                        for (int q2 = 0; q2 < 2; ++q2) {
                            if (p1 && p2) continue;
                            long long va = A.val[p1 * 2 + q1], vb = B.val[p2 * 2 + q2];
                            if (va >= detail::MW_INF || vb >= detail::MW_INF) continue;
                            if (va + vb < best) {
                                best = va + vb;
                                best_w = set_union(st.collect(acc.table, p1 * 2 + q1),
                                                   st.collect(last.table, p2 * 2 + q2));
                            }
                        }
        }
    } else if (root.kind == ModKind::prime) {
        const Graph& f = root.quotient;
        int s = f.n;
        auto dmat = all_pairs_distances(f);  // true quotient distances at the root
        std::vector<int> triv, nontriv;
        for (int i = 0; i < s; ++i) {
            if (tree.nodes[root.children[i]].kind == ModKind::leaf) triv.push_back(i);
            else nontriv.push_back(i);
        }
        int h = static_cast<int>(triv.size());
        int c = static_cast<int>(nontriv.size());
        std::vector<int> pi(c), qi(c);
        for (unsigned long long imask = 0; imask < (1ULL << h); ++imask) {
            std::vector<char> in_z(s, 0);
            std::vector<int> zidx;
            for (int x = 0; x < h; ++x)
                if (imask >> x & 1) {
                    in_z[triv[x]] = 1;
                    zidx.push_back(triv[x]);
                }
            for (int i : nontriv) {
                in_z[i] = 1;
                zidx.push_back(i);
            }
            std::sort(zidx.begin(), zidx.end());
            auto resolver = [&](int i, int j) {
                for (int r : zidx)
                    if (r != i && r != j && dmat(r, i) != dmat(r, j)) return true;
                return false;
            };
            bool ok = true;
            for (int i = 0; i < s && ok; ++i)
                for (int j = i + 1; j < s && ok; ++j) {
                    if (in_z[i] || in_z[j]) continue;
                    if (!resolver(i, j)) ok = false;
                }
            if (!ok) continue;
            for (unsigned long long amask = 0; amask < (1ULL << (2 * c)); ++amask) {
                long long total = static_cast<long long>(zidx.size()) - c;
                bool feasible = true;
                for (int x = 0; x < c && feasible; ++x) {
                    pi[x] = amask >> (2 * x) & 1;
                    qi[x] = amask >> (2 * x + 1) & 1;
                    long long wv =
                        st.arena[st.node_table[root.children[nontriv[x]]]].val[pi[x] * 2 + qi[x]];
                    if (wv >= detail::MW_INF) feasible = false;
                    else total += wv;
                }
                if (!feasible || total >= best) continue;
                for (int x = 0; x < c && feasible; ++x) {
                    int i = nontriv[x];
                    if (pi[x])
                        for (int j : triv)
                            if (!in_z[j] && dmat(i, j) < 2 && !resolver(i, j)) {
                                feasible = false;
                                break;
                            }
                    if (!feasible) break;
                    if (qi[x])
                        for (int j : triv)
                            if (!in_z[j] && dmat(i, j) == 2 && !resolver(i, j)) {
                                feasible = false;
                                break;
                            }
                }
                for (int x = 0; x < c && feasible; ++x)
                    for (int y = x + 1; y < c && feasible; ++y) {
                        int i = nontriv[x], j = nontriv[y];
                        if (pi[x] && pi[y] && dmat(i, j) < 2 && !resolver(i, j)) feasible = false;
                        if (qi[x] && qi[y] && dmat(i, j) == 2 && !resolver(i, j)) feasible = false;
                    }
                if (!feasible) continue;
                best = total;
                best_w.clear();
                for (int x = 0; x < h; ++x)
                    if (imask >> x & 1)
                        best_w.push_back(tree.nodes[root.children[triv[x]]].vertex);
                best_w = normalized(best_w);
                for (int x = 0; x < c; ++x)
                    best_w = set_union(
                        best_w, st.collect(st.node_table[root.children[nontriv[x]]],
                                           pi[x] * 2 + qi[x]));
            }
        }
    } else {
        throw std::logic_error("md_modular: unexpected root kind for a connected graph");
    }

    if (best >= detail::MW_INF) throw std::logic_error("md_modular: no feasible entry at root");
    res.md = static_cast<int>(best);
    res.witness = best_w;
    return res;
}

inline MwResult md_modular(const Graph& g) {
    return md_modular(g, modular_decompose(g));
}

// Checks the distance facts the solver relies on: vertices outside a module
// see all its vertices at one common distance, and distances inside a proper
// module clamp at 2. Returns the number of violations.
inline int verify_module_distance_identity(const Graph& g, const ModularTree& tree) {
    auto d = all_pairs_distances(g);
    int bad = 0;
    for (const auto& nd : tree.nodes) {
        const VertexSet& m = nd.vertices;
        if (m.size() < 2) continue;
        for (int x = 0; x < g.n; ++x) {
            if (set_contains(m, x)) continue;
            for (size_t i = 1; i < m.size(); ++i)
                if (d(x, m[i]) != d(x, m[0])) ++bad;
        }
        if (static_cast<int>(m.size()) == g.n) continue;
        // induced distances, clamped by a detour through the outside
        std::vector<int> local(g.n, -1);
        for (size_t i = 0; i < m.size(); ++i) local[m[i]] = static_cast<int>(i);
        std::vector<std::pair<int, int>> ie;
        for (int u : m)
            for (int v : g.adj[u])
                if (u < v && local[v] >= 0) ie.emplace_back(local[u], local[v]);
        Graph hm = Graph::from_edges(static_cast<int>(m.size()), ie);
        auto dm = all_pairs_distances(hm);
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = i + 1; j < m.size(); ++j) {
                int expect = std::min(dm(static_cast<int>(i), static_cast<int>(j)), 2);
                if (d(m[i], m[j]) != expect) ++bad;
            }
    }
    return bad;
}

}  // namespace metrdim
