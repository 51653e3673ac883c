#pragma once

#include <random>

#include "metrdim/graph.hpp"

namespace metrdim {

enum class Family {
    path,
    cycle,
    complete,
    star,
    random_tree,
    random_cograph,
    random_chordal,
    random_bounded_degree,
    petersen,
};

inline Family family_from_string(const std::string& s) {
    if (s == "path") return Family::path;
    if (s == "cycle") return Family::cycle;
    if (s == "complete") return Family::complete;
    if (s == "star") return Family::star;
    if (s == "random_tree") return Family::random_tree;
    if (s == "random_cograph") return Family::random_cograph;
    if (s == "random_chordal") return Family::random_chordal;
    if (s == "random_bounded_degree") return Family::random_bounded_degree;
    if (s == "petersen") return Family::petersen;
    throw std::invalid_argument("unknown family '" + s + "'");
}

namespace detail {

// rng() % k keeps results identical across standard library implementations,
// unlike uniform_int_distribution
inline int rand_below(std::mt19937_64& rng, int k) {
    return static_cast<int>(rng() % static_cast<unsigned long long>(k));
}

inline void gen_cograph_edges(std::vector<std::pair<int, int>>& edges, int lo, int hi,
                              std::mt19937_64& rng, bool force_join) {
    int sz = hi - lo;
    if (sz == 1) return;
    bool join = force_join || (rng() & 1);
    int cut = lo + 1 + rand_below(rng, sz - 1);
    gen_cograph_edges(edges, lo, cut, rng, false);
    gen_cograph_edges(edges, cut, hi, rng, false);
    if (join)
        for (int u = lo; u < cut; ++u)
            for (int v = cut; v < hi; ++v) edges.emplace_back(u, v);
}

}  // namespace detail

// Deterministic for a fixed (family, n, seed, delta). delta only applies to
// random_bounded_degree.
inline Graph gen(Family family, int n, unsigned long long seed = 0, int delta = 3) {
    if (n < 1) throw std::invalid_argument("gen: n must be positive");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> edges;

    switch (family) {
        case Family::path:
            for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            return Graph::from_edges(n, edges);

        case Family::cycle:
            if (n < 3) throw std::invalid_argument("gen: cycle needs n >= 3");
            for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
            return Graph::from_edges(n, edges);

        case Family::complete:
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
            return Graph::from_edges(n, edges);

        case Family::star:
            if (n < 2) throw std::invalid_argument("gen: star needs n >= 2");
            for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
            return Graph::from_edges(n, edges);

        case Family::petersen: {
            if (n != 10) throw std::invalid_argument("gen: petersen needs n == 10");
            for (int i = 0; i < 5; ++i) {
                edges.emplace_back(i, (i + 1) % 5);          // outer cycle
                edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
                edges.emplace_back(i, 5 + i);                // spokes
            }
            return Graph::from_edges(n, edges);
        }

        case Family::random_tree:
            for (int i = 1; i < n; ++i) edges.emplace_back(detail::rand_below(rng, i), i);
            return Graph::from_edges(n, edges);

        case Family::random_cograph:
            // top operation forced to join so the result is connected
            detail::gen_cograph_edges(edges, 0, n, rng, true);
            return Graph::from_edges(n, edges);

        case Family::random_chordal: {
            // random elimination ordering with random back-fill
            std::vector<int> ord(n), pos(n);
            for (int i = 0; i < n; ++i) ord[i] = i;
            for (int i = n - 1; i > 0; --i) std::swap(ord[i], ord[detail::rand_below(rng, i + 1)]);
            for (int i = 0; i < n; ++i) pos[ord[i]] = i;
            std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
            auto link = [&](int u, int v) { a[u][v] = a[v][u] = 1; };
            for (int i = 0; i + 1 < n; ++i) {
                int v = ord[i];
                int want = 1 + (detail::rand_below(rng, 3) == 0 ? 1 : 0) +
                           (detail::rand_below(rng, 5) == 0 ? 1 : 0);
                want = std::min(want, n - 1 - i);
                for (int t = 0; t < want; ++t)
                    link(v, ord[i + 1 + detail::rand_below(rng, n - 1 - i)]);
            }
            for (int i = 0; i + 1 < n; ++i) {
                int v = ord[i];
                std::vector<int> later;
                for (int j = i + 1; j < n; ++j)
                    if (a[v][ord[j]]) later.push_back(ord[j]);
                for (size_t x = 0; x < later.size(); ++x)
                    for (size_t y = x + 1; y < later.size(); ++y) link(later[x], later[y]);
            }
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (a[u][v]) edges.emplace_back(u, v);
            return Graph::from_edges(n, edges);
        }

        case Family::random_bounded_degree: {
            if (delta < 1) throw std::invalid_argument("gen: delta must be positive");
            for (int attempt = 0; attempt < 200; ++attempt) {
                std::vector<int> deg(n, 0);
                std::vector<std::pair<int, int>> e;
                bool fail = false;
                for (int i = 1; i < n && !fail; ++i) {
                    std::vector<int> cand;
                    for (int j = 0; j < i; ++j)
                        if (deg[j] < delta) cand.push_back(j);
                    if (cand.empty() || deg[i] >= delta) {
                        fail = true;
                        break;
                    }
                    int j = cand[detail::rand_below(rng, static_cast<int>(cand.size()))];
                    e.emplace_back(j, i);
                    ++deg[j];
                    ++deg[i];
                }
                if (fail) continue;
                Graph g = Graph::from_edges(n, e);
                int extra = n / 3;
                for (int t = 0; t < extra; ++t)
                    for (int tries = 0; tries < 10; ++tries) {
                        int u = detail::rand_below(rng, n), v = detail::rand_below(rng, n);
                        if (u == v || g.has_edge(u, v)) continue;
                        if (g.degree(u) >= delta || g.degree(v) >= delta) continue;
                        g.adj[u].insert(std::lower_bound(g.adj[u].begin(), g.adj[u].end(), v), v);
                        g.adj[v].insert(std::lower_bound(g.adj[v].begin(), g.adj[v].end(), u), u);
                        break;
                    }
                return g;
            }
            throw std::invalid_argument("gen: cannot satisfy degree bound " + std::to_string(delta));
        }
    }
    throw std::invalid_argument("gen: unknown family");
}

inline Graph gen(const std::string& family, int n, unsigned long long seed = 0, int delta = 3) {
    return gen(family_from_string(family), n, seed, delta);
}

}  // namespace metrdim
