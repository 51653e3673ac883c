#pragma once

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace metrdim {

// Canonical vertex set: sorted, duplicate-free vector of vertex ids.
using VertexSet = std::vector<int>;

inline bool set_contains(const VertexSet& s, int v) {
    return std::binary_search(s.begin(), s.end(), v);
}

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline void set_insert(VertexSet& s, int v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) s.insert(it, v);
}

inline VertexSet normalized(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

struct parse_error : std::runtime_error {
    int line;
    parse_error(const std::string& msg, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;  // sorted neighbor lists

    Graph() = default;
    explicit Graph(int n_) : n(n_), adj(n_) {}

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
        if (n <= 0) throw std::invalid_argument("graph needs at least one vertex");
        Graph g(n);
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw std::invalid_argument("vertex id out of range");
            if (u == v) throw std::invalid_argument("self-loops not allowed");
            g.adj[u].push_back(v);
            g.adj[v].push_back(u);
        }
        for (auto& nb : g.adj) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        return g;
    }

    bool has_edge(int u, int v) const {
        return std::binary_search(adj[u].begin(), adj[u].end(), v);
    }

    int degree(int v) const { return static_cast<int>(adj[v].size()); }

    int edge_count() const {
        long long twice = 0;
        for (const auto& nb : adj) twice += static_cast<long long>(nb.size());
        return static_cast<int>(twice / 2);
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n; ++u)
            for (int v : adj[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }
};

// Edge-list text format: optional first line "n <count>", then one "u v" pair
// per line. '#' starts a comment, blank lines are skipped.
inline Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool saw_header = false, saw_any = false;
    int header_n = 0, max_id = -1;
    std::vector<std::pair<int, int>> edges;

    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string a, b, extra;
        if (!(ls >> a)) continue;

        if (a == "n") {
            if (saw_any) throw parse_error("header must come first", line_no);
            if (!(ls >> b) || (ls >> extra))
                throw parse_error("expected 'n <count>'", line_no);
            try {
                header_n = std::stoi(b);
            } catch (...) {
                throw parse_error("bad vertex count '" + b + "'", line_no);
            }
            if (header_n <= 0) throw parse_error("vertex count must be positive", line_no);
            saw_header = saw_any = true;
            continue;
        }

        if (!(ls >> b) || (ls >> extra))
            throw parse_error("expected 'u v'", line_no);
        int u, v;
        try {
            u = std::stoi(a);
            v = std::stoi(b);
        } catch (...) {
            throw parse_error("bad vertex id", line_no);
        }
        if (u < 0 || v < 0) throw parse_error("vertex ids must be nonnegative", line_no);
        if (u == v) throw parse_error("self-loop " + std::to_string(u), line_no);
        if (saw_header && (u >= header_n || v >= header_n))
            throw parse_error("vertex id exceeds declared count", line_no);
        max_id = std::max({max_id, u, v});
        edges.emplace_back(u, v);
        saw_any = true;
    }

    if (!saw_any) throw parse_error("no graph data", line_no == 0 ? 1 : line_no);
    int n = saw_header ? header_n : max_id + 1;
    return Graph::from_edges(n, edges);
}

// Deterministic serialization: header line, then edges sorted with u < v.
inline std::string write_edge_list(const Graph& g) {
    std::ostringstream out;
    out << "n " << g.n << "\n";
    for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
    return out.str();
}

// Single-source BFS; unreachable vertices get the sentinel value n.
inline std::vector<int> bfs_distances(const Graph& g, int src) {
    std::vector<int> dist(g.n, g.n);
    dist[src] = 0;
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : g.adj[u])
            if (dist[v] == g.n) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    return dist;
}

struct DistanceMatrix {
    int n = 0;
    std::vector<int> d;  // row-major n*n, sentinel n for unreachable

    int operator()(int u, int v) const { return d[static_cast<size_t>(u) * n + v]; }

    int dist_to_set(int v, const VertexSet& s) const {
        int best = n;
        for (int x : s) best = std::min(best, (*this)(v, x));
        return best;
    }

    int diam_of_set(const VertexSet& s) const {
        int best = 0;
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 1; j < s.size(); ++j)
                best = std::max(best, (*this)(s[i], s[j]));
        return best;
    }
};

inline DistanceMatrix all_pairs_distances(const Graph& g) {
    DistanceMatrix m;
    m.n = g.n;
    m.d.resize(static_cast<size_t>(g.n) * g.n);
    for (int s = 0; s < g.n; ++s) {
        auto row = bfs_distances(g, s);
        std::copy(row.begin(), row.end(), m.d.begin() + static_cast<size_t>(s) * g.n);
    }
    return m;
}

inline bool is_connected(const Graph& g) {
    if (g.n == 0) return false;
    auto dist = bfs_distances(g, 0);
    return std::all_of(dist.begin(), dist.end(), [&](int x) { return x < g.n; });
}

inline bool resolves(const DistanceMatrix& d, int v, int x, int y) {
    if (x == y) throw std::invalid_argument("resolves: x and y must be distinct");
    return d(v, x) != d(v, y);
}

// Does w resolve every vertex pair of a connected graph?
inline bool is_resolving_set(const Graph& g, const DistanceMatrix& d, const VertexSet& w) {
    for (int v = 0; v < g.n; ++v)
        for (int u = v + 1; u < g.n; ++u)
            if (d(v, u) >= g.n) throw std::invalid_argument("is_resolving_set: graph is disconnected");
    for (int x = 0; x < g.n; ++x)
        for (int y = x + 1; y < g.n; ++y) {
            bool ok = false;
            for (int v : w)
                if (d(v, x) != d(v, y)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
    return true;
}

struct GraphStats {
    int n = 0;
    int m = 0;
    int max_degree = 0;
    int diameter = 0;  // sentinel n when disconnected
    bool connected = false;
};

inline GraphStats graph_stats(const Graph& g) {
    GraphStats st;
    st.n = g.n;
    st.m = g.edge_count();
    for (int v = 0; v < g.n; ++v) st.max_degree = std::max(st.max_degree, g.degree(v));
    st.connected = true;
    for (int s = 0; s < g.n; ++s) {
        auto dist = bfs_distances(g, s);
        for (int x : dist) {
            if (x >= g.n) st.connected = false;
            st.diameter = std::max(st.diameter, x);
        }
    }
    if (!st.connected) st.diameter = g.n;
    return st;
}

}  // namespace metrdim
