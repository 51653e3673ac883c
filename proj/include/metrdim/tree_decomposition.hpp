#pragma once

#include <functional>

#include "metrdim/graph.hpp"

namespace metrdim {

struct TreeDecomposition {
    std::vector<VertexSet> bags;
    std::vector<std::pair<int, int>> edges;  // over bag indices

    int size() const { return static_cast<int>(bags.size()); }
};

struct TdReport {
    bool valid = false;
    int width = -1;   // max bag size minus one
    int length = -1;  // max bag diameter under global graph distances
    std::string reason;
};

inline TdReport validate_td(const Graph& g, const TreeDecomposition& td) {
    TdReport rep;
    int b = td.size();
    if (b == 0) {
        rep.reason = "no bags";
        return rep;
    }
    for (const auto& bag : td.bags)
        for (int v : bag)
            if (v < 0 || v >= g.n) throw std::invalid_argument("validate_td: vertex out of range");
    for (auto [x, y] : td.edges)
        if (x < 0 || y < 0 || x >= b || y >= b)
            throw std::invalid_argument("validate_td: bag index out of range");

    // callers may hand-build bags in any order; all checks need sorted sets
    std::vector<VertexSet> bags(td.bags);
    for (auto& bag : bags) bag = normalized(bag);

    for (const auto& bag : bags)
        rep.width = std::max(rep.width, static_cast<int>(bag.size()) - 1);
    auto d = all_pairs_distances(g);
    rep.length = 0;
    for (const auto& bag : bags) rep.length = std::max(rep.length, d.diam_of_set(bag));

    if (static_cast<int>(td.edges.size()) != b - 1) {
        rep.reason = "not a tree: wrong edge count";
        return rep;
    }
    std::vector<std::vector<int>> nb(b);
    for (auto [x, y] : td.edges) {
        nb[x].push_back(y);
        nb[y].push_back(x);
    }
    std::vector<char> seen(b, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int cnt = 0;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        ++cnt;
        for (int y : nb[x])
            if (!seen[y]) {
                seen[y] = 1;
                stack.push_back(y);
            }
    }
    if (cnt != b) {
        rep.reason = "not a tree: disconnected";
        return rep;
    }

    std::vector<char> covered(g.n, 0);
    for (const auto& bag : bags)
        for (int v : bag) covered[v] = 1;
    for (int v = 0; v < g.n; ++v)
        if (!covered[v]) {
            rep.reason = "vertex " + std::to_string(v) + " not covered";
            return rep;
        }
    for (auto [u, v] : g.edges()) {
        bool ok = false;
        for (const auto& bag : bags)
            if (set_contains(bag, u) && set_contains(bag, v)) {
                ok = true;
                break;
            }
        if (!ok) {
            rep.reason = "edge " + std::to_string(u) + "-" + std::to_string(v) + " not covered";
            return rep;
        }
    }
    // bags containing any fixed vertex must induce a connected subtree
    for (int v = 0; v < g.n; ++v) {
        int first = -1, want = 0;
        for (int x = 0; x < b; ++x)
            if (set_contains(bags[x], v)) {
                ++want;
                if (first < 0) first = x;
            }
        std::fill(seen.begin(), seen.end(), 0);
        stack = {first};
        seen[first] = 1;
        int got = 0;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            ++got;
            for (int y : nb[x])
                if (!seen[y] && set_contains(bags[y], v)) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
        }
        if (got != want) {
            rep.reason = "bags of vertex " + std::to_string(v) + " are not connected";
            return rep;
        }
    }
    rep.valid = true;
    return rep;
}

// PACE-style .td text: "s td <bags> <max-bag-size> <n>", bag lines
// "b <id> <v...>", then one "<i> <j>" line per tree edge. Everything is
// 1-based in the file and 0-based in memory. 'c' lines are comments.
inline TreeDecomposition parse_td(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool saw_header = false;
    int nbags = 0, n = 0;
    TreeDecomposition td;
    std::vector<char> bag_seen;

    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream ls(raw);
        std::string tok;
        if (!(ls >> tok) || tok == "c") continue;
        if (tok == "s") {
            std::string kind;
            int maxbag;
            if (saw_header || !(ls >> kind >> nbags >> maxbag >> n) || kind != "td")
                throw parse_error("bad solution header", line_no);
            if (nbags < 0 || n < 0) throw parse_error("negative counts", line_no);
            saw_header = true;
            td.bags.resize(nbags);
            bag_seen.assign(nbags, 0);
            continue;
        }
        if (!saw_header) throw parse_error("missing 's td' header", line_no);
        if (tok == "b") {
            int id;
            if (!(ls >> id)) throw parse_error("bag line needs an id", line_no);
            if (id < 1 || id > nbags) throw parse_error("bag id out of range", line_no);
            if (bag_seen[id - 1]) throw parse_error("duplicate bag " + std::to_string(id), line_no);
            bag_seen[id - 1] = 1;
            std::vector<int> verts;
            int v;
            while (ls >> v) {
                if (v < 1 || v > n) throw parse_error("vertex id out of range", line_no);
                verts.push_back(v - 1);
            }
            if (!ls.eof()) throw parse_error("bad token in bag line", line_no);
            td.bags[id - 1] = normalized(verts);
            continue;
        }
        int x, y;
        try {
            x = std::stoi(tok);
        } catch (...) {
            throw parse_error("unexpected token '" + tok + "'", line_no);
        }
        std::string rest;
        if (!(ls >> y) || (ls >> rest)) throw parse_error("expected '<i> <j>' edge line", line_no);
        if (x < 1 || y < 1 || x > nbags || y > nbags)
            throw parse_error("edge endpoint out of range", line_no);
        td.edges.emplace_back(x - 1, y - 1);
    }
    if (!saw_header) throw parse_error("missing 's td' header", line_no == 0 ? 1 : line_no);
    return td;
}

inline std::string write_td(const TreeDecomposition& td, int n) {
    int maxbag = 0;
    for (const auto& bag : td.bags) maxbag = std::max(maxbag, static_cast<int>(bag.size()));
    std::ostringstream out;
    out << "s td " << td.size() << " " << maxbag << " " << n << "\n";
    for (int i = 0; i < td.size(); ++i) {
        out << "b " << i + 1;
        for (int v : td.bags[i]) out << " " << v + 1;
        out << "\n";
    }
    auto edges = td.edges;
    for (auto& [x, y] : edges)
        if (x > y) std::swap(x, y);
    std::sort(edges.begin(), edges.end());
    for (auto [x, y] : edges) out << x + 1 << " " << y + 1 << "\n";
    return out.str();
}

enum class NiceKind { leaf, introduce, forget, join };

struct NiceNode {
    NiceKind kind;
    int vertex = -1;  // introduced or forgotten vertex
    VertexSet bag;
    int left = -1, right = -1;  // child node indices
};

struct NiceTreeDecomposition {
    std::vector<NiceNode> nodes;
    int root = -1;

    int size() const { return static_cast<int>(nodes.size()); }

    std::vector<int> children(int i) const {
        std::vector<int> out;
        if (nodes[i].left >= 0) out.push_back(nodes[i].left);
        if (nodes[i].right >= 0) out.push_back(nodes[i].right);
        return out;
    }

    std::vector<int> postorder() const {
        std::vector<int> order, stack = {root};
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            order.push_back(i);
            for (int c : children(i)) stack.push_back(c);
        }
        std::reverse(order.begin(), order.end());
        return order;
    }

    int width() const {
        int w = -1;
        for (const auto& nd : nodes) w = std::max(w, static_cast<int>(nd.bag.size()) - 1);
        return w;
    }

    TreeDecomposition to_td() const {
        TreeDecomposition td;
        td.bags.reserve(nodes.size());
        for (const auto& nd : nodes) td.bags.push_back(nd.bag);
        for (int i = 0; i < size(); ++i)
            for (int c : children(i)) td.edges.emplace_back(i, c);
        return td;
    }
};

// Converts a valid tree decomposition into a nice one rooted at a singleton
// bag {root_vertex}. Every produced bag is a subset of an input bag, and the
// largest bag of the input survives, so width and length are preserved
// exactly. Join children always have a forget below them because bags that
// are subsets of a neighbor get contracted away first.
inline NiceTreeDecomposition make_nice(const Graph& g, const TreeDecomposition& td_in,
                                       int root_vertex) {
    if (root_vertex < 0 || root_vertex >= g.n)
        throw std::invalid_argument("make_nice: root vertex out of range");
    auto rep = validate_td(g, td_in);
    if (!rep.valid) throw std::invalid_argument("make_nice: invalid decomposition: " + rep.reason);

    // contract bags contained in a neighboring bag
    std::vector<VertexSet> bags = td_in.bags;
    for (auto& bag : bags) bag = normalized(bag);
    std::vector<std::vector<int>> nb(bags.size());
    for (auto [x, y] : td_in.edges) {
        nb[x].push_back(y);
        nb[y].push_back(x);
    }
    std::vector<char> alive(bags.size(), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t a = 0; a < bags.size() && !changed; ++a) {
            if (!alive[a]) continue;
            for (int b : nb[a]) {
                if (!alive[b]) continue;
                if (std::includes(bags[b].begin(), bags[b].end(), bags[a].begin(), bags[a].end())) {
                    for (int c : nb[a])
                        if (c != b && alive[c]) {
                            nb[b].push_back(c);
                            nb[c].push_back(b);
                        }
                    alive[a] = 0;
                    changed = true;
                    break;
                }
            }
        }
    }

    int td_root = -1;
    for (size_t a = 0; a < bags.size(); ++a)
        if (alive[a] && set_contains(bags[a], root_vertex)) {
            td_root = static_cast<int>(a);
            break;
        }

    NiceTreeDecomposition nice;
    auto add = [&](NiceKind kind, int vertex, VertexSet bag, int left, int right) {
        nice.nodes.push_back({kind, vertex, std::move(bag), left, right});
        return static_cast<int>(nice.nodes.size()) - 1;
    };
    // introduce missing vertices / forget extra ones until `cur` has bag `to`
    auto morph = [&](int cur, const VertexSet& to) {
        VertexSet have = nice.nodes[cur].bag;
        for (int v : set_difference(have, to)) {
            VertexSet next = nice.nodes[cur].bag;
            next.erase(std::find(next.begin(), next.end(), v));
            cur = add(NiceKind::forget, v, std::move(next), cur, -1);
        }
        for (int v : set_difference(to, have)) {
            VertexSet next = nice.nodes[cur].bag;
            set_insert(next, v);
            cur = add(NiceKind::introduce, v, std::move(next), cur, -1);
        }
        return cur;
    };
    auto fresh_chain = [&](const VertexSet& bag) {
        int cur = add(NiceKind::leaf, bag[0], {bag[0]}, -1, -1);
        return morph(cur, bag);
    };

    // iterative DFS over the contracted tree
    std::vector<int> result(bags.size(), -1);
    std::vector<std::pair<int, int>> stack = {{td_root, -1}};
    std::vector<std::pair<int, int>> order;
    while (!stack.empty()) {
        auto [x, par] = stack.back();
        stack.pop_back();
        order.emplace_back(x, par);
        std::vector<int> kids;
        for (int y : nb[x])
            if (alive[y] && y != par) kids.push_back(y);
        std::sort(kids.begin(), kids.end());
        kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, x);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto [x, par] = *it;
        std::vector<int> kids;
        for (int y : nb[x])
            if (alive[y] && y != par) kids.push_back(y);
        std::sort(kids.begin(), kids.end());
        kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
        if (kids.empty()) {
            result[x] = fresh_chain(bags[x]);
            continue;
        }
        int acc = morph(result[kids[0]], bags[x]);
        for (size_t k = 1; k < kids.size(); ++k) {
            int rhs = morph(result[kids[k]], bags[x]);
            acc = add(NiceKind::join, -1, bags[x], acc, rhs);
        }
        result[x] = acc;
    }
    nice.root = morph(result[td_root], {root_vertex});
    return nice;
}

// Structural checks for nice decompositions; used by tests and the solver.
inline bool validate_nice(const Graph& g, const NiceTreeDecomposition& nice,
                          std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (nice.root < 0 || nice.root >= nice.size()) return fail("bad root index");
    if (nice.nodes[nice.root].bag.size() != 1) return fail("root bag not a singleton");
    std::vector<int> indeg(nice.size(), 0);
    for (int i = 0; i < nice.size(); ++i) {
        const auto& nd = nice.nodes[i];
        for (int c : nice.children(i)) {
            if (c < 0 || c >= nice.size()) return fail("bad child index");
            ++indeg[c];
        }
        switch (nd.kind) {
            case NiceKind::leaf:
                if (nd.left >= 0 || nd.right >= 0 || nd.bag.size() != 1)
                    return fail("bad leaf node");
                break;
            case NiceKind::introduce: {
                if (nd.left < 0 || nd.right >= 0) return fail("introduce needs one child");
                const auto& cb = nice.nodes[nd.left].bag;
                if (set_contains(cb, nd.vertex) || nd.bag != set_union(cb, {nd.vertex}))
                    return fail("introduce bag mismatch");
                break;
            }
            case NiceKind::forget: {
                if (nd.left < 0 || nd.right >= 0) return fail("forget needs one child");
                const auto& cb = nice.nodes[nd.left].bag;
                if (!set_contains(cb, nd.vertex) || nd.bag != set_difference(cb, {nd.vertex}))
                    return fail("forget bag mismatch");
                break;
            }
            case NiceKind::join:
                if (nd.left < 0 || nd.right < 0) return fail("join needs two children");
                if (nice.nodes[nd.left].bag != nd.bag || nice.nodes[nd.right].bag != nd.bag)
                    return fail("join bags differ");
                break;
        }
    }
    for (int i = 0; i < nice.size(); ++i) {
        if (i == nice.root && indeg[i] != 0) return fail("root has a parent");
        if (i != nice.root && indeg[i] != 1) return fail("node without exactly one parent");
    }
    // each join child subtree must contain a forget node
    std::function<bool(int)> has_forget = [&](int i) -> bool {
        if (nice.nodes[i].kind == NiceKind::forget) return true;
        for (int c : nice.children(i))
            if (has_forget(c)) return true;
        return false;
    };
    for (int i = 0; i < nice.size(); ++i)
        if (nice.nodes[i].kind == NiceKind::join)
            for (int c : nice.children(i))
                if (!has_forget(c)) return fail("join child without forget");
    auto rep = validate_td(g, nice.to_td());
    if (!rep.valid) return fail("underlying decomposition invalid: " + rep.reason);
    return true;
}

}  // namespace metrdim
