#pragma once

#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "metrdim/graph.hpp"
#include "metrdim/oracle.hpp"
#include "metrdim/projection.hpp"
#include "metrdim/tree_decomposition.hpp"

namespace metrdim {

struct TlConfig {
    // decision budget: when set, the solver answers "is there a resolving set
    // of size <= budget_k" and returns the optimum only if it is <= budget_k
    std::optional<int> budget_k;
    // replaces the derived locality horizon; values below the derived one
    // void the correctness guarantee and are meant for stress testing
    std::optional<long long> s_override;
    // per-node key ceiling; the solver refuses with an explicit outcome
    // instead of thrashing when a table would outgrow this
    size_t table_key_limit = size_t(1) << 22;
};

struct TlStats {
    int delta = 0;
    int ell = 0;
    long long s = 0;           // effective horizon used by the runs
    long long s_derived = 0;   // horizon before capping at the tree size
    bool s_overridden = false;
    int width = -1;
    int nodes = 0;
    int roots_tried = 0;
    size_t max_table_keys = 0;
    long long total_keys = 0;
};

struct TlResult {
    bool found = false;      // witness of the reported size was verified
    bool limit_hit = false;  // a node table outgrew the configured ceiling
    std::string limit_node;  // which node hit the ceiling
    int md = -1;
    VertexSet witness;
    TlStats stats;
};

struct LemmaReport {
    long long checked = 0;
    long long violations = 0;
    std::vector<std::string> items;  // descriptions, capped to keep reports small
};

namespace detail {

inline unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
    if (a != 0 && b > ~0ULL / a) return ~0ULL;
    return a * b;
}

inline unsigned long long sat_alpha(unsigned long long delta, unsigned long long ell) {
    unsigned long long p = 1;
    for (unsigned long long i = 0; i < ell; ++i) p = sat_mul(p, delta);
    p = sat_mul(p, delta + 2);
    if (p > ~0ULL - 4) return ~0ULL;
    return sat_mul(2, p + 4);
}

inline unsigned long long sat_locality(unsigned long long delta, unsigned long long ell) {
    return sat_mul(sat_alpha(delta, ell), 2 * ell + 1);
}

inline int max_degree(const Graph& g) {
    int d = 0;
    for (int v = 0; v < g.n; ++v) d = std::max(d, g.degree(v));
    return d;
}

// nodes of T_root at depth exactly `dist` below root, ascending
inline std::vector<int> frontier_at(const NiceTreeDecomposition& nice, int root, long long dist) {
    std::vector<int> cur{root};
    for (long long step = 0; step < dist && !cur.empty(); ++step) {
        std::vector<int> nxt;
        for (int p : cur)
            for (int c : nice.children(p)) nxt.push_back(c);
        cur = std::move(nxt);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

}  // namespace detail

// greedy upper bound: repeatedly add the vertex splitting the most still
// unseparated pairs of the distance-signature classes
inline VertexSet greedy_resolving_set(const Graph& g, const DistanceMatrix& d) {
    if (g.n == 1) return {0};
    VertexSet w;
    std::vector<int> cls(g.n, 0);
    int ncls = 1;
    while (true) {
        std::vector<long long> sz(ncls, 0);
        for (int x = 0; x < g.n; ++x) ++sz[cls[x]];
        long long open = 0;
        for (long long c : sz) open += c * (c - 1) / 2;
        if (open == 0) break;
        int bestv = -1;
        long long bestsep = -1;
        for (int v = 0; v < g.n; ++v) {
            if (set_contains(w, v)) continue;
            // pairs split: same-class pairs minus pairs agreeing on dist(v,.)
            std::map<std::pair<int, int>, long long> sub;
            for (int x = 0; x < g.n; ++x) ++sub[{cls[x], d(v, x)}];
            long long agree = 0;
            for (const auto& [key, c] : sub) agree += c * (c - 1) / 2;
            long long sep = open - agree;
            if (sep > bestsep) {
                bestsep = sep;
                bestv = v;
            }
        }
        set_insert(w, bestv);
        std::map<std::pair<int, int>, int> relab;
        std::vector<int> next(g.n);
        for (int x = 0; x < g.n; ++x) {
            auto key = std::make_pair(cls[x], d(bestv, x));
            auto it = relab.find(key);
            if (it == relab.end()) it = relab.emplace(key, (int)relab.size()).first;
            next[x] = it->second;
        }
        cls = std::move(next);
        ncls = static_cast<int>(relab.size());
    }
    return w;
}

namespace detail {

struct tl_limit {
    int node;
};

struct tl_entry {
    int value;
    int eid;
};

struct tl_bp {
    VertexSet direct;
    int p1 = -1, p2 = -1;
};

struct tl_key {
    VertexSet z;
    std::vector<OrderedPartition> p0;
    std::vector<std::vector<OrderedPartition>> farp;  // aligned with the far frontier
};

// one dynamic program over a nice decomposition rooted at the bag {u}
struct tl_run {
    const Graph& g;
    const DistanceMatrix& d;
    const NiceTreeDecomposition& nice;
    int u;
    int ell;
    long long s;
    int k;
    size_t key_limit;
    size_t work_limit;

    std::vector<VertexSet> bag;
    std::vector<VertexSet> y;                          // union of bags within s below i
    std::vector<std::vector<int>> far, ring;           // frontiers at depth s and s-1
    std::vector<std::vector<char>> inside;             // vertex set of G_i
    std::vector<char> uout;                            // u outside G_i
    std::vector<OrderedPartition> uproj;               // its projection, when outside
    std::vector<std::vector<OrderedPartition>> realizable;

    std::map<OrderedPartition, std::vector<int>>* offs_cache;
    std::map<std::pair<OrderedPartition, VertexSet>, OrderedPartition> cov_cache;

    std::vector<std::map<std::vector<int>, tl_entry>> table;
    std::vector<tl_bp> arena;
    size_t max_keys = 0;
    long long total_keys = 0;
    size_t work = 0;
    int cur_node = -1;

    tl_run(const Graph& g_, const DistanceMatrix& d_, const NiceTreeDecomposition& nice_,
           int u_, int ell_, long long s_, int k_, size_t key_limit_,
           std::map<OrderedPartition, std::vector<int>>* offs)
        : g(g_), d(d_), nice(nice_), u(u_), ell(ell_), s(s_), k(k_),
          key_limit(key_limit_), work_limit(key_limit_ * 16), offs_cache(offs) {}

    const std::vector<int>& offs(const OrderedPartition& p) {
        auto it = offs_cache->find(p);
        if (it == offs_cache->end()) it = offs_cache->emplace(p, partition_offsets(d, p)).first;
        return it->second;
    }

    const OrderedPartition& cov(const OrderedPartition& p, const VertexSet& target) {
        auto key = std::make_pair(p, target);
        auto it = cov_cache.find(key);
        if (it == cov_cache.end()) it = cov_cache.emplace(key, cover(d, p, target, ell)).first;
        return it->second;
    }

    void work_tick() {
        if (++work > work_limit) throw tl_limit{cur_node};
    }

    void prepare() {
        int m = nice.size();
        bag.resize(m);
        y.resize(m);
        far.resize(m);
        ring.resize(m);
        inside.assign(m, {});
        uout.assign(m, 0);
        uproj.resize(m);
        realizable.resize(m);
        table.resize(m);
        for (int i = 0; i < m; ++i) bag[i] = nice.nodes[i].bag;
        for (int i : nice.postorder()) {
            inside[i].assign(g.n, 0);
            for (int v : bag[i]) inside[i][v] = 1;
            for (int c : nice.children(i))
                for (int v = 0; v < g.n; ++v)
                    if (inside[c][v]) inside[i][v] = 1;
            far[i] = frontier_at(nice, i, s);
            ring[i] = frontier_at(nice, i, s - 1);
            VertexSet acc;
            std::vector<int> cur{i};
            for (long long step = 0; step <= s && !cur.empty(); ++step) {
                std::vector<int> nxt;
                for (int p : cur) {
                    acc = set_union(acc, bag[p]);
                    for (int c : nice.children(p)) nxt.push_back(c);
                }
                cur = std::move(nxt);
            }
            y[i] = acc;
            uout[i] = !inside[i][u];
            if (uout[i]) uproj[i] = project(d, u, bag[i], ell);
            std::vector<OrderedPartition> rz;
            for (int v = 0; v < g.n; ++v)
                if (!inside[i][v]) rz.push_back(project(d, v, bag[i], ell));
            std::sort(rz.begin(), rz.end());
            rz.erase(std::unique(rz.begin(), rz.end()), rz.end());
            realizable[i] = std::move(rz);
        }
    }

    std::vector<int> encode(int i, const tl_key& key) const {
        std::vector<int> blob;
        for (int v : key.z) blob.push_back(v);
        blob.push_back(-1);
        blob.push_back(static_cast<int>(key.p0.size()));
        for (const auto& p : key.p0)
            for (auto c : p.cls) blob.push_back(c);
        for (size_t t = 0; t < far[i].size(); ++t) {
            blob.push_back(static_cast<int>(key.farp[t].size()));
            for (const auto& p : key.farp[t])
                for (auto c : p.cls) blob.push_back(c);
        }
        return blob;
    }

    tl_key decode(int i, const std::vector<int>& blob) const {
        tl_key key;
        size_t at = 0;
        while (blob[at] != -1) key.z.push_back(blob[at++]);
        ++at;
        auto read_parts = [&](const VertexSet& base, int count) {
            std::vector<OrderedPartition> out;
            out.reserve(count);
            for (int t = 0; t < count; ++t) {
                OrderedPartition p;
                p.base = base;
                p.depth = ell;
                p.cls.reserve(base.size());
                for (size_t q = 0; q < base.size(); ++q)
                    p.cls.push_back(static_cast<std::uint8_t>(blob[at++]));
                out.push_back(std::move(p));
            }
            return out;
        };
        key.p0 = read_parts(bag[i], blob[at++]);
        key.farp.reserve(far[i].size());
        for (int j : far[i]) {
            int count = blob[at++];
            key.farp.push_back(read_parts(bag[j], count));
        }
        return key;
    }

    void relax(int i, const tl_key& key, int value, VertexSet direct, int p1, int p2) {
        if (value > k) return;
        auto blob = encode(i, key);
        auto it = table[i].find(blob);
        if (it == table[i].end()) {
            arena.push_back({std::move(direct), p1, p2});
            table[i].emplace(std::move(blob), tl_entry{value, (int)arena.size() - 1});
            if (table[i].size() > key_limit) throw tl_limit{i};
        } else if (value < it->second.value) {
            arena.push_back({std::move(direct), p1, p2});
            it->second = tl_entry{value, (int)arena.size() - 1};
        }
    }

    // far profiles one level up: the child frontier data turned into the
    // parent frontier data, per the kind of each ring node
    std::vector<std::vector<OrderedPartition>> lift(int c, const tl_key& key) {
        std::vector<std::vector<OrderedPartition>> out;
        out.reserve(ring[c].size());
        auto far_index = [&](int j) {
            auto it = std::lower_bound(far[c].begin(), far[c].end(), j);
            if (it == far[c].end() || *it != j)
                throw std::logic_error("tl_run: frontier child missing from the deeper frontier");
            return static_cast<size_t>(it - far[c].begin());
        };
        for (int j : ring[c]) {
            std::vector<OrderedPartition> rj;
            const auto& nd = nice.nodes[j];
            if (nd.kind == NiceKind::introduce || nd.kind == NiceKind::forget) {
                const auto& src = key.farp[far_index(nd.left)];
                for (const auto& p : src) rj.push_back(cov(p, bag[j]));
                if (nd.kind == NiceKind::forget && set_contains(key.z, nd.vertex))
                    rj.push_back(project(d, nd.vertex, bag[j], ell));
            } else if (nd.kind == NiceKind::join) {
                rj = key.farp[far_index(nd.left)];
                const auto& other = key.farp[far_index(nd.right)];
                rj.insert(rj.end(), other.begin(), other.end());
            }
            std::sort(rj.begin(), rj.end());
            rj.erase(std::unique(rj.begin(), rj.end()), rj.end());
            out.push_back(std::move(rj));
        }
        return out;
    }

    // all subsets of realizable[i] whose image set on the target bag equals
    // `target`, honoring the forced membership of the root projection
    template <typename Fn>
    void each_admissible(int i, const VertexSet& child_bag,
                         const std::vector<OrderedPartition>& target, Fn&& yield) {
        int nt = static_cast<int>(target.size());
        auto target_index = [&](const OrderedPartition& p) -> int {
            auto it = std::lower_bound(target.begin(), target.end(), p);
            if (it == target.end() || !(*it == p)) return -1;
            return static_cast<int>(it - target.begin());
        };
        int forced_group = -1;
        if (uout[i]) {
            forced_group = target_index(cov(uproj[i], child_bag));
            if (forced_group < 0) return;
        }
        std::vector<std::vector<OrderedPartition>> groups(nt);
        std::vector<int> forced_pos(nt, -1);
        for (const auto& p : realizable[i]) {
            int t = target_index(cov(p, child_bag));
            if (t < 0) continue;
            if (uout[i] && t == forced_group && p == uproj[i])
                forced_pos[t] = static_cast<int>(groups[t].size());
            groups[t].push_back(p);
        }
        for (int t = 0; t < nt; ++t) {
            if (groups[t].empty()) return;
            if (groups[t].size() >= 25) throw tl_limit{cur_node};
        }
        if (nt == 0) {
            if (forced_group >= 0) return;
            std::vector<OrderedPartition> empty;
            work_tick();
            yield(empty);
            return;
        }
        // odometer over per-group nonempty subsets
        std::vector<unsigned> mask(nt);
        std::vector<unsigned> limit(nt);
        for (int t = 0; t < nt; ++t) {
            limit[t] = 1u << groups[t].size();
            mask[t] = forced_pos[t] >= 0 ? (1u << forced_pos[t]) : 1u;
        }
        auto valid = [&](int t) {
            if (mask[t] == 0 || mask[t] >= limit[t]) return false;
            if (forced_pos[t] >= 0 && !(mask[t] & (1u << forced_pos[t]))) return false;
            return true;
        };
        while (true) {
            std::vector<OrderedPartition> combo;
            for (int t = 0; t < nt; ++t)
                for (size_t b = 0; b < groups[t].size(); ++b)
                    if (mask[t] & (1u << b)) combo.push_back(groups[t][b]);
            std::sort(combo.begin(), combo.end());
            work_tick();
            yield(combo);
            int t = 0;
            while (t < nt) {
                ++mask[t];
                while (mask[t] < limit[t] && !valid(t)) ++mask[t];
                if (mask[t] < limit[t]) break;
                mask[t] = forced_pos[t] >= 0 ? (1u << forced_pos[t]) : 1u;
                ++t;
            }
            if (t == nt) break;
        }
    }

    bool part_resolves(const OrderedPartition& p, int x, int yv) {
        const auto& o = offs(p);
        return o[x] != o[yv];
    }

    void process_leaf(int i) {
        int x = bag[i][0];
        std::vector<std::vector<OrderedPartition>> opts;
        if (!uout[i]) opts.push_back({});
        if (!realizable[i].empty()) opts.push_back(realizable[i]);  // the one projection
        for (const auto& p0 : opts) {
            tl_key key;
            key.p0 = p0;
            relax(i, key, 0, {}, -1, -1);
            key.z = {x};
            relax(i, key, 1, {x}, -1, -1);
        }
    }

    void process_introduce(int i) {
        int c = nice.children(i)[0];
        int v = nice.nodes[i].vertex;
        if (ring[c] != far[i]) throw std::logic_error("tl_run: frontier mismatch at introduce");
        for (const auto& [blob, ent] : table[c]) {
            tl_key ck = decode(c, blob);
            auto farp = lift(c, ck);
            if (v != u) {
                // the introduced vertex stays out of the solution; every
                // tracked vertex must be told apart from it
                VertexSet zhat = set_intersection(ck.z, y[i]);
                std::vector<int> pending;
                for (int x : y[i]) {
                    if (x == v) continue;
                    bool ok = false;
                    for (int z : zhat)
                        if (d(z, x) != d(z, v)) {
                            ok = true;
                            break;
                        }
                    for (size_t t = 0; t < farp.size() && !ok; ++t)
                        for (const auto& p : farp[t])
                            if (part_resolves(p, x, v)) {
                                ok = true;
                                break;
                            }
                    if (!ok) pending.push_back(x);
                }
                each_admissible(i, bag[c], ck.p0, [&](const std::vector<OrderedPartition>& p0) {
                    for (int x : pending) {
                        bool ok = false;
                        for (const auto& p : p0)
                            if (part_resolves(p, x, v)) {
                                ok = true;
                                break;
                            }
                        if (!ok) return;
                    }
                    relax(i, {zhat, p0, farp}, ent.value, {}, ent.eid, -1);
                });
            }
            // the introduced vertex joins the solution
            VertexSet zhat2 = set_intersection(ck.z, y[i]);
            set_insert(zhat2, v);
            if (static_cast<int>(zhat2.size()) <= k && ent.value + 1 <= k) {
                auto emit = [&](const std::vector<OrderedPartition>& p0) {
                    relax(i, {zhat2, p0, farp}, ent.value + 1, {v}, ent.eid, -1);
                };
                each_admissible(i, bag[c], ck.p0, emit);
                OrderedPartition pv = project(d, v, bag[c], ell);
                auto it = std::lower_bound(ck.p0.begin(), ck.p0.end(), pv);
                if (it != ck.p0.end() && *it == pv) {
                    // v itself realizes one former outside claim
                    std::vector<OrderedPartition> t2(ck.p0);
                    t2.erase(t2.begin() + (it - ck.p0.begin()));
                    each_admissible(i, bag[c], t2, emit);
                }
            }
        }
    }

    void process_forget(int i) {
        int c = nice.children(i)[0];
        if (ring[c] != far[i]) throw std::logic_error("tl_run: frontier mismatch at forget");
        for (const auto& [blob, ent] : table[c]) {
            tl_key ck = decode(c, blob);
            auto farp = lift(c, ck);
            VertexSet zhat = set_intersection(ck.z, y[i]);
            each_admissible(i, bag[c], ck.p0, [&](const std::vector<OrderedPartition>& p0) {
                relax(i, {zhat, p0, farp}, ent.value, {}, ent.eid, -1);
            });
        }
    }

    void process_join(int i) {
        auto kids = nice.children(i);
        int c1 = kids[0], c2 = kids[1];
        VertexSet xs, ys;
        for (int v = 0; v < g.n; ++v) {
            if (inside[c1][v] && !set_contains(bag[i], v)) xs.push_back(v);
            if (inside[c2][v] && !set_contains(bag[i], v)) ys.push_back(v);
        }
        struct side_entry {
            tl_key key;
            tl_entry ent;
            std::vector<OrderedPartition> s_set;
        };
        auto build_side = [&](int c, const std::vector<int>& blob, const tl_entry& ent) {
            side_entry se{decode(c, blob), ent, {}};
            std::vector<OrderedPartition> s;
            for (const auto& plist : se.key.farp)
                for (const auto& p : plist) s.push_back(cov(p, bag[i]));
            for (int v : set_difference(se.key.z, bag[i]))
                s.push_back(project(d, v, bag[i], ell));
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            se.s_set = std::move(s);
            return se;
        };
        std::map<VertexSet, std::vector<side_entry>> right;
        for (const auto& [blob, ent] : table[c2])
            right[set_intersection(decode(c2, blob).z, bag[i])].push_back(build_side(c2, blob, ent));
        auto subset_of = [](const std::vector<OrderedPartition>& a,
                           const std::vector<OrderedPartition>& b) {
            return std::includes(b.begin(), b.end(), a.begin(), a.end());
        };
        for (const auto& [blob1, ent1] : table[c1]) {
            side_entry s1 = build_side(c1, blob1, ent1);
            VertexSet zb = set_intersection(s1.key.z, bag[i]);
            auto grp = right.find(zb);
            if (grp == right.end()) continue;
            auto farp1 = lift(c1, s1.key);
            for (const side_entry& s2 : grp->second) {
                work_tick();
                int value = ent1.value + s2.ent.value - static_cast<int>(zb.size());
                if (value > k) continue;
                if (!subset_of(s2.s_set, s1.key.p0) || !subset_of(s1.s_set, s2.key.p0)) continue;
                std::vector<OrderedPartition> low, high;
                std::set_intersection(s1.key.p0.begin(), s1.key.p0.end(), s2.key.p0.begin(),
                                      s2.key.p0.end(), std::back_inserter(high));
                std::set_difference(s1.key.p0.begin(), s1.key.p0.end(), s2.s_set.begin(),
                                    s2.s_set.end(), std::back_inserter(low));
                {
                    std::vector<OrderedPartition> more;
                    std::set_difference(s2.key.p0.begin(), s2.key.p0.end(), s1.s_set.begin(),
                                        s1.s_set.end(), std::back_inserter(more));
                    std::vector<OrderedPartition> merged;
                    std::set_union(low.begin(), low.end(), more.begin(), more.end(),
                                   std::back_inserter(merged));
                    low = std::move(merged);
                }
                if (!subset_of(low, high)) continue;
                if (!subset_of(low, realizable[i])) continue;
                std::vector<OrderedPartition> free;
                {
                    std::vector<OrderedPartition> gap;
                    std::set_difference(high.begin(), high.end(), low.begin(), low.end(),
                                        std::back_inserter(gap));
                    std::set_intersection(gap.begin(), gap.end(), realizable[i].begin(),
                                          realizable[i].end(), std::back_inserter(free));
                }
                int forced_free = -1;
                if (uout[i] && !std::binary_search(low.begin(), low.end(), uproj[i])) {
                    auto it = std::lower_bound(free.begin(), free.end(), uproj[i]);
                    if (it == free.end() || !(*it == uproj[i])) continue;
                    forced_free = static_cast<int>(it - free.begin());
                }
                VertexSet z = set_intersection(set_union(s1.key.z, s2.key.z), y[i]);
                auto farp2 = lift(c2, s2.key);
                std::vector<std::vector<OrderedPartition>> farp;
                farp.reserve(far[i].size());
                {
                    size_t a = 0, b = 0;
                    for (int j : far[i]) {
                        if (a < ring[c1].size() && ring[c1][a] == j)
                            farp.push_back(farp1[a++]);
                        else if (b < ring[c2].size() && ring[c2][b] == j)
                            farp.push_back(farp2[b++]);
                        else
                            throw std::logic_error("tl_run: frontier mismatch at join");
                    }
                }
                // cross pairs not separated by tracked vertices, far
                // profiles, or always-present claims must be covered by the
                // free claims chosen into the final profile set
                std::vector<std::pair<int, int>> pending;
                for (int x : xs) {
                    for (int yv : ys) {
                        bool ok = false;
                        for (int zv : z)
                            if (d(zv, x) != d(zv, yv)) {
                                ok = true;
                                break;
                            }
                        for (const auto& p : low)
                            if (!ok && part_resolves(p, x, yv)) ok = true;
                        for (size_t t = 0; t < farp.size() && !ok; ++t) {
                            int j = far[i][t];
                            bool x_below = inside[j][x] && !set_contains(bag[j], x);
                            bool y_below = inside[j][yv] && !set_contains(bag[j], yv);
                            if (!farp[t].empty() && (x_below || y_below)) {
                                ok = true;
                                break;
                            }
                            if (x_below || y_below) continue;
                            for (const auto& p : farp[t])
                                if (part_resolves(p, x, yv)) {
                                    ok = true;
                                    break;
                                }
                        }
                        if (!ok) pending.push_back({x, yv});
                    }
                }
                if (free.empty() && !pending.empty()) continue;
                if (free.size() >= 25) throw tl_limit{i};
                unsigned lim = 1u << free.size();
                unsigned start = forced_free >= 0 ? (1u << forced_free) : 0u;
                for (unsigned m = start; m < lim; ++m) {
                    if (forced_free >= 0 && !(m & (1u << forced_free))) continue;
                    work_tick();
                    bool all = true;
                    for (auto [x, yv] : pending) {
                        bool ok = false;
                        for (size_t b = 0; b < free.size() && !ok; ++b)
                            if ((m & (1u << b)) && part_resolves(free[b], x, yv)) ok = true;
                        if (!ok) {
                            all = false;
                            break;
                        }
                    }
                    if (!all) continue;
                    std::vector<OrderedPartition> p0;
                    for (size_t b = 0; b < free.size(); ++b)
                        if (m & (1u << b)) p0.push_back(free[b]);
                    std::vector<OrderedPartition> merged;
                    std::set_union(low.begin(), low.end(), p0.begin(), p0.end(),
                                   std::back_inserter(merged));
                    relax(i, {z, merged, farp}, value, {}, ent1.eid, s2.ent.eid);
                }
            }
        }
    }

    // minimum over root entries whose solution contains u and whose outside
    // claims are fully discharged
    std::optional<std::pair<int, VertexSet>> solve() {
        prepare();
        for (int i : nice.postorder()) {
            cur_node = i;
            switch (nice.nodes[i].kind) {
                case NiceKind::leaf: process_leaf(i); break;
                case NiceKind::introduce: process_introduce(i); break;
                case NiceKind::forget: process_forget(i); break;
                case NiceKind::join: process_join(i); break;
            }
            max_keys = std::max(max_keys, table[i].size());
            total_keys += static_cast<long long>(table[i].size());
        }
        int best = INT_MAX, best_eid = -1;
        for (const auto& [blob, ent] : table[nice.root]) {
            tl_key key = decode(nice.root, blob);
            if (!set_contains(key.z, u)) continue;
            if (!key.p0.empty()) continue;
            if (ent.value < best) {
                best = ent.value;
                best_eid = ent.eid;
            }
        }
        if (best_eid < 0) return std::nullopt;
        VertexSet w;
        std::vector<char> seen(arena.size(), 0);
        std::vector<int> stack{best_eid};
        while (!stack.empty()) {
            int e = stack.back();
            stack.pop_back();
            if (seen[e]) continue;
            seen[e] = 1;
            w = set_union(w, arena[e].direct);
            if (arena[e].p1 >= 0) stack.push_back(arena[e].p1);
            if (arena[e].p2 >= 0) stack.push_back(arena[e].p2);
        }
        return std::make_pair(best, w);
    }
};

}  // namespace detail

// far-profile transfer from the depth-s frontier of node i to its depth-(s-1)
// frontier, following the node kinds; exposed for direct testing
inline std::map<int, ProfileSet> build_R(const NiceTreeDecomposition& nice,
                                         const DistanceMatrix& d, int i, const VertexSet& z,
                                         const std::map<int, ProfileSet>& profiles, long long s,
                                         int ell) {
    if (i < 0 || i >= nice.size()) throw std::invalid_argument("build_R: bad node index");
    if (s < 1) throw std::invalid_argument("build_R: horizon must be positive");
    std::vector<int> far = detail::frontier_at(nice, i, s);
    std::vector<int> ring = detail::frontier_at(nice, i, s - 1);
    {
        std::vector<int> keys;
        for (const auto& [j, ps] : profiles) keys.push_back(j);
        if (keys != far)
            throw std::invalid_argument("build_R: profiles must be keyed by the depth-s frontier");
    }
    for (const auto& [j, ps] : profiles) {
        if (ps.base != nice.nodes[j].bag || ps.depth != ell)
            throw std::invalid_argument("build_R: profile set does not match its bag");
    }
    std::map<int, ProfileSet> out;
    for (int j : ring) {
        const auto& nd = nice.nodes[j];
        ProfileSet rj(nice.nodes[j].bag, ell);
        if (nd.kind == NiceKind::introduce || nd.kind == NiceKind::forget) {
            for (const auto& p : profiles.at(nd.left).items)
                rj.insert(cover(d, p, nd.bag, ell));
            if (nd.kind == NiceKind::forget && set_contains(z, nd.vertex))
                rj.insert(project(d, nd.vertex, nd.bag, ell));
        } else if (nd.kind == NiceKind::join) {
            for (const auto& p : profiles.at(nd.left).items) rj.insert(p);
            for (const auto& p : profiles.at(nd.right).items) rj.insert(p);
        }
        out.emplace(j, std::move(rj));
    }
    return out;
}

// exact metric dimension via dynamic programming over nice tree
// decompositions with root bag {u}, one run per choice of u
inline TlResult solve_tl(const Graph& g,
                         const std::function<NiceTreeDecomposition(int)>& nice_factory,
                         const TlConfig& cfg = {}) {
    if (g.n == 0) throw std::invalid_argument("solve_tl: empty graph");
    if (!is_connected(g)) throw std::invalid_argument("solve_tl: graph must be connected");
    if (cfg.budget_k && *cfg.budget_k < 1)
        throw std::invalid_argument("solve_tl: budget must be positive");
    if (cfg.s_override && *cfg.s_override < 2)
        throw std::invalid_argument("solve_tl: horizon override must be at least 2");
    TlResult res;
    res.stats.delta = detail::max_degree(g);
    if (g.n == 1) {
        res.found = true;
        res.md = 1;
        res.witness = {0};
        return res;
    }
    DistanceMatrix d = all_pairs_distances(g);
    VertexSet best_w = greedy_resolving_set(g, d);
    if (!is_resolving_set(g, d, best_w))
        throw std::logic_error("solve_tl: greedy upper bound is not resolving");
    int best = static_cast<int>(best_w.size());
    int cap = cfg.budget_k.value_or(INT_MAX);
    std::map<OrderedPartition, std::vector<int>> offs_cache;

    std::vector<int> order;
    for (int v : best_w) order.push_back(v);
    for (int v = 0; v < g.n; ++v)
        if (!set_contains(best_w, v)) order.push_back(v);

    for (int u : order) {
        if (best == 1) break;
        int k_run = std::min(best - 1, cap);
        if (k_run < 1) break;
        NiceTreeDecomposition nice = nice_factory(u);
        if (nice.nodes.empty() || nice.nodes[nice.root].bag != VertexSet{u})
            throw std::invalid_argument("solve_tl: factory must root the decomposition at the chosen vertex");
        std::string why;
        if (!validate_nice(g, nice, &why))
            throw std::invalid_argument("solve_tl: invalid nice decomposition: " + why);
        TdReport rep = validate_td(g, nice.to_td());
        int ell = std::max(1, rep.length);
        unsigned long long s_raw =
            detail::sat_locality(static_cast<unsigned long long>(res.stats.delta),
                                 static_cast<unsigned long long>(ell));
        long long s_derived =
            s_raw > static_cast<unsigned long long>(LLONG_MAX) ? LLONG_MAX
                                                               : static_cast<long long>(s_raw);
        long long s_eff = cfg.s_override.value_or(s_derived);
        // frontiers are empty beyond the tree height; capping keeps the
        // arithmetic small without changing any table
        s_eff = std::min(s_eff, static_cast<long long>(nice.size()));
        s_eff = std::max(s_eff, (long long)2);
        res.stats.ell = ell;
        res.stats.s = s_eff;
        res.stats.s_derived = s_derived;
        res.stats.s_overridden = cfg.s_override.has_value();
        res.stats.width = std::max(res.stats.width, nice.width());
        res.stats.nodes = std::max(res.stats.nodes, nice.size());
        ++res.stats.roots_tried;
        detail::tl_run run(g, d, nice, u, ell, s_eff, k_run, cfg.table_key_limit, &offs_cache);
        std::optional<std::pair<int, VertexSet>> got;
        try {
            got = run.solve();
        } catch (const detail::tl_limit& lim) {
            res.limit_hit = true;
            std::ostringstream os;
            os << "nice node " << lim.node << " (root vertex " << u << ")";
            res.limit_node = os.str();
            res.stats.max_table_keys = std::max(res.stats.max_table_keys, run.max_keys);
            res.stats.total_keys += run.total_keys;
            res.md = -1;
            res.witness.clear();
            return res;
        }
        res.stats.max_table_keys = std::max(res.stats.max_table_keys, run.max_keys);
        res.stats.total_keys += run.total_keys;
        if (got && got->first < best) {
            if (!is_resolving_set(g, d, got->second) ||
                static_cast<int>(got->second.size()) != got->first)
                throw std::logic_error("solve_tl: table produced an invalid witness");
            best = got->first;
            best_w = got->second;
        }
    }
    if (best <= cap) {
        res.found = true;
        res.md = best;
        res.witness = best_w;
    }
    return res;
}

inline TlResult solve_tl(const Graph& g, const TreeDecomposition& td, const TlConfig& cfg = {}) {
    TdReport rep = validate_td(g, td);
    if (!rep.valid) throw std::invalid_argument("solve_tl: invalid tree decomposition: " + rep.reason);
    return solve_tl(g, [&](int u) { return make_nice(g, td, u); }, cfg);
}

// verifies the structural facts the solver relies on: the bag-path bound,
// the tree-distance bound, and both far-pair resolution guarantees
inline LemmaReport check_structural_lemmas(const Graph& g, const NiceTreeDecomposition& nice,
                                           std::optional<long long> s_override = {}) {
    std::string why;
    if (!validate_nice(g, nice, &why))
        throw std::invalid_argument("check_structural_lemmas: " + why);
    LemmaReport rep;
    DistanceMatrix d = all_pairs_distances(g);
    TdReport td_rep = validate_td(g, nice.to_td());
    int ell = std::max(1, td_rep.length);
    unsigned long long a =
        detail::sat_alpha(static_cast<unsigned long long>(detail::max_degree(g)),
                          static_cast<unsigned long long>(ell));
    unsigned long long s_raw = detail::sat_mul(a, 2ull * ell + 1);
    long long s = s_override.value_or(
        s_raw > static_cast<unsigned long long>(LLONG_MAX) ? LLONG_MAX
                                                           : static_cast<long long>(s_raw));
    int m = nice.size();
    int u = nice.nodes[nice.root].bag[0];
    auto note = [&](const std::string& what) {
        ++rep.violations;
        if (rep.items.size() < 50) rep.items.push_back(what);
    };

    // tree adjacency and all tree distances
    std::vector<std::vector<int>> adj(m);
    for (int i = 0; i < m; ++i)
        for (int c : nice.children(i)) {
            adj[i].push_back(c);
            adj[c].push_back(i);
        }
    auto tree_dist_from = [&](int src) {
        std::vector<int> dist(m, -1);
        std::vector<int> q{src};
        dist[src] = 0;
        for (size_t h = 0; h < q.size(); ++h) {
            int x = q[h];
            for (int yv : adj[x])
                if (dist[yv] < 0) {
                    dist[yv] = dist[x] + 1;
                    q.push_back(yv);
                }
        }
        return dist;
    };

    // every root-to-leaf path meets each vertex in a bounded run of bags
    for (int z = 0; z < g.n; ++z) {
        std::vector<int> holds;
        for (int i = 0; i < m; ++i)
            if (set_contains(nice.nodes[i].bag, z)) holds.push_back(i);
        if (holds.empty()) continue;
        // double sweep inside the induced subtree
        auto far_in = [&](int src) {
            std::vector<int> dist(m, -1);
            std::vector<int> q{src};
            dist[src] = 0;
            int best = src;
            for (size_t h = 0; h < q.size(); ++h) {
                int x = q[h];
                if (dist[x] > dist[best]) best = x;
                for (int yv : adj[x])
                    if (dist[yv] < 0 && set_contains(nice.nodes[yv].bag, z)) {
                        dist[yv] = dist[x] + 1;
                        q.push_back(yv);
                    }
            }
            return std::make_pair(best, dist[best]);
        };
        int far1 = far_in(holds[0]).first;
        int d2 = far_in(far1).second;
        ++rep.checked;
        if (static_cast<unsigned long long>(d2) + 1 > a) {
            std::ostringstream os;
            os << "vertex " << z << " spans a bag path of " << (d2 + 1) << " nodes";
            note(os.str());
        }
    }

    // bags far apart in the tree hold vertices far apart in the graph
    std::vector<std::vector<int>> tdist(m);
    for (int i = 0; i < m; ++i) tdist[i] = tree_dist_from(i);
    if (a != ~0ULL) {
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j)
                for (int x : nice.nodes[i].bag)
                    for (int yv : nice.nodes[j].bag) {
                        ++rep.checked;
                        unsigned long long bound =
                            detail::sat_mul(a, static_cast<unsigned long long>(d(x, yv)) + 1);
                        if (bound != ~0ULL &&
                            static_cast<unsigned long long>(tdist[i][j]) > bound - 1) {
                            std::ostringstream os;
                            os << "bags " << i << "," << j << " at tree distance " << tdist[i][j]
                               << " hold vertices " << x << "," << yv << " at graph distance "
                               << d(x, yv);
                            note(os.str());
                        }
                    }
    }

    // subtree vertex sets and depths below each node
    std::vector<std::vector<char>> inside(m);
    for (int i : nice.postorder()) {
        inside[i].assign(g.n, 0);
        for (int v : nice.nodes[i].bag) inside[i][v] = 1;
        for (int c : nice.children(i))
            for (int v = 0; v < g.n; ++v)
                if (inside[c][v]) inside[i][v] = 1;
    }
    auto below_at_least = [&](int i, long long dist) {
        std::vector<int> out;
        std::vector<std::pair<int, long long>> st{{i, 0}};
        while (!st.empty()) {
            auto [x, dep] = st.back();
            st.pop_back();
            if (dep >= dist) out.push_back(x);
            for (int c : nice.children(x)) st.push_back({c, dep + 1});
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    // an introduced vertex and anything far below are resolved by the root
    for (int i = 0; i < m; ++i) {
        if (nice.nodes[i].kind != NiceKind::introduce) continue;
        int v = nice.nodes[i].vertex;
        for (int j : below_at_least(i, s)) {
            for (int x = 0; x < g.n; ++x) {
                if (!inside[j][x] || x == v) continue;
                ++rep.checked;
                if (d(u, x) == d(u, v)) {
                    std::ostringstream os;
                    os << "root " << u << " misses introduced " << v << " vs far " << x;
                    note(os.str());
                }
            }
        }
    }

    // across a join, a pair with one side far below is resolved by the root
    // or by every vertex strictly below that far bag
    for (int i = 0; i < m; ++i) {
        if (nice.nodes[i].kind != NiceKind::join) continue;
        auto kids = nice.children(i);
        for (int side = 0; side < 2; ++side) {
            int ca = kids[side], cb = kids[1 - side];
            for (int j : below_at_least(ca, s - 1)) {
                VertexSet strictly_below;
                for (int x = 0; x < g.n; ++x)
                    if (inside[j][x] && !set_contains(nice.nodes[j].bag, x))
                        strictly_below.push_back(x);
                for (int x : strictly_below) {
                    for (int yv = 0; yv < g.n; ++yv) {
                        if (!inside[cb][yv] || set_contains(nice.nodes[cb].bag, yv)) continue;
                        if (x == yv) continue;
                        ++rep.checked;
                        bool ok = d(u, x) != d(u, yv);
                        if (!ok) {
                            ok = true;
                            for (int v : strictly_below)
                                if (v != x && v != yv && d(v, x) == d(v, yv)) {
                                    ok = false;
                                    break;
                                }
                        }
                        if (!ok) {
                            std::ostringstream os;
                            os << "join " << i << ": far pair " << x << "," << yv
                               << " unresolved by root " << u << " and below-bag vertices";
                            note(os.str());
                        }
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace metrdim
