#pragma once

#include <compare>
#include <cstdint>

#include "metrdim/graph.hpp"

namespace metrdim {

namespace detail {

inline unsigned long long checked_mul(unsigned long long a, unsigned long long b) {
    if (a != 0 && b > ~0ULL / a) throw std::overflow_error("integer overflow");
    return a * b;
}

inline unsigned long long checked_add(unsigned long long a, unsigned long long b) {
    if (b > ~0ULL - a) throw std::overflow_error("integer overflow");
    return a + b;
}

inline unsigned long long checked_pow(unsigned long long base, unsigned long long exp) {
    unsigned long long r = 1;
    for (unsigned long long i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

}  // namespace detail

// bound on the number of bags along any path of a nice decomposition that
// all contain one fixed vertex, for max degree delta and length ell
inline unsigned long long alpha(unsigned long long delta, unsigned long long ell) {
    if (delta < 1 || ell < 1) throw std::invalid_argument("alpha: requires delta,ell >= 1");
    using namespace detail;
    return checked_mul(2, checked_add(checked_mul(checked_pow(delta, ell), delta + 2), 4));
}

// width bound for any decomposition of length ell of a graph of max degree delta
inline unsigned long long width_bound(unsigned long long delta, unsigned long long ell) {
    if (delta < 2 || ell < 1) throw std::invalid_argument("width_bound: requires delta >= 2, ell >= 1");
    return detail::checked_mul(delta, detail::checked_pow(delta - 1, ell - 1));
}

// tree-distance horizon beyond which far pairs are resolved by the root vertex
inline unsigned long long locality_radius(unsigned long long delta, unsigned long long ell) {
    return detail::checked_mul(alpha(delta, ell), 2 * ell + 1);
}

// An ordered partition (X_0,...,X_d) of a bag. cls[i] is the class of
// base[i]; class 0 of a realizable projection is never empty.
struct OrderedPartition {
    VertexSet base;
    std::vector<std::uint8_t> cls;
    int depth = 0;

    bool operator==(const OrderedPartition& o) const = default;
    bool operator<(const OrderedPartition& o) const {
        if (base != o.base) return base < o.base;
        if (cls != o.cls) return cls < o.cls;
        return depth < o.depth;
    }

    std::vector<VertexSet> classes() const {
        std::vector<VertexSet> out(depth + 1);
        for (size_t i = 0; i < base.size(); ++i) out[cls[i]].push_back(base[i]);
        return out;
    }
};

// Pr_{v,depth}(x_set): class i holds the bag vertices at distance
// dist(v, x_set) + i from v
inline OrderedPartition project(const DistanceMatrix& d, int v, const VertexSet& x_set, int depth) {
    if (x_set.empty()) throw std::invalid_argument("project: empty set");
    OrderedPartition p;
    p.base = normalized(x_set);
    p.depth = depth;
    int near = d.dist_to_set(v, p.base);
    p.cls.reserve(p.base.size());
    for (int x : p.base) {
        int c = d(v, x) - near;
        if (c > depth)
            throw std::invalid_argument("project: set diameter exceeds partition depth");
        p.cls.push_back(static_cast<std::uint8_t>(c));
    }
    return p;
}

// i + dist(X_i, x) minimized over the classes of the partition: the distance
// from any vertex with this projection to x, minus the distance to the bag
inline int partition_offset(const DistanceMatrix& d, const OrderedPartition& part, int x) {
    int best = -1;
    for (size_t i = 0; i < part.base.size(); ++i) {
        int v = part.cls[i] + d(part.base[i], x);
        if (best < 0 || v < best) best = v;
    }
    if (best < 0) throw std::invalid_argument("partition_offset: partition has no classes");
    return best;
}

inline std::vector<int> partition_offsets(const DistanceMatrix& d, const OrderedPartition& part) {
    std::vector<int> out(d.n);
    for (int x = 0; x < d.n; ++x) out[x] = partition_offset(d, part, x);
    return out;
}

// the unique partition of x_prime induced by `part` across the separator:
// any far vertex projecting onto part's bag as `part` projects onto x_prime
// as the result
inline OrderedPartition cover(const DistanceMatrix& d, const OrderedPartition& part,
                              const VertexSet& x_prime, int depth) {
    if (part.base.empty()) throw std::invalid_argument("cover: partition of an empty set");
    if (x_prime.empty()) throw std::invalid_argument("cover: empty target set");
    OrderedPartition out;
    out.base = normalized(x_prime);
    out.depth = depth;
    std::vector<int> val;
    val.reserve(out.base.size());
    int s = -1;
    for (int x : out.base) {
        int v = partition_offset(d, part, x);
        val.push_back(v);
        if (s < 0 || v < s) s = v;
    }
    out.cls.reserve(out.base.size());
    for (int v : val) {
        if (v - s > depth) throw std::invalid_argument("cover: class index exceeds depth");
        out.cls.push_back(static_cast<std::uint8_t>(v - s));
    }
    return out;
}

// whether every vertex on the far side of the separator with this projection
// tells x and y apart
inline bool resolved_across(const DistanceMatrix& d, const OrderedPartition& part, int x, int y) {
    return partition_offset(d, part, x) != partition_offset(d, part, y);
}

// A deduplicated, lexicographically sorted set of ordered partitions over one
// shared bag.
struct ProfileSet {
    VertexSet base;
    int depth = 0;
    std::vector<OrderedPartition> items;

    ProfileSet() = default;
    ProfileSet(VertexSet b, int d) : base(std::move(b)), depth(d) {}

    bool operator==(const ProfileSet& o) const = default;
    bool operator<(const ProfileSet& o) const {
        if (base != o.base) return base < o.base;
        if (depth != o.depth) return depth < o.depth;
        return items < o.items;
    }

    size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }

    bool contains(const OrderedPartition& p) const {
        return std::binary_search(items.begin(), items.end(), p);
    }

    void insert(const OrderedPartition& p) {
        if (p.base != base || p.depth != depth)
            throw std::invalid_argument("ProfileSet: partition over a different bag");
        auto it = std::lower_bound(items.begin(), items.end(), p);
        if (it == items.end() || !(*it == p)) items.insert(it, p);
    }
};

}  // namespace metrdim
