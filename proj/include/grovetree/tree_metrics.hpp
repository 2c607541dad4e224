#pragma once

#include <grovetree/tree.hpp>
#include <grovetree/wide_int.hpp>

#include <cstdint>
#include <vector>

namespace grovetree {

/// Hop counts from `source` to every vertex (BFS).
inline std::vector<std::uint32_t> distances_from(const Tree& tree, VertexId source) {
    if (source >= tree.size()) throw InvalidArgument("source vertex out of range");
    constexpr auto kUnseen = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> dist(tree.size(), kUnseen);
    std::vector<VertexId> queue;
    queue.reserve(tree.size());
    queue.push_back(source);
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId x = queue[head];
        for (VertexId y : tree.neighbors(x)) {
            if (dist[y] == kUnseen) {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    return dist;
}

/// Dense all-pairs hop counts, row-major.
class DistanceMatrix {
public:
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0) {}

    std::size_t size() const { return n_; }
    std::uint32_t operator()(std::size_t u, std::size_t v) const { return d_[u * n_ + v]; }
    std::uint32_t& operator()(std::size_t u, std::size_t v) { return d_[u * n_ + v]; }

private:
    std::size_t n_;
    std::vector<std::uint32_t> d_;
};

inline DistanceMatrix all_distances(const Tree& tree) {
    DistanceMatrix m(tree.size());
    for (std::size_t s = 0; s < tree.size(); ++s) {
        const auto row = distances_from(tree, static_cast<VertexId>(s));
        for (std::size_t v = 0; v < tree.size(); ++v) m(s, v) = row[v];
    }
    return m;
}

inline std::vector<std::size_t> degrees(const Tree& tree) {
    std::vector<std::size_t> out(tree.size());
    for (std::size_t v = 0; v < tree.size(); ++v) out[v] = tree.degree(static_cast<VertexId>(v));
    return out;
}

/// Longest hop count in the tree (two BFS sweeps).
inline std::uint32_t diameter(const Tree& tree) {
    auto first = distances_from(tree, 0);
    const auto far = static_cast<VertexId>(std::max_element(first.begin(), first.end()) - first.begin());
    const auto second = distances_from(tree, far);
    return *std::max_element(second.begin(), second.end());
}

/// Rooted view of a tree giving, for every edge, the sizes of both components left
/// after the edge is deleted. Built in O(n) from one DFS rooted at vertex 0.
class SplitSizes {
public:
    explicit SplitSizes(const Tree& tree)
        : n_(tree.size()), parent_(tree.size(), kNoParent), depth_(tree.size(), 0), subtree_(tree.size(), 1) {
        std::vector<VertexId> order;
        order.reserve(n_);
        order.push_back(0);
        for (std::size_t head = 0; head < order.size(); ++head) {
            const VertexId x = order[head];
            for (VertexId y : tree.neighbors(x)) {
                if (y != parent_[x]) {
                    parent_[y] = x;
                    depth_[y] = depth_[x] + 1;
                    order.push_back(y);
                }
            }
        }
        for (std::size_t i = order.size(); i-- > 1;) subtree_[parent_[order[i]]] += subtree_[order[i]];
    }

    /// Size of the component containing v after deleting edge {u, v}.
    std::size_t component_size(VertexId u, VertexId v) const {
        if (u < n_ && v < n_) {
            if (parent_[v] == u) return subtree_[v];
            if (parent_[u] == v) return n_ - subtree_[u];
        }
        throw InvalidArgument("vertices are not adjacent");
    }

    std::size_t size() const { return n_; }
    VertexId parent(VertexId v) const { return parent_[v]; }
    std::uint32_t depth(VertexId v) const { return depth_[v]; }
    std::size_t subtree_size(VertexId v) const { return subtree_[v]; }

    static constexpr VertexId kNoParent = static_cast<VertexId>(-1);

private:
    std::size_t n_;
    std::vector<VertexId> parent_;
    std::vector<std::uint32_t> depth_;
    std::vector<std::size_t> subtree_;
};

inline SplitSizes split_sizes(const Tree& tree) { return SplitSizes(tree); }

/// Wiener index in O(n): each edge lies on s * (n - s) shortest paths.
inline Int128 wiener_fast(const Tree& tree) {
    const SplitSizes split(tree);
    const auto n = static_cast<Int128>(tree.size());
    Int128 total = 0;
    for (std::size_t v = 1; v < tree.size(); ++v) {
        const auto s = static_cast<Int128>(split.subtree_size(static_cast<VertexId>(v)));
        total = checked_add(total, checked_mul(s, n - s));
    }
    return total;
}

/// Wiener index by summing BFS distances from every source. O(n^2); oracle only.
inline Int128 wiener_bfs(const Tree& tree) {
    Int128 twice = 0;
    for (std::size_t s = 0; s < tree.size(); ++s) {
        for (std::uint32_t d : distances_from(tree, static_cast<VertexId>(s))) twice = checked_add(twice, d);
    }
    return twice / 2;
}

/// Mean shortest-path length W / C(n, 2). Undefined for a single vertex.
inline double mean_path_length(const Tree& tree) {
    if (tree.size() < 2) throw InvalidArgument("mean path length is undefined for a single vertex");
    const double n = static_cast<double>(tree.size());
    return to_double(wiener_fast(tree)) / (n * (n - 1) / 2.0);
}

}  // namespace grovetree
