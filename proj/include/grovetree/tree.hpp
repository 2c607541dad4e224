#pragma once

#include <grovetree/errors.hpp>
#include <grovetree/rng.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace grovetree {

using VertexId = std::uint32_t;

/// Undirected edge, stored with u < v.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable labeled tree on vertices 0..n-1.
///
/// Construction validates that the edge list describes a tree: n - 1 edges,
/// ids in range, no self-loops or duplicates, and connected. Adjacency is
/// kept in compressed (CSR) form; neighbor lists preserve edge-list order.
/// A Tree is safe to share between threads.
class Tree {
public:
    /// Throws InvalidArgument unless (n, edges) is a tree. Edges are normalized to u < v.
    static Tree from_edges(std::size_t n, std::vector<Edge> edges) {
        if (n == 0) throw InvalidArgument("tree must have at least one vertex");
        if (n > std::size_t{0xFFFFFFFEu}) throw InvalidArgument("tree too large for 32-bit vertex ids");
        if (edges.size() != n - 1)
            throw InvalidArgument("tree on " + std::to_string(n) + " vertices needs " + std::to_string(n - 1) +
                                  " edges, got " + std::to_string(edges.size()));
        for (auto& e : edges) {
            if (e.u >= n || e.v >= n) throw InvalidArgument("edge endpoint out of range");
            if (e.u == e.v) throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        {
            std::vector<Edge> sorted = edges;
            std::sort(sorted.begin(), sorted.end(),
                      [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InvalidArgument("duplicate edge");
        }
        Tree tree;
        tree.n_ = n;
        tree.edges_ = std::move(edges);
        tree.offsets_.assign(n + 1, 0);
        for (const auto& e : tree.edges_) {
            ++tree.offsets_[e.u + 1];
            ++tree.offsets_[e.v + 1];
        }
        for (std::size_t i = 0; i < n; ++i) tree.offsets_[i + 1] += tree.offsets_[i];
        tree.adjacency_.resize(2 * tree.edges_.size());
        std::vector<std::size_t> fill(tree.offsets_.begin(), tree.offsets_.end() - 1);
        for (const auto& e : tree.edges_) {
            tree.adjacency_[fill[e.u]++] = e.v;
            tree.adjacency_[fill[e.v]++] = e.u;
        }
        // n - 1 edges and connected implies acyclic.
        std::vector<char> seen(n, 0);
        std::vector<VertexId> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const VertexId x = stack.back();
            stack.pop_back();
            for (VertexId y : tree.neighbors(x)) {
                if (!seen[y]) {
                    seen[y] = 1;
                    ++reached;
                    stack.push_back(y);
                }
            }
        }
        if (reached != n) throw InvalidArgument("graph is not connected");
        return tree;
    }

    std::size_t size() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }

    std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

    std::size_t max_degree() const {
        std::size_t best = 0;
        for (std::size_t v = 0; v < n_; ++v) best = std::max(best, degree(static_cast<VertexId>(v)));
        return best;
    }

    bool adjacent(VertexId a, VertexId b) const {
        const auto nb = neighbors(a);
        return std::find(nb.begin(), nb.end(), b) != nb.end();
    }

    friend bool operator==(const Tree& a, const Tree& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
    Tree() = default;

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> adjacency_;
};

// Builders for the small trees that seed most experiments.

inline Tree single_vertex() { return Tree::from_edges(1, {}); }

inline Tree path_tree(std::size_t n) {
    if (n == 0) throw InvalidArgument("path needs at least one vertex");
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
    return Tree::from_edges(n, std::move(edges));
}

inline Tree edge_tree() { return path_tree(2); }

/// Star S_k: center 0 joined to leaves 1..k.
inline Tree star_tree(std::size_t leaves) {
    std::vector<Edge> edges;
    edges.reserve(leaves);
    for (std::size_t i = 1; i <= leaves; ++i) edges.push_back({0, static_cast<VertexId>(i)});
    return Tree::from_edges(leaves + 1, std::move(edges));
}

/// Decodes a Prüfer sequence (length n - 2, entries in [0, n)) into a tree on n vertices.
inline Tree tree_from_pruefer(std::size_t n, std::span<const VertexId> code) {
    if (n < 2) {
        if (!code.empty()) throw InvalidArgument("Prüfer code too long");
        return single_vertex();
    }
    if (code.size() != n - 2) throw InvalidArgument("Prüfer code must have length n - 2");
    std::vector<std::size_t> degree(n, 1);
    for (VertexId x : code) {
        if (x >= n) throw InvalidArgument("Prüfer entry out of range");
        ++degree[x];
    }
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    std::size_t ptr = 0;
    while (degree[ptr] != 1) ++ptr;
    std::size_t leaf = ptr;
    for (VertexId x : code) {
        edges.push_back({static_cast<VertexId>(leaf), x});
        if (--degree[x] == 1 && x < ptr) {
            leaf = x;
        } else {
            ++ptr;
            while (degree[ptr] != 1) ++ptr;
            leaf = ptr;
        }
    }
    edges.push_back({static_cast<VertexId>(leaf), static_cast<VertexId>(n - 1)});
    return Tree::from_edges(n, std::move(edges));
}

/// Uniformly random labeled tree on n vertices.
inline Tree random_tree(std::size_t n, RngStream& rng) {
    if (n <= 2) return n == 1 ? single_vertex() : edge_tree();
    std::vector<VertexId> code(n - 2);
    for (auto& x : code) x = static_cast<VertexId>(rng.below(n));
    return tree_from_pruefer(n, code);
}

}  // namespace grovetree
