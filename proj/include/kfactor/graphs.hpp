#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace kfactor {

/// Undirected edge stored as (min, max).
struct Edge {
    int u = 0;
    int v = 0;

    Edge() = default;
    Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A bijection on {0, ..., n-1}, stored as its image array.
class Permutation {
public:
    Permutation() = default;
    // Throws invalid_input unless image is a bijection on [0, size).
    explicit Permutation(std::vector<int> image);

    static Permutation identity(int n);

    int size() const { return static_cast<int>(image_.size()); }
    int operator()(int i) const { return image_[i]; }
    std::span<const int> image() const { return image_; }

    Permutation inverse() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> image_;
};

/// (p o q)(i) = p(q(i)).
Permutation compose(const Permutation& p, const Permutation& q);

/// Simple undirected graph on vertices 0..n-1 with packed-bit adjacency rows.
/// Symmetric with a zero diagonal at all times.
class LabelledGraph {
public:
    static constexpr int kMaxVertices = 1 << 16;

    LabelledGraph() = default;
    explicit LabelledGraph(int n);

    static LabelledGraph complete(int n);
    // Throws invalid_input on loops, out-of-range endpoints or repeated edges.
    static LabelledGraph from_edges(int n, std::span<const Edge> edges);

    int order() const { return n_; }
    bool has_edge(int u, int v) const {
        return (bits_[row_offset(u) + (v >> 6)] >> (v & 63)) & 1u;
    }
    // Adding an existing edge or removing a missing one is a no-op.
    void add_edge(int u, int v);
    void remove_edge(int u, int v);

    int degree(int v) const;
    std::size_t edge_count() const;
    // Edges in lexicographic order.
    std::vector<Edge> edges() const;
    std::vector<int> neighbours(int v) const;
    // Common degree if regular, otherwise -1. The empty graph on 0 vertices is 0-regular.
    int regular_degree() const;

    std::span<const std::uint64_t> row(int v) const {
        return {bits_.data() + row_offset(v), static_cast<std::size_t>(words_)};
    }
    int words_per_row() const { return words_; }

    friend bool operator==(const LabelledGraph&, const LabelledGraph&) = default;

private:
    std::size_t row_offset(int v) const { return static_cast<std::size_t>(v) * words_; }
    std::uint64_t* row_data(int v) { return bits_.data() + row_offset(v); }

    int n_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> bits_;

    friend LabelledGraph complement(const LabelledGraph&);
};

LabelledGraph complement(const LabelledGraph& g);

/// Edge {u,v} of g becomes {p(u), p(v)}.
LabelledGraph relabel(const LabelledGraph& g, const Permutation& p);

/// Intersection of the edge sets, lexicographically ordered.
std::vector<Edge> common_edges(const LabelledGraph& g, const LabelledGraph& h);
std::size_t common_edge_count(const LabelledGraph& g, const LabelledGraph& h);

/// True iff some vertex meets two or more common edges, i.e. g and h share a
/// path of length two.
bool has_common_p2(const LabelledGraph& g, const LabelledGraph& h);

/// Number of paths of length two made of common edges:
/// sum over v of C(common degree of v, 2).
std::size_t common_p2_count(const LabelledGraph& g, const LabelledGraph& h);

/// Union of two edge-disjoint graphs. A shared edge throws invalid_input
/// naming the first offending edge.
LabelledGraph merge_disjoint(const LabelledGraph& g, const LabelledGraph& h);

// Standard instances used by tests and the CLI.

/// The matching {0,1}, {2,3}, ... on an even number of vertices.
LabelledGraph standard_matching(int n);

/// A d-regular circulant: i ~ i +- 1..d/2, plus i ~ i + n/2 when d is odd
/// (n must then be even). Requires 0 <= d <= n-1.
LabelledGraph circulant_regular(int n, int d);

}  // namespace kfactor
