#pragma once

#include <array>
#include <bit>
#include <cstdint>

#include "kfactor/graphs.hpp"

namespace kfactor {

/// Dense graph on at most 16 vertices, one adjacency mask per vertex. This
/// is the working representation of the exact engines.
struct BitGraph {
    static constexpr int kMaxOrder = 16;
    using Mask = std::uint32_t;

    int n = 0;
    std::array<Mask, kMaxOrder> adj{};

    static BitGraph complete(int n) {
        BitGraph g;
        g.n = n;
        const Mask all = (Mask{1} << n) - 1;
        for (int v = 0; v < n; ++v) g.adj[v] = all & ~(Mask{1} << v);
        return g;
    }

    Mask all_vertices() const { return (Mask{1} << n) - 1; }
    bool has_edge(int u, int v) const { return (adj[u] >> v) & 1u; }
    void add_edge(int u, int v) {
        adj[u] |= Mask{1} << v;
        adj[v] |= Mask{1} << u;
    }
    void remove_edge(int u, int v) {
        adj[u] &= ~(Mask{1} << v);
        adj[v] &= ~(Mask{1} << u);
    }
    int degree(int v) const { return std::popcount(adj[v]); }

    friend bool operator==(const BitGraph&, const BitGraph&) = default;
};

// Both throw invalid_input when the order exceeds BitGraph::kMaxOrder.
BitGraph to_bitgraph(const LabelledGraph& g);
LabelledGraph to_labelled(const BitGraph& g);

}  // namespace kfactor
