#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "kfactor/bitgraph.hpp"

namespace kfactor {

struct CanonicalForm {
    // Adjacency rows of the relabelled graph; isomorphic inputs give equal rows.
    std::array<BitGraph::Mask, BitGraph::kMaxOrder> rows{};
    // labelling[v] is the canonical label of input vertex v.
    std::vector<int> labelling;
    // Leaves of the search tree that were fully evaluated.
    std::size_t leaves = 0;
};

/// Canonical labelling by individualisation and equitable refinement, with
/// pruning by the automorphisms discovered along the way. Ties among leaves
/// are broken by the lexicographically largest row sequence.
CanonicalForm canonical_form(const BitGraph& g);

}  // namespace kfactor
