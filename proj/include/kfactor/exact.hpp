#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "kfactor/asymptotics.hpp"
#include "kfactor/bitgraph.hpp"
#include "kfactor/graphs.hpp"

namespace kfactor {

using BigCount = boost::multiprecision::cpp_int;

enum class CountMethod { dfs, memoized };

std::string_view to_string(CountMethod m);
CountMethod parse_count_method(std::string_view text);

struct CountResult {
    BigCount value;
    CountMethod method = CountMethod::memoized;
    std::uint64_t nodes_visited = 0;
    std::chrono::nanoseconds wall_time{0};
};

struct ExactOptions {
    CountMethod method = CountMethod::memoized;
    // The first branching level is split across this many threads.
    int workers = 1;
};

// Engine ceilings. Requests beyond them throw regime_refused.
inline constexpr int kDfsMaxOrder = 10;
inline constexpr int kMemoMaxOrder = BitGraph::kMaxOrder;
inline constexpr int kFactorisationMaxOrder = 10;
inline constexpr int kMatchingMaxOrder = 12;

/// Number of spanning d-regular subgraphs of host. Branches on the lowest
/// vertex with unmet degree and picks its remaining neighbours among higher
/// vertices in ascending order. The memoized method caches subproblems by
/// residual degree vector (by residual multiset when host is complete).
/// Odd n*d gives 0; d outside [0, min degree] throws invalid_input.
CountResult count_regular_spanning_subgraphs(const LabelledGraph& host, int d, ExactOptions options = {});

/// Number of ordered tuples (F_0, ..., F_k) of edge-disjoint spanning
/// regular factors with deg F_i = d_i covering K_n. F_1..F_k are extracted
/// in turn and F_0 is the forced remainder. n <= kFactorisationMaxOrder.
CountResult count_factorisations(const DegreeSpec& spec, ExactOptions options = {});

/// F(n, k): sequences of k pairwise disjoint perfect matchings of K_n.
/// dfs handles n <= 8 for every k and n = 10 for k <= 3; memoized keys the
/// remaining graph by canonical form and handles n <= 12.
CountResult count_matching_sequences(int n, int k, ExactOptions options = {});

/// R_d(n), the number of labelled d-regular graphs on n vertices.
CountResult count_regular_graphs_exact(int n, int d, ExactOptions options = {});

/// Calls visit once per spanning d-regular subgraph of host, in the same
/// branch order used for counting.
void for_each_regular_spanning_subgraph(const BitGraph& host, int d,
                                        const std::function<void(const BitGraph&)>& visit);

/// Number of perfect matchings of g.
std::uint64_t count_perfect_matchings(const BitGraph& g);

}  // namespace kfactor
