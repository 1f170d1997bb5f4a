#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "kfactor/graphs.hpp"

namespace kfactor {

// graph6: N(n) followed by the upper triangle x(0,1), x(0,2), x(1,2),
// x(0,3), ... packed six bits per byte, most significant bit first, padded
// with zeros, each byte offset by 63. N(n) is one byte n+63 for n <= 62,
// otherwise byte 126 and three 6-bit bytes (n <= 258047). An optional
// ">>graph6<<" header is accepted on input and never written.
std::string to_graph6(const LabelledGraph& g);
LabelledGraph from_graph6(std::string_view text);

// Edge list: an optional "# n <N>" line fixes the order, other lines that
// start with '#' and blank lines are ignored, and every remaining line holds
// one "u v" pair of 0-based vertex indices. Without the order line n is one
// more than the largest index. The writer emits the order line followed by
// the edges in lexicographic order, one per line, "\n"-terminated.
std::string to_edge_list(const LabelledGraph& g);
LabelledGraph from_edge_list(std::string_view text);

/// Reads a graph file, choosing the edge-list reader for ".txt"/".edges"/".el"
/// files and graph6 otherwise.
LabelledGraph read_graph_file(const std::filesystem::path& path);

}  // namespace kfactor
