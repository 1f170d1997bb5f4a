#include "kfactor/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/core.h>

#include "kfactor/errors.hpp"

namespace kfactor {

namespace {

constexpr int kSmallOrderLimit = 62;
constexpr int kMediumOrderLimit = 258047;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

int parse_int(std::string_view token, std::string_view line) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw invalid_input(fmt::format("edge list: cannot parse '{}' in line '{}'", token, line));
    return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

std::string to_graph6(const LabelledGraph& g) {
    const int n = g.order();
    if (n > kMediumOrderLimit) throw invalid_input(fmt::format("graph6: order {} not supported", n));
    std::string out;
    if (n <= kSmallOrderLimit) {
        out.push_back(static_cast<char>(n + 63));
    } else {
        out.push_back(static_cast<char>(126));
        out.push_back(static_cast<char>(((n >> 12) & 63) + 63));
        out.push_back(static_cast<char>(((n >> 6) & 63) + 63));
        out.push_back(static_cast<char>((n & 63) + 63));
    }
    int acc = 0;
    int filled = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            acc = (acc << 1) | (g.has_edge(i, j) ? 1 : 0);
            if (++filled == 6) {
                out.push_back(static_cast<char>(acc + 63));
                acc = 0;
                filled = 0;
            }
        }
    }
    if (filled > 0) out.push_back(static_cast<char>((acc << (6 - filled)) + 63));
    return out;
}

LabelledGraph from_graph6(std::string_view text) {
    text = trim(text);
    constexpr std::string_view header = ">>graph6<<";
    if (text.starts_with(header)) text.remove_prefix(header.size());
    if (text.empty()) throw invalid_input("graph6: empty input");
    for (char c : text)
        if (c < 63 || c > 126) throw invalid_input(fmt::format("graph6: invalid byte {}", static_cast<int>(c)));

    std::size_t pos = 0;
    int n = 0;
    if (text[0] != 126) {
        n = text[0] - 63;
        pos = 1;
    } else {
        if (text.size() >= 2 && text[1] == 126)
            throw invalid_input("graph6: orders above 258047 are not supported");
        if (text.size() < 4) throw invalid_input("graph6: truncated order field");
        n = ((text[1] - 63) << 12) | ((text[2] - 63) << 6) | (text[3] - 63);
        pos = 4;
    }
    const std::size_t bits = static_cast<std::size_t>(n) * (n - (n > 0 ? 1 : 0)) / 2;
    const std::size_t bytes = (bits + 5) / 6;
    if (text.size() - pos != bytes)
        throw invalid_input(fmt::format("graph6: expected {} data bytes for n = {}, got {}", bytes, n,
                                        text.size() - pos));

    LabelledGraph g(n);
    std::size_t k = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++k) {
            const int byte = text[pos + k / 6] - 63;
            if ((byte >> (5 - k % 6)) & 1) g.add_edge(i, j);
        }
    }
    if (bits % 6 != 0) {
        const int last = text.back() - 63;
        if (last & ((1 << (6 - bits % 6)) - 1)) throw invalid_input("graph6: nonzero padding bits");
    }
    return g;
}

std::string to_edge_list(const LabelledGraph& g) {
    std::string out = fmt::format("# n {}\n", g.order());
    for (const auto& e : g.edges()) out += fmt::format("{} {}\n", e.u, e.v);
    return out;
}

LabelledGraph from_edge_list(std::string_view text) {
    int declared = -1;
    int max_index = -1;
    std::vector<Edge> edges;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto tokens = split_ws(line.substr(1));
            if (tokens.size() == 2 && tokens[0] == "n") {
                if (declared >= 0) throw invalid_input("edge list: order declared twice");
                declared = parse_int(tokens[1], line);
                if (declared < 0) throw invalid_input("edge list: negative order");
            }
            continue;
        }
        auto tokens = split_ws(line);
        if (tokens.size() != 2) throw invalid_input(fmt::format("edge list: expected 'u v', got '{}'", line));
        const int u = parse_int(tokens[0], line);
        const int v = parse_int(tokens[1], line);
        if (u < 0 || v < 0) throw invalid_input(fmt::format("edge list: negative vertex in '{}'", line));
        max_index = std::max({max_index, u, v});
        edges.emplace_back(u, v);
    }
    const int n = declared >= 0 ? declared : max_index + 1;
    return LabelledGraph::from_edges(n, edges);
}

LabelledGraph read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input(fmt::format("cannot open graph file '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto ext = path.extension().string();
    if (ext == ".txt" || ext == ".edges" || ext == ".el") return from_edge_list(text);
    // graph6 files may hold several graphs; take the first line.
    const auto nl = text.find('\n');
    return from_graph6(std::string_view(text).substr(0, nl));
}

}  // namespace kfactor
