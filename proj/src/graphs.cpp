#include "kfactor/graphs.hpp"

#include <algorithm>
#include <bit>

#include <fmt/core.h>

#include "kfactor/errors.hpp"

namespace kfactor {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<char> seen(image_.size(), 0);
    for (int x : image_) {
        if (x < 0 || x >= static_cast<int>(image_.size()) || seen[x])
            throw invalid_input("Permutation: image is not a bijection");
        seen[x] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> image(n);
    for (int i = 0; i < n; ++i) image[i] = i;
    return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(image_.size());
    for (int i = 0; i < size(); ++i) inv[image_[i]] = i;
    return Permutation(std::move(inv));
}

Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.size() != q.size()) throw invalid_input("compose: size mismatch");
    std::vector<int> image(p.size());
    for (int i = 0; i < p.size(); ++i) image[i] = p(q(i));
    return Permutation(std::move(image));
}

LabelledGraph::LabelledGraph(int n) {
    if (n < 0 || n > kMaxVertices)
        throw invalid_input(fmt::format("LabelledGraph: order {} outside [0, {}]", n, kMaxVertices));
    n_ = n;
    words_ = (n + 63) / 64;
    bits_.assign(static_cast<std::size_t>(n) * words_, 0);
}

LabelledGraph LabelledGraph::complete(int n) {
    LabelledGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

LabelledGraph LabelledGraph::from_edges(int n, std::span<const Edge> edges) {
    LabelledGraph g(n);
    for (const auto& e : edges) {
        if (e.u < 0 || e.v >= n)
            throw invalid_input(fmt::format("edge {}-{} out of range for n = {}", e.u, e.v, n));
        if (e.u == e.v) throw invalid_input(fmt::format("loop at vertex {}", e.u));
        if (g.has_edge(e.u, e.v)) throw invalid_input(fmt::format("repeated edge {}-{}", e.u, e.v));
        g.add_edge(e.u, e.v);
    }
    return g;
}

void LabelledGraph::add_edge(int u, int v) {
    row_data(u)[v >> 6] |= std::uint64_t{1} << (v & 63);
    row_data(v)[u >> 6] |= std::uint64_t{1} << (u & 63);
}

void LabelledGraph::remove_edge(int u, int v) {
    row_data(u)[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    row_data(v)[u >> 6] &= ~(std::uint64_t{1} << (u & 63));
}

int LabelledGraph::degree(int v) const {
    int d = 0;
    for (auto w : row(v)) d += std::popcount(w);
    return d;
}

std::size_t LabelledGraph::edge_count() const {
    std::size_t twice = 0;
    for (auto w : bits_) twice += std::popcount(w);
    return twice / 2;
}

std::vector<Edge> LabelledGraph::edges() const {
    std::vector<Edge> out;
    for (int u = 0; u < n_; ++u) {
        auto r = row(u);
        for (int w = (u + 1) >> 6; w < words_; ++w) {
            std::uint64_t bits = r[w];
            if (w == (u + 1) >> 6) bits &= ~std::uint64_t{0} << ((u + 1) & 63);
            while (bits) {
                const int v = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

std::vector<int> LabelledGraph::neighbours(int v) const {
    std::vector<int> out;
    auto r = row(v);
    for (int w = 0; w < words_; ++w) {
        std::uint64_t bits = r[w];
        while (bits) {
            out.push_back(w * 64 + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
    return out;
}

int LabelledGraph::regular_degree() const {
    if (n_ == 0) return 0;
    const int d = degree(0);
    for (int v = 1; v < n_; ++v)
        if (degree(v) != d) return -1;
    return d;
}

LabelledGraph complement(const LabelledGraph& g) {
    LabelledGraph c(g.order());
    const int n = g.order();
    for (int u = 0; u < n; ++u) {
        auto src = g.row(u);
        std::uint64_t* dst = c.row_data(u);
        for (int w = 0; w < g.words_per_row(); ++w) {
            std::uint64_t valid = ~std::uint64_t{0};
            const int hi = n - w * 64;
            if (hi < 64) valid = (std::uint64_t{1} << hi) - 1;
            dst[w] = ~src[w] & valid;
        }
        dst[u >> 6] &= ~(std::uint64_t{1} << (u & 63));
    }
    return c;
}

LabelledGraph relabel(const LabelledGraph& g, const Permutation& p) {
    if (p.size() != g.order())
        throw invalid_input(fmt::format("relabel: permutation size {} but graph order {}", p.size(), g.order()));
    LabelledGraph out(g.order());
    for (const auto& e : g.edges()) out.add_edge(p(e.u), p(e.v));
    return out;
}

namespace {

void require_same_order(const LabelledGraph& g, const LabelledGraph& h, const char* what) {
    if (g.order() != h.order())
        throw invalid_input(fmt::format("{}: graph orders differ ({} vs {})", what, g.order(), h.order()));
}

}  // namespace

std::vector<Edge> common_edges(const LabelledGraph& g, const LabelledGraph& h) {
    require_same_order(g, h, "common_edges");
    std::vector<Edge> out;
    for (int u = 0; u < g.order(); ++u) {
        auto a = g.row(u);
        auto b = h.row(u);
        for (int w = 0; w < g.words_per_row(); ++w) {
            std::uint64_t bits = a[w] & b[w];
            while (bits) {
                const int v = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                if (v > u) out.emplace_back(u, v);
            }
        }
    }
    return out;
}

std::size_t common_edge_count(const LabelledGraph& g, const LabelledGraph& h) {
    require_same_order(g, h, "common_edge_count");
    std::size_t twice = 0;
    for (int u = 0; u < g.order(); ++u) {
        auto a = g.row(u);
        auto b = h.row(u);
        for (int w = 0; w < g.words_per_row(); ++w) twice += std::popcount(a[w] & b[w]);
    }
    return twice / 2;
}

bool has_common_p2(const LabelledGraph& g, const LabelledGraph& h) {
    require_same_order(g, h, "has_common_p2");
    for (int u = 0; u < g.order(); ++u) {
        auto a = g.row(u);
        auto b = h.row(u);
        int count = 0;
        for (int w = 0; w < g.words_per_row(); ++w) {
            count += std::popcount(a[w] & b[w]);
            if (count >= 2) return true;
        }
    }
    return false;
}

std::size_t common_p2_count(const LabelledGraph& g, const LabelledGraph& h) {
    require_same_order(g, h, "common_p2_count");
    std::size_t total = 0;
    for (int u = 0; u < g.order(); ++u) {
        auto a = g.row(u);
        auto b = h.row(u);
        std::size_t c = 0;
        for (int w = 0; w < g.words_per_row(); ++w) c += std::popcount(a[w] & b[w]);
        total += c * (c - (c > 0 ? 1 : 0)) / 2;
    }
    return total;
}

LabelledGraph merge_disjoint(const LabelledGraph& g, const LabelledGraph& h) {
    require_same_order(g, h, "merge_disjoint");
    LabelledGraph out = g;
    for (const auto& e : h.edges()) {
        if (g.has_edge(e.u, e.v))
            throw invalid_input(fmt::format("merge_disjoint: shared edge {}-{}", e.u, e.v));
        out.add_edge(e.u, e.v);
    }
    return out;
}

LabelledGraph standard_matching(int n) {
    if (n % 2 != 0) throw invalid_input(fmt::format("standard_matching: odd order {}", n));
    LabelledGraph g(n);
    for (int v = 0; v < n; v += 2) g.add_edge(v, v + 1);
    return g;
}

LabelledGraph circulant_regular(int n, int d) {
    if (d < 0 || d > n - 1)
        throw invalid_input(fmt::format("circulant_regular: degree {} outside [0, {}]", d, n - 1));
    if (d % 2 == 1 && n % 2 == 1)
        throw invalid_input(fmt::format("circulant_regular: odd degree {} on odd order {}", d, n));
    LabelledGraph g(n);
    for (int v = 0; v < n; ++v) {
        for (int s = 1; s <= d / 2; ++s) g.add_edge(v, (v + s) % n);
        if (d % 2 == 1) g.add_edge(v, (v + n / 2) % n);
    }
    return g;
}

}  // namespace kfactor
