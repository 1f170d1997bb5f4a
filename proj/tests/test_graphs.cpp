#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "kfactor/errors.hpp"
#include "kfactor/graphs.hpp"

using namespace kfactor;

namespace {

LabelledGraph random_graph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    LabelledGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}

Permutation random_perm(int n, std::mt19937_64& rng) {
    std::vector<int> image(n);
    std::iota(image.begin(), image.end(), 0);
    std::shuffle(image.begin(), image.end(), rng);
    return Permutation(image);
}

LabelledGraph graph(int n, std::initializer_list<Edge> edges) {
    std::vector<Edge> list(edges);
    return LabelledGraph::from_edges(n, list);
}

std::vector<int> degree_multiset(const LabelledGraph& g) {
    std::vector<int> d;
    for (int v = 0; v < g.order(); ++v) d.push_back(g.degree(v));
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace

TEST_CASE("edges are canonical and iterate lexicographically") {
    CHECK(Edge(3, 1) == Edge(1, 3));
    const auto g = graph(5, {{4, 0}, {2, 1}, {0, 1}, {3, 2}});
    const std::vector<Edge> expected{{0, 1}, {0, 4}, {1, 2}, {2, 3}};
    CHECK(g.edges() == expected);
    CHECK(g.edge_count() == 4);
}

TEST_CASE("from_edges rejects loops, repeats and out-of-range vertices") {
    CHECK_THROWS_AS(graph(3, {{1, 1}}), invalid_input);
    CHECK_THROWS_AS(graph(3, {{0, 1}, {1, 0}}), invalid_input);
    CHECK_THROWS_AS(graph(3, {{0, 3}}), invalid_input);
    CHECK_THROWS_AS(Permutation({0, 0, 1}), invalid_input);
}

TEST_CASE("complement examples") {
    CHECK(complement(LabelledGraph::complete(4)) == LabelledGraph(4));
    const auto pm = graph(4, {{0, 1}, {2, 3}});
    const auto c4 = complement(pm);
    CHECK(c4.regular_degree() == 2);
    CHECK(c4 == graph(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
    for (int v = 0; v < 4; ++v) CHECK(c4.degree(v) == 3 - pm.degree(v));
}

TEST_CASE("complement is an involution and merges back to K_n") {
    std::mt19937_64 rng(5);
    for (int n : {1, 2, 5, 16, 63, 64, 65, 130}) {
        const auto g = random_graph(n, 0.4, rng);
        CHECK(complement(complement(g)) == g);
        CHECK(merge_disjoint(g, complement(g)) == LabelledGraph::complete(n));
        CHECK(common_edges(g, complement(g)).empty());
    }
}

TEST_CASE("relabel examples and properties") {
    std::mt19937_64 rng(6);
    const auto g = random_graph(12, 0.5, rng);
    CHECK(relabel(g, Permutation::identity(12)) == g);
    const auto path = graph(3, {{0, 1}, {1, 2}});
    CHECK(relabel(path, Permutation({2, 1, 0})) == path);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_perm(12, rng);
        const auto q = random_perm(12, rng);
        CHECK(degree_multiset(relabel(g, p)) == degree_multiset(g));
        CHECK(relabel(g, compose(p, q)) == relabel(relabel(g, q), p));
        CHECK(relabel(relabel(g, p), p.inverse()) == g);
    }
    CHECK_THROWS_AS(relabel(g, Permutation::identity(5)), invalid_input);
}

TEST_CASE("common_edges examples") {
    const auto pm = graph(4, {{0, 1}, {2, 3}});
    const auto cycle = graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const std::vector<Edge> expected{{0, 1}, {2, 3}};
    CHECK(common_edges(pm, cycle) == expected);
    CHECK(common_edges(cycle, cycle) == cycle.edges());
    CHECK(common_edge_count(pm, cycle) == 2);
    CHECK_THROWS_AS(common_edges(pm, LabelledGraph(5)), invalid_input);
}

TEST_CASE("has_common_p2 examples") {
    const auto triangle = graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(has_common_p2(triangle, triangle));
    CHECK(common_p2_count(triangle, triangle) == 3);
    CHECK_FALSE(has_common_p2(triangle, LabelledGraph(3)));
    const auto pm = graph(4, {{0, 1}, {2, 3}});
    const auto cycle = graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    CHECK_FALSE(has_common_p2(pm, cycle));
    CHECK(common_p2_count(pm, cycle) == 0);
    CHECK(has_common_p2(cycle, cycle));
    CHECK(common_p2_count(cycle, cycle) == 4);
}

TEST_CASE("merge_disjoint examples") {
    const auto pm = graph(4, {{0, 1}, {2, 3}});
    CHECK(merge_disjoint(pm, complement(pm)) == LabelledGraph::complete(4));
    CHECK(merge_disjoint(pm, LabelledGraph(4)) == pm);
    CHECK_THROWS_WITH_AS(merge_disjoint(pm, graph(4, {{2, 3}})), doctest::Contains("2-3"), invalid_input);
    const auto c1 = circulant_regular(10, 2);
    const auto shifted = relabel(circulant_regular(10, 2), Permutation({0, 3, 6, 9, 2, 5, 8, 1, 4, 7}));
    REQUIRE(common_edge_count(c1, shifted) == 0);
    CHECK(merge_disjoint(c1, shifted).regular_degree() == 4);
}

TEST_CASE("mean overlap over all relabellings") {
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 7; ++n) {
        const auto g = random_graph(n, 0.5, rng);
        std::vector<int> image(n);
        std::iota(image.begin(), image.end(), 0);
        std::uint64_t total = 0, perms = 0;
        do {
            total += common_edge_count(g, relabel(g, Permutation(image)));
            ++perms;
        } while (std::next_permutation(image.begin(), image.end()));
        const std::uint64_t m = g.edge_count();
        const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        CHECK(total * pairs == perms * m * m);
    }
}

TEST_CASE("standard regular graphs") {
    CHECK(standard_matching(6).regular_degree() == 1);
    CHECK_THROWS_AS(standard_matching(5), invalid_input);
    for (int n = 5; n <= 12; ++n)
        for (int d = 0; d < n; ++d) {
            if (d % 2 == 1 && n % 2 == 1) {
                CHECK_THROWS_AS(circulant_regular(n, d), invalid_input);
                continue;
            }
            CHECK(circulant_regular(n, d).regular_degree() == d);
        }
}
