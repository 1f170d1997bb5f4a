#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "kfactor/errors.hpp"
#include "kfactor/graph_io.hpp"

using namespace kfactor;

namespace {

LabelledGraph random_graph(int n, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.3);
    LabelledGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}

}  // namespace

TEST_CASE("graph6 known strings") {
    CHECK(to_graph6(LabelledGraph(0)) == "?");
    CHECK(to_graph6(LabelledGraph::complete(4)) == "C~");
    CHECK(to_graph6(LabelledGraph::complete(5)) == "D~{");
    // Path 0-1-2-3: bits x(0,1)=1 x(0,2)=0 x(1,2)=1 x(0,3)=0 x(1,3)=0 x(2,3)=1.
    LabelledGraph path(4);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    path.add_edge(2, 3);
    CHECK(to_graph6(path) == "Ch");
    CHECK(from_graph6("Ch") == path);
    CHECK(from_graph6(">>graph6<<C~\n") == LabelledGraph::complete(4));
}

TEST_CASE("graph6 round trip including the long order form") {
    std::mt19937_64 rng(9);
    for (int n : {1, 2, 7, 16, 62, 63, 64, 100}) {
        const auto g = random_graph(n, rng);
        const auto text = to_graph6(g);
        if (n >= 63) CHECK(text[0] == '~');
        CHECK(from_graph6(text) == g);
    }
}

TEST_CASE("graph6 rejects malformed input") {
    CHECK_THROWS_AS(from_graph6(""), invalid_input);
    CHECK_THROWS_AS(from_graph6("C"), invalid_input);
    CHECK_THROWS_AS(from_graph6("C~~"), invalid_input);
    // Nonzero padding bits after the last pair.
    CHECK_THROWS_AS(from_graph6("B_?"), invalid_input);
    CHECK_THROWS_AS(from_graph6("C\x20"), invalid_input);
}

TEST_CASE("edge list round trip and parsing") {
    std::mt19937_64 rng(10);
    const auto g = random_graph(9, rng);
    const auto text = to_edge_list(g);
    CHECK(text.rfind("# n 9\n", 0) == 0);
    CHECK(from_edge_list(text) == g);

    const auto parsed = from_edge_list("# a comment\n0 1\n\n1 2\n");
    CHECK(parsed.order() == 3);
    CHECK(parsed.edge_count() == 2);
    const auto isolated = from_edge_list("# n 6\n0 1\n");
    CHECK(isolated.order() == 6);
    CHECK_THROWS_AS(from_edge_list("0 0\n"), invalid_input);
    CHECK_THROWS_AS(from_edge_list("0 1\n1 0\n"), invalid_input);
    CHECK_THROWS_AS(from_edge_list("0 x\n"), invalid_input);
    CHECK_THROWS_AS(from_edge_list("# n 2\n0 5\n"), invalid_input);
}

TEST_CASE("read_graph_file picks the reader from the extension") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto g6 = dir / "kfactor_io_test.g6";
    const auto el = dir / "kfactor_io_test.txt";
    std::ofstream(g6) << "C~\n";
    std::ofstream(el) << "0 1\n2 3\n";
    CHECK(read_graph_file(g6) == LabelledGraph::complete(4));
    CHECK(read_graph_file(el).edge_count() == 2);
    CHECK_THROWS_AS(read_graph_file(dir / "kfactor_missing_file.g6"), invalid_input);
    std::filesystem::remove(g6);
    std::filesystem::remove(el);
}
