#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "palab/canonical.hpp"
#include "palab/graph_io.hpp"
#include "palab/multigraph.hpp"

#include "oracles.hpp"

using namespace palab;

namespace {

Multigraph triangle() { return oracles::graph_from_edges(3, {{1, 2}, {2, 3}, {1, 3}}); }

Multigraph k4() {
    return oracles::graph_from_edges(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
}

}  // namespace

TEST_CASE("degree basics") {
    Multigraph g(2, 2);
    g.add_edge(2, 1);
    g.add_edge(2, 1);
    g.finalize();
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(2) == 2);
    CHECK(g.multiplicity(1, 2) == 2);

    Multigraph g1(1);
    g1.finalize();
    CHECK(g1.degree(1) == 0);  // G_1 is a vertex with no edge

    CHECK_THROWS_AS(g.degree(3), std::out_of_range);
}

TEST_CASE("degree as of an edge point") {
    // Rounds: vertex 2 -> 1, 1; vertex 3 -> 2, 1.
    Multigraph g(3, 2);
    g.add_edge(2, 1);
    g.add_edge(2, 1);
    g.add_edge(3, 2);
    g.add_edge(3, 1);
    g.finalize();
    CHECK(g.degree(1, EdgePoint{2, 1}) == 0);
    CHECK(g.degree(1, EdgePoint{2, 2}) == 1);
    CHECK(g.degree(2, EdgePoint{3, 1}) == 2);
    CHECK(g.degree(2, EdgePoint{3, 2}) == 3);
    CHECK(g.degree(1, EdgePoint{3, 2}) == 2);
    CHECK(g.degree(1) == 3);
}

TEST_CASE("no self loops") {
    Multigraph g(2, 1);
    CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
}

TEST_CASE("ball basics") {
    SECTION("triangle radius 1 is the whole triangle") {
        auto b = ball(triangle(), 1, 1);
        CHECK(b.vertices.size() == 3);
        CHECK(b.edges.size() == 3);
    }
    SECTION("path: B_1(1) is the first edge") {
        auto g = oracles::graph_from_edges(3, {{1, 2}, {2, 3}});
        auto b = ball(g, 1, 1);
        CHECK(b.vertices.size() == 2);
        REQUIRE(b.edges.size() == 1);
        CHECK(b.dist.at(2) == 1);
    }
    SECTION("radius 0 is the bare root") {
        auto b = ball(triangle(), 2, 0);
        CHECK(b.vertices == std::vector<Vertex>{2});
        CHECK(b.edges.empty());
    }
}

TEST_CASE("ball monotone in radius and stabilizes at the component") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracles::random_multigraph(rng, 2, 8, 2, 0.3);
        Vertex v = (Vertex)(rng.uniform_int(g.n()) + 1);
        std::size_t prev = 0;
        for (int r = 0; r <= g.n() + 1; ++r) {
            auto b = ball(g, v, r);
            CHECK(b.vertices.size() >= prev);
            prev = b.vertices.size();
            for (const auto& [w, d] : b.dist) {
                (void)w;
                CHECK(d <= r);
            }
        }
        auto full = ball(g, v, g.n());
        auto more = ball(g, v, g.n() + 3);
        CHECK(full.vertices.size() == more.vertices.size());
    }
}

TEST_CASE("ball distances satisfy the BFS triangle property") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracles::random_multigraph(rng, 2, 8, 2, 0.4);
        Vertex v = (Vertex)(rng.uniform_int(g.n()) + 1);
        auto b = ball(g, v, 3);
        for (const auto& [x, y, mult] : b.edges) {
            (void)mult;
            CHECK(std::abs(b.dist.at(x) - b.dist.at(y)) <= 1);
        }
    }
}

TEST_CASE("cycle enumeration on fixed graphs") {
    SECTION("triangle") {
        auto cycles = enumerate_cycles(triangle(), 3);
        REQUIRE(cycles.size() == 1);
        CHECK(cycles[0].length() == 3);
    }
    SECTION("trees have no cycles") {
        auto g = oracles::graph_from_edges(5, {{1, 2}, {2, 3}, {2, 4}, {4, 5}});
        CHECK(enumerate_cycles(g, 10).empty());
    }
    SECTION("K4 against the brute-force subset oracle") {
        auto got = enumerate_cycles(k4(), 4);
        auto expected = oracles::brute_force_cycles(k4(), 4);
        long got3 = 0, got4 = 0;
        for (const auto& c : got) (c.length() == 3 ? got3 : got4) += 1;
        long exp3 = 0, exp4 = 0;
        for (const auto& c : expected) (c.size() == 3 ? exp3 : exp4) += 1;
        CHECK(got3 == exp3);
        CHECK(got4 == exp4);
        CHECK(got3 == 4);
        CHECK(got4 == 3);
    }
    SECTION("parallel pair reported once with its multiplicity") {
        Multigraph g(2, 3);
        for (int i = 0; i < 3; ++i) g.add_edge(2, 1);
        g.finalize();
        auto cycles = enumerate_cycles(g, 4);
        REQUIRE(cycles.size() == 1);
        CHECK(cycles[0].length() == 2);
        CHECK(cycles[0].multiplicity == 3);
    }
}

TEST_CASE("cycle enumeration matches the brute-force oracle on random graphs") {
    Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        auto g = oracles::random_multigraph(rng, 3, 7, 1, 0.45);
        for (int max_len = 3; max_len <= 6; ++max_len) {
            auto got = enumerate_cycles(g, max_len);
            long simple = 0;
            for (const auto& c : got)
                if (c.length() >= 3) ++simple;
            CHECK(simple == (long)oracles::brute_force_cycles(g, max_len).size());
        }
    }
}

TEST_CASE("cycle counts are isomorphism-equivariant") {
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracles::random_multigraph(rng, 3, 7, 2, 0.4);
        auto perm = oracles::random_permutation(rng, g.n());
        auto h = g.relabeled(perm);
        auto cg = enumerate_cycles(g, 5);
        auto ch = enumerate_cycles(h, 5);
        REQUIRE(cg.size() == ch.size());
        std::multiset<std::pair<int, int>> sg, sh;
        for (const auto& c : cg) sg.insert({c.length(), c.multiplicity});
        for (const auto& c : ch) sh.insert({c.length(), c.multiplicity});
        CHECK(sg == sh);
    }
}

TEST_CASE("triangle counting agrees with the trace oracle") {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = oracles::random_multigraph(rng, 10, 50, 1, 0.15);
        long via_enum = 0;
        for (const auto& c : enumerate_cycles(g, 3))
            if (c.length() == 3) ++via_enum;
        CHECK(via_enum == oracles::trace_triangle_count(g));
        CHECK(triangle_count(g) == oracles::trace_triangle_count(g));
    }
}

TEST_CASE("graph text format round-trips bit-exactly") {
    Rng rng(70);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = oracles::random_multigraph(rng, 2, 9, 3, 0.5);
        g.meta().model = "classical";
        g.meta().alpha = rng.uniform();
        g.meta().seed = 0xabcdef1234 + trial;
        std::string text = write_graph_text(g);
        Multigraph h = read_graph_text(text);
        CHECK(write_graph_text(h) == text);
        CHECK(h.n() == g.n());
        CHECK(h.meta().alpha == g.meta().alpha);
        CHECK(h.meta().seed == g.meta().seed);
    }
}

TEST_CASE("dot export") {
    std::string dot = to_dot(triangle());
    CHECK(dot.find("graph G {") == 0);
    CHECK(dot.find("1 -- 2;") != std::string::npos);
    Multigraph big(2000, 1);
    big.finalize();
    CHECK_THROWS_AS(to_dot(big), std::invalid_argument);
}

TEST_CASE("relabeling preserves degree multiset") {
    Rng rng(91);
    auto g = oracles::random_multigraph(rng, 4, 8, 2, 0.5);
    auto perm = oracles::random_permutation(rng, g.n());
    auto h = g.relabeled(perm);
    std::multiset<long> dg, dh;
    for (Vertex v = 1; v <= g.n(); ++v) {
        dg.insert(g.degree(v));
        dh.insert(h.degree(v));
    }
    CHECK(dg == dh);
}
