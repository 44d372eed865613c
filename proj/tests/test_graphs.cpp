#include <doctest.h>

#include <algorithm>

#include <brickplan/graphs.hpp>
#include <brickplan/model.hpp>

#include "fixtures.hpp"

using namespace brickplan;

namespace {

bool has_edge(const std::vector<std::pair<int, int>>& edges, int a, int b) {
    return std::find(edges.begin(), edges.end(), std::make_pair(std::min(a, b), std::max(a, b))) !=
           edges.end();
}

} // namespace

TEST_CASE("contact needs a shared horizontal face and footprint area") {
    AssemblyModel m = parse_model("part brick2x4 4 identity 0 0 0\n"  // 1: base
                                  "part brick2x4 4 identity 0 24 40\n" // 2: on top, half offset
                                  "part brick2x4 4 identity 0 0 80\n"  // 3: beside 1, no touch
                                  "part brick2x2 4 identity 0 48 40\n" // 4: on 2
                                  ,
                                  ModelFormat::Native);
    ContactGraph g = contact_graph(m);
    CHECK(g.edges.size() == 3);
    CHECK(has_edge(g.edges, 1, 2));
    CHECK(has_edge(g.edges, 2, 3)); // 2 overhangs onto 3's top
    CHECK(has_edge(g.edges, 2, 4));
    CHECK_FALSE(has_edge(g.edges, 1, 3)); // side-by-side is not contact
    CHECK(g.neighbors(2).size() == 3);
}

TEST_CASE("contact tolerance covers a small vertical gap only") {
    // Plate tops at y=8; brick floats 0.0/1.0 LDU above it.
    AssemblyModel flush = parse_model("part plate2x2 4 identity 0 0 0\n"
                                      "part brick2x2 4 identity 0 8 0\n",
                                      ModelFormat::Native);
    CHECK(contact_graph(flush).edges.size() == 1);
    AssemblyModel gap = parse_model("part plate2x2 4 identity 0 0 0\n"
                                    "part brick2x2 4 identity 0 9 0\n",
                                    ModelFormat::Native);
    CHECK(contact_graph(gap, 0.5).edges.empty());
    CHECK(contact_graph(gap, 1.0).edges.size() == 1);
}

TEST_CASE("edge-only footprint contact does not count") {
    AssemblyModel m = parse_model("part brick2x2 4 identity 0 0 0\n"
                                  "part brick2x2 4 identity 40 24 0\n", // corner above edge
                                  ModelFormat::Native);
    CHECK(contact_graph(m).edges.empty());
}

TEST_CASE("precedence points from supporting to supported") {
    AssemblyModel m = fixtures::pyramid6();
    PrecedenceGraph g = precedence_graph(m);
    // Plate supports the three feet; feet support the two top bricks.
    auto directed = [&](int below, int above) {
        return std::find(g.edges.begin(), g.edges.end(), std::make_pair(below, above)) !=
               g.edges.end();
    };
    CHECK(directed(1, 2));
    CHECK(directed(1, 3));
    CHECK(directed(1, 4));
    CHECK(directed(2, 5));
    CHECK(directed(3, 5));
    CHECK(directed(3, 6));
    CHECK(directed(4, 6));
    CHECK_FALSE(directed(2, 1));
    CHECK(g.preds[5] == std::vector<int>{2, 3});
    CHECK(g.preds[6] == std::vector<int>{3, 4});
}

TEST_CASE("oversized tolerance can make precedence cyclic") {
    // brick top (24) within eps of plate bottom (0) AND plate top (32) of
    // brick bottom... a 33-LDU eps sees both directions.
    AssemblyModel m = parse_model("part brick1x1 4 identity 0 0 0\n"
                                  "part plate1x1 4 identity 0 24 0\n",
                                  ModelFormat::Native);
    CHECK_NOTHROW(precedence_graph(m, 0.5));
    try {
        precedence_graph(m, 33.0);
        FAIL("expected CycleError");
    } catch (const CycleError& e) {
        REQUIRE(e.cycle.size() >= 3);
        CHECK(e.cycle.front() == e.cycle.back());
    }
}

TEST_CASE("precedence of a tower is the identity chain") {
    AssemblyModel m = fixtures::tower(4);
    PrecedenceGraph g = precedence_graph(m);
    REQUIRE(g.edges.size() == 3);
    for (int i = 1; i <= 3; ++i) CHECK(g.edges[i - 1] == std::make_pair(i, i + 1));
}
