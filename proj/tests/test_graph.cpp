#include <catch2/catch.hpp>

#include <future>
#include <set>

#include "gts/graph.hpp"
#include "gts/json_io.hpp"
#include "support.hpp"

using namespace gts;

TEST_CASE("empty graph") {
    Graph g;
    CHECK(g.node_count() == 0);
    CHECK(g.edge_count() == 0);
    CHECK(g.empty());
    CHECK(g == Graph::build({}, {}));
}

TEST_CASE("two nodes one edge") {
    Graph g = Graph::build({node("a", "Wolf"), node("b", "Side")},
                           {edge("e1", "a", "b", "is_at")});
    REQUIRE(g.node_count() == 2);
    REQUIRE(g.edge_count() == 1);
    CHECK(g.find_node("a")->label == "Wolf");
    CHECK(g.find_node("b")->label == "Side");
    CHECK(g.find_node("z") == nullptr);
    const Edge* e = g.find_edge("e1");
    REQUIRE(e != nullptr);
    CHECK(e->src == "a");
    CHECK(e->tgt == "b");
    CHECK(e->label == "is_at");

    auto a = *g.node_index("a");
    auto b = *g.node_index("b");
    CHECK(g.out_degree(a) == 1);
    CHECK(g.in_degree(a) == 0);
    CHECK(g.out_degree(b) == 0);
    CHECK(g.in_degree(b) == 1);
}

TEST_CASE("dangling edge reference is rejected") {
    try {
        Graph::build({node("a")}, {edge("e1", "a", "z")});
        FAIL("expected GraphBuildError");
    } catch (const GraphBuildError& e) {
        CHECK(e.kind() == GraphBuildError::Kind::DanglingEdgeRef);
    }
    try {
        Graph::build({node("a")}, {edge("e1", "z", "a")});
        FAIL("expected GraphBuildError");
    } catch (const GraphBuildError& e) {
        CHECK(e.kind() == GraphBuildError::Kind::DanglingEdgeRef);
    }
}

TEST_CASE("duplicate ids are rejected") {
    try {
        Graph::build({node("a"), node("a", "X")}, {});
        FAIL("expected GraphBuildError");
    } catch (const GraphBuildError& e) {
        CHECK(e.kind() == GraphBuildError::Kind::DuplicateId);
    }
    try {
        Graph::build({node("a"), node("b")}, {edge("e", "a", "b"), edge("e", "b", "a")});
        FAIL("expected GraphBuildError");
    } catch (const GraphBuildError& e) {
        CHECK(e.kind() == GraphBuildError::Kind::DuplicateId);
    }
}

TEST_CASE("node and edge id namespaces are separate") {
    Graph g = Graph::build({node("x")}, {edge("x", "x", "x")});
    CHECK(g.node_count() == 1);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("elements are canonically sorted by id") {
    Graph g = Graph::build({node("b"), node("a"), node("c")},
                           {edge("e2", "a", "b"), edge("e1", "c", "a")});
    CHECK(g.nodes()[0].id == "a");
    CHECK(g.nodes()[1].id == "b");
    CHECK(g.nodes()[2].id == "c");
    CHECK(g.edges()[0].id == "e1");
    CHECK(g.edges()[1].id == "e2");

    Graph h = Graph::build({node("c"), node("b"), node("a")},
                           {edge("e1", "c", "a"), edge("e2", "a", "b")});
    CHECK(g == h);
    CHECK(g.value_hash() == h.value_hash());
}

TEST_CASE("value hash distinguishes labels and ids") {
    Graph g1 = Graph::build({node("a", "X")}, {});
    Graph g2 = Graph::build({node("a", "Y")}, {});
    Graph g3 = Graph::build({node("b", "X")}, {});
    Graph g4 = Graph::build({node("a")}, {});
    Graph g5 = Graph::build({node("a", "")}, {});
    CHECK(g1.value_hash() != g2.value_hash());
    CHECK(g1.value_hash() != g3.value_hash());
    CHECK(g1.value_hash() != g4.value_hash());
    CHECK(g4.value_hash() != g5.value_hash());
}

TEST_CASE("certificate of the empty graph is a fixed constant") {
    Certificate c1 = Graph().certificate();
    Certificate c2 = Graph::build({}, {}).certificate();
    CHECK(c1 == c2);
    CHECK(c1.refinement_rounds == 3);
    CHECK(c1.bytes != std::array<std::uint64_t, 2>{0, 0});
}

TEST_CASE("certificate is invariant under id renaming") {
    test::Rng rng(7);
    for (int i = 0; i < 300; ++i) {
        Graph g = test::random_graph(rng, 8, 10);
        Graph h = test::permuted_copy(rng, g);
        CHECK(g.certificate() == h.certificate());
    }
}

TEST_CASE("certificate separates easy non-isomorphic pairs") {
    // triangle cycle vs 3-node path
    Graph tri = Graph::build({node("a"), node("b"), node("c")},
                             {edge("e1", "a", "b"), edge("e2", "b", "c"), edge("e3", "c", "a")});
    Graph path = Graph::build({node("a"), node("b"), node("c")},
                              {edge("e1", "a", "b"), edge("e2", "b", "c"), edge("e3", "a", "b")});
    CHECK(tri.certificate() != path.certificate());

    Graph one = Graph::build({node("a", "X")}, {});
    Graph two = Graph::build({node("a", "X"), node("b", "X")}, {});
    CHECK(one.certificate() != two.certificate());
}

TEST_CASE("refinement round count follows the size bound") {
    Graph small = Graph::build({node("a")}, {});
    CHECK(small.certificate().refinement_rounds == 3);
    std::vector<Node> many;
    for (int i = 0; i < 40; ++i) many.push_back(node("n" + std::to_string(i)));
    Graph big = Graph::build(std::move(many), {});
    // bit_width(41) == 6
    CHECK(big.certificate().refinement_rounds == 6);
}

TEST_CASE("certificate caching is safe under concurrent first access") {
    test::Rng rng(11);
    Graph g = test::random_graph(rng, 8, 12);
    auto f1 = std::async(std::launch::async, [&] { return g.certificate(); });
    auto f2 = std::async(std::launch::async, [&] { return g.certificate(); });
    CHECK(f1.get() == f2.get());
}

TEST_CASE("structural compare is a total order on values") {
    Graph a = Graph::build({node("a")}, {});
    Graph b = Graph::build({node("a"), node("b")}, {});
    CHECK(structural_compare(a, b) == std::strong_ordering::less);
    CHECK(structural_compare(b, a) == std::strong_ordering::greater);
    CHECK(structural_compare(a, Graph::build({node("a")}, {})) == std::strong_ordering::equal);
}

TEST_CASE("graph copies share storage and stay immutable") {
    Graph g = Graph::build({node("a", "X")}, {});
    Graph copy = g;
    CHECK(copy == g);
    CHECK(copy.nodes().data() == g.nodes().data());
}

TEST_CASE("json round trip preserves the graph value") {
    test::Rng rng(151);
    for (int i = 0; i < 40; ++i) {
        Graph g = test::random_graph(rng, 5, 6);
        Json j = graph_to_json(g);
        CHECK(graph_from_json(j) == g);
        CHECK(graph_to_json(graph_from_json(j)).dump() == j.dump());
    }
}

TEST_CASE("json layout: id-sorted arrays, null labels, fixed keys") {
    Graph g = Graph::build({node("b"), node("a", "X")}, {edge("e", "a", "b", "t")});
    Json j = graph_to_json(g);
    REQUIRE(j.contains("nodes"));
    REQUIRE(j.contains("edges"));
    CHECK(j["nodes"][0]["id"] == "a");
    CHECK(j["nodes"][0]["label"] == "X");
    CHECK(j["nodes"][1]["id"] == "b");
    CHECK(j["nodes"][1]["label"].is_null());
    CHECK(j["edges"][0]["src"] == "a");
    CHECK(j["edges"][0]["tgt"] == "b");
    CHECK(j["edges"][0]["label"] == "t");
}

TEST_CASE("json deserialization validates structure") {
    Json bad = Json::parse(R"({"nodes":[{"id":"a","label":null}],
                              "edges":[{"id":"e","src":"a","tgt":"zz","label":null}]})");
    CHECK_THROWS_AS(graph_from_json(bad), GraphBuildError);
}
