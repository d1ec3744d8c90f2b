#include "synthetic.hpp"

#include <supplyrank/depgraph.hpp>
#include <supplyrank/error.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace supplyrank;
namespace fx = supplyrank::testing;
using supplyrank::testing::make_graph;

namespace {

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no supplyrank::Error thrown";
    return ErrorKind::environment;
}

constexpr const char* kChain = R"({"nodes":[
  {"id":"a","name":"A","version":"1","licenses":["MIT"]},
  {"id":"b","name":"B","version":"2","licenses":[]},
  {"id":"c","name":"C","version":"3","licenses":["GPL-2.0-only","MIT"]}],
 "edges":[{"from":"a","to":"b","label":"DEPENDS_ON"},{"from":"b","to":"c","label":"DEPENDS_ON"}]})";

} // namespace

TEST(LoadGraph, MinimalDocument)
{
    const GraphLoad load = load_graph(kChain);
    EXPECT_EQ(load.graph.node_count(), 3u);
    EXPECT_EQ(load.graph.edge_count(), 2u);
    EXPECT_EQ(load.report.duplicate_edges, 0u);
    EXPECT_EQ(load.graph.node(load.graph.index_of("c")).licenses.size(), 2u);
}

TEST(LoadGraph, DuplicateEdgesCollapse)
{
    const GraphLoad load = load_graph(R"({"nodes":[{"id":"a","name":"a"},{"id":"b","name":"b"}],
        "edges":[{"from":"a","to":"b","label":"DEPENDS_ON"},{"from":"a","to":"b","label":"DEPENDS_ON"}]})");
    EXPECT_EQ(load.graph.edge_count(), 1u);
    EXPECT_EQ(load.report.duplicate_edges, 1u);
}

TEST(LoadGraph, MalformedJsonIsParseErrorWithPosition)
{
    try {
        load_graph("{\"nodes\": [\n  {\"id\": }\n]}");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(LoadGraph, SelfLoopNamesNode)
{
    try {
        load_graph(R"({"nodes":[{"id":"loop","name":"l"}],"edges":[{"from":"loop","to":"loop"}]})");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::validation);
        EXPECT_NE(std::string(e.what()).find("loop"), std::string::npos);
    }
}

TEST(LoadGraph, DanglingEdgesStrictVersusLenient)
{
    constexpr const char* doc = R"({"nodes":[{"id":"a","name":"a"}],
        "edges":[{"from":"a","to":"ghost","label":"DEPENDS_ON"}]})";
    try {
        load_graph(doc, LoadOptions{true});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::validation);
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
    const GraphLoad lenient = load_graph(doc, LoadOptions{false});
    EXPECT_EQ(lenient.graph.edge_count(), 0u);
    EXPECT_EQ(lenient.report.dangling_edges, 1u);
    ASSERT_EQ(lenient.report.dropped_dangling.size(), 1u);
    EXPECT_EQ(lenient.report.dropped_dangling[0].to, "ghost");
}

TEST(LoadGraph, OtherLabelsIgnoredAndCounted)
{
    const GraphLoad load = load_graph(R"({"nodes":[{"id":"a","name":"a"},{"id":"b","name":"b"}],
        "edges":[{"from":"a","to":"b","label":"SUGGESTS"},{"from":"b","to":"a"}]})");
    EXPECT_EQ(load.report.ignored_label_edges, 1u);
    ASSERT_EQ(load.graph.edge_count(), 1u);
    EXPECT_EQ(load.graph.node(load.graph.edges()[0].from).id, "b");
}

TEST(LoadGraph, UnknownFieldsPreservedAsAttributes)
{
    const GraphLoad load =
        load_graph(R"({"nodes":[{"id":"a","name":"a","outputs":["out","dev"],"broken":false}],"edges":[]})");
    const auto& attrs = load.graph.node(0).attributes;
    EXPECT_EQ(attrs.at("outputs"), R"(["out","dev"])");
    EXPECT_EQ(attrs.at("broken"), "false");
}

TEST(LoadGraph, InvalidNodesRejected)
{
    EXPECT_EQ(kind_of([] { load_graph(R"({"nodes":[{"id":"","name":"a"}],"edges":[]})"); }), ErrorKind::validation);
    EXPECT_EQ(kind_of([] { load_graph(R"({"nodes":[{"id":"a","name":""}],"edges":[]})"); }), ErrorKind::validation);
    EXPECT_EQ(kind_of([] { load_graph(R"({"nodes":[{"id":"a","name":"x"},{"id":"a","name":"y"}],"edges":[]})"); }),
              ErrorKind::validation);
    EXPECT_EQ(kind_of([] { load_graph(R"({"nodes":{},"edges":[]})"); }), ErrorKind::validation);
}

TEST(LoadGraph, RoundTripIsStable)
{
    const GraphLoad first = load_graph(kChain);
    const GraphLoad second = load_graph(serialize_graph(first.graph));
    EXPECT_TRUE(first.graph == second.graph);
    EXPECT_EQ(serialize_graph(first.graph), serialize_graph(second.graph));
}

TEST(LoadGraph, RoundTripRandomGraphs)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = fx::random_graph(rng, 25, 0.15);
        const DependencyGraph g = fx::build(spec);
        EXPECT_TRUE(load_graph(serialize_graph(g)).graph == g);
    }
}

TEST(ReverseDependencies, Examples)
{
    const auto chain = make_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    EXPECT_EQ(reverse_dependencies(chain, "b"), (std::set<std::string>{"a"}));

    const auto isolated = make_graph({"x"}, {});
    EXPECT_TRUE(reverse_dependencies(isolated, "x").empty());

    const auto star = make_graph({"hub", "l1", "l2", "l3", "l4", "l5"},
                                 {{"l1", "hub"}, {"l2", "hub"}, {"l3", "hub"}, {"l4", "hub"}, {"l5", "hub"}});
    EXPECT_EQ(reverse_dependencies(star, "hub"), (std::set<std::string>{"l1", "l2", "l3", "l4", "l5"}));

    EXPECT_EQ(kind_of([&] { reverse_dependencies(chain, "zz"); }), ErrorKind::not_found);
}

TEST(TransitiveReverseDependencies, Examples)
{
    const auto chain = make_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    EXPECT_EQ(transitive_reverse_dependencies(chain, "c"), (std::set<std::string>{"a", "b"}));

    const auto cyclic = make_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "a"}, {"b", "c"}});
    EXPECT_EQ(transitive_reverse_dependencies(cyclic, "c"), (std::set<std::string>{"a", "b"}));
    // Cycle through the queried node: never contains itself.
    EXPECT_EQ(transitive_reverse_dependencies(cyclic, "a"), (std::set<std::string>{"b"}));

    const auto isolated = make_graph({"x"}, {});
    EXPECT_TRUE(transitive_reverse_dependencies(isolated, "x").empty());
    EXPECT_EQ(kind_of([&] { transitive_reverse_dependencies(chain, "zz"); }), ErrorKind::not_found);
}

TEST(Subgraph, Examples)
{
    const auto chain = make_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    const auto fwd = subgraph(chain, {"a"}, Direction::forward, 1);
    ASSERT_EQ(fwd.node_count(), 2u);
    EXPECT_TRUE(fwd.find("a") && fwd.find("b"));
    ASSERT_EQ(fwd.edge_count(), 1u);

    const auto rev = subgraph(chain, {"c"}, Direction::reverse, 2);
    EXPECT_EQ(rev.node_count(), 3u);
    EXPECT_EQ(rev.edge_count(), 2u);

    const auto star = make_graph({"hub", "l1", "l2"}, {{"l1", "hub"}, {"l2", "hub"}});
    const auto single = subgraph(star, {"hub"}, Direction::reverse, 0);
    EXPECT_EQ(single.node_count(), 1u);
    EXPECT_EQ(single.edge_count(), 0u);

    EXPECT_EQ(kind_of([&] { subgraph(chain, {"nope"}, Direction::forward, 1); }), ErrorKind::not_found);
}

TEST(DependencyGraphProperties, ReverseDependenciesMatchInDegree)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = fx::build(fx::random_graph(rng, 30, 0.1));
        for (NodeIndex i = 0; i < g.node_count(); ++i) {
            const auto& id = g.node(i).id;
            const auto direct = reverse_dependencies(g, id);
            const auto all = transitive_reverse_dependencies(g, id);
            EXPECT_EQ(direct.size(), g.in_degree(i));
            EXPECT_FALSE(all.count(id));
            for (const auto& d : direct) {
                EXPECT_TRUE(all.count(d));
            }
        }
    }
}

TEST(DependencyGraphProperties, NodeOrderDoesNotMatter)
{
    std::mt19937_64 rng(3);
    const auto spec = fx::random_graph(rng, 40, 0.08);
    const auto reference = fx::build(spec);
    for (int trial = 0; trial < 5; ++trial) {
        const auto g = fx::build(fx::shuffled(spec, rng));
        EXPECT_TRUE(g == reference);
        EXPECT_EQ(weak_component_count(g), weak_component_count(reference));
    }
}

TEST(DependencyGraph, WeakComponents)
{
    EXPECT_EQ(weak_component_count(make_graph({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "b"}})), 2u);
    EXPECT_EQ(weak_component_count(make_graph({"a"}, {})), 1u);
}
