#include <algorithm>

#include "doctest.h"
#include "json.hpp"
#include "mnet/errors.hpp"
#include "mnet/network.hpp"
#include "test_support.hpp"

using namespace mnet;
using nlohmann::json;

TEST_CASE("parse/serialize round trip preserves the network") {
    Network b = support::butterfly();
    std::string text = serialize_network(b, true);
    Network again = parse_network(text);
    CHECK(b == again);
    CHECK(serialize_network(again) == serialize_network(b));
}

TEST_CASE("parse reports the offending JSON path") {
    CHECK_THROWS_WITH_AS(parse_network("[]"), doctest::Contains("$"), SchemaError);
    CHECK_THROWS_WITH_AS(parse_network(R"({"edges":[],"source_messages":{},"demands":{}})"),
                         doctest::Contains("missing key 'nodes'"), SchemaError);
    CHECK_THROWS_WITH_AS(
        parse_network(
            R"({"nodes":[{"id":"a","role":"prince"}],"edges":[],"source_messages":{},"demands":{}})"),
        doctest::Contains("$.nodes[0].role"), SchemaError);
    CHECK_THROWS_WITH_AS(
        parse_network(
            R"({"nodes":[{"id":"a","role":"source"}],"edges":[{"id":"e","tail":"a"}],"source_messages":{},"demands":{}})"),
        doctest::Contains("$.edges[0]: missing key 'head'"), SchemaError);
    CHECK_THROWS_AS(parse_network("not json at all"), SchemaError);
}

TEST_CASE("in/out edge lists are sorted by edge id and reject unknown nodes") {
    Network b = support::butterfly();
    CHECK(b.in_edges("t1") == std::vector<std::string>{"e4", "e6"});
    CHECK(b.out_edges("s1") == std::vector<std::string>{"e1", "e4"});
    CHECK(b.in_edges("s1").empty());
    CHECK_THROWS_AS(b.in_edges("nope"), UnknownNode);
    CHECK_THROWS_AS(b.out_edges("nope"), UnknownNode);
}

TEST_CASE("topological order is deterministic and respects every edge") {
    Network b = support::butterfly();
    std::vector<std::string> order = b.topo_order();
    CHECK(order.size() == b.nodes().size());
    auto pos = [&](const std::string& id) {
        return std::find(order.begin(), order.end(), id) - order.begin();
    };
    for (const Edge& e : b.edges()) CHECK(pos(e.tail) < pos(e.head));
    CHECK(order == b.topo_order());  // deterministic tie-breaking
}

TEST_CASE("cycles are detected") {
    Network cyc({{"a", NodeRole::Intermediate}, {"b", NodeRole::Intermediate}},
                {{"e1", "a", "b"}, {"e2", "b", "a"}}, {}, {});
    CHECK_THROWS_AS(cyc.topo_order(), CycleDetected);
    bool found = false;
    for (const Violation& v : cyc.validate()) found = found || v.kind == "cycle";
    CHECK(found);
}

TEST_CASE("validate flags structural violations without throwing") {
    // a source with an in-edge, a terminal demanding an unknown message,
    // a source without a message, and a dangling edge endpoint
    Network bad({{"s", NodeRole::Source},
                 {"x", NodeRole::Intermediate},
                 {"t", NodeRole::Terminal}},
                {{"e1", "x", "s"}, {"e2", "s", "ghost"}}, {},
                {{"t", {"lost"}}});
    auto violations = bad.validate();
    auto has = [&](const std::string& kind) {
        for (const Violation& v : violations)
            if (v.kind == kind) return true;
        return false;
    };
    CHECK(has("source-has-in-edge"));
    CHECK(has("source-without-message"));
    CHECK(has("unknown-endpoint"));
    CHECK(has("demand-unknown-message"));
}

TEST_CASE("clean networks validate clean") {
    CHECK(support::butterfly().validate().empty());
}

TEST_CASE("source_order and message_source fix the block layout") {
    Network b = support::butterfly();
    CHECK(b.source_order() == std::vector<std::string>{"s1", "s2"});
    CHECK(b.message_source("X2") == "s2");
    CHECK_FALSE(b.message_source("X9").has_value());
}

TEST_CASE("serialized JSON carries exactly the four top-level sections") {
    json j = json::parse(serialize_network(support::butterfly()));
    CHECK(j.size() == 4);
    CHECK(j.contains("nodes"));
    CHECK(j.contains("edges"));
    CHECK(j.contains("source_messages"));
    CHECK(j.contains("demands"));
}
