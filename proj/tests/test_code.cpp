#include <random>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "mnet/code.hpp"
#include "mnet/errors.hpp"
#include "mnet/rank_oracle.hpp"
#include "test_support.hpp"

using namespace mnet;
using nlohmann::json;
using support::edg;
using support::src;

TEST_CASE("the mixing code solves the butterfly and decoders are synthesized") {
    Network net = support::butterfly();
    for (uint32_t p : {2u, 3u, 5u}) {
        LinearCode code = support::butterfly_xor_code(PrimeField(p));
        Verdict v = verify_solution(net, code);
        CHECK(v.solution);
        REQUIRE(v.terminals.size() == 2);
        for (const TerminalVerdict& t : v.terminals) {
            CHECK(t.decodable);
            REQUIRE(t.decoder.has_value());
            CHECK_FALSE(t.supplied_decoder_ok.has_value());  // none supplied
        }
        CHECK(v.source_order == std::vector<std::string>{"s1", "s2"});
    }
}

TEST_CASE("the zero code decodes nothing and the witness names the message") {
    Network net = support::butterfly();
    LinearCode zero = support::zero_code(net, PrimeField(2), 1);
    Verdict v = verify_solution(net, zero);
    CHECK_FALSE(v.solution);
    for (const TerminalVerdict& t : v.terminals) {
        CHECK_FALSE(t.decodable);
        CHECK(t.witness.find("X1") != std::string::npos);
        CHECK(t.witness.find(t.terminal) != std::string::npos);
    }
}

TEST_CASE("propagate composes global transfers in topological order") {
    Network net = support::butterfly();
    PrimeField f(2);
    GlobalTransfer gt = propagate(net, support::butterfly_xor_code(f));
    // source order s1, s2 -> columns [X1 | X2]
    CHECK(gt.edge_matrix.at("e1") == Matrix(f, 1, 2, {1, 0}));
    CHECK(gt.edge_matrix.at("e2") == Matrix(f, 1, 2, {0, 1}));
    CHECK(gt.edge_matrix.at("e3") == Matrix(f, 1, 2, {1, 1}));
    CHECK(gt.edge_matrix.at("e6") == Matrix(f, 1, 2, {1, 1}));
    CHECK(gt.edge_matrix.at("e4") == Matrix(f, 1, 2, {1, 0}));
    CHECK(gt.edge_matrix.size() == net.edges().size());
}

TEST_CASE("a missing edge map means an uncovered edge, an explicit zero does not") {
    Network net = support::butterfly();
    PrimeField f(2);
    LinearCode code = support::butterfly_xor_code(f);
    code.local_maps.erase({"e3", edg("e1")});
    code.local_maps.erase({"e3", edg("e2")});
    CHECK_THROWS_AS(propagate(net, code), UncoveredEdge);
    code.set_map("e3", edg("e1"), Matrix(f, 1, 1));  // explicit zero is covered
    CHECK(propagate(net, code).edge_matrix.at("e3").is_zero());
}

TEST_CASE("shape and input legality are enforced") {
    Network net = support::butterfly();
    PrimeField f(2);
    LinearCode code = support::butterfly_xor_code(f);
    SUBCASE("wrong dimension") {
        code.set_map("e1", src("X1"), identity(f, 2));
        CHECK_THROWS_AS(verify_solution(net, code), ShapeMismatch);
    }
    SUBCASE("wrong field") {
        code.set_map("e1", src("X1"), Matrix(PrimeField(3), 1, 1, {1}));
        CHECK_THROWS_AS(verify_solution(net, code), ShapeMismatch);
    }
    SUBCASE("input not at the tail") {
        code.set_map("e6", edg("e1"), Matrix(f, 1, 1, {1}));  // e6's tail sees only e3
        CHECK_THROWS_AS(verify_solution(net, code), ShapeMismatch);
    }
    SUBCASE("unknown edge") {
        code.set_map("e99", src("X1"), Matrix(f, 1, 1, {1}));
        CHECK_THROWS_AS(verify_solution(net, code), ShapeMismatch);
    }
}

TEST_CASE("supplied decoders are judged against the synthesized ground truth") {
    Network net = support::butterfly();
    PrimeField f(2);
    LinearCode code = support::butterfly_xor_code(f);
    // t1 stacks [Y_e4; Y_e6] = [X1; X1+X2]; demanded [X1; X2]
    code.decoders.insert_or_assign("t1", Matrix(f, 2, 2, {1, 0, 1, 1}));
    code.decoders.insert_or_assign("t2", Matrix(f, 2, 2, {1, 0, 1, 1}));  // wrong for t2
    Verdict v = verify_solution(net, code);
    CHECK(v.solution);  // solvability ignores supplied decoders
    REQUIRE(v.terminals.size() == 2);
    CHECK(v.terminals[0].supplied_decoder_ok == true);
    CHECK(v.terminals[1].supplied_decoder_ok == false);
}

TEST_CASE("code JSON round trip preserves maps and decoders") {
    PrimeField f(3);
    LinearCode code = support::butterfly_xor_code(f);
    code.decoders.insert_or_assign("t1", Matrix(f, 2, 2, {1, 0, 2, 1}));
    std::string text = serialize_code(code, true);
    LinearCode again = parse_code(text);
    CHECK(again.field == f);
    CHECK(again.d == 1);
    CHECK(again.local_maps == code.local_maps);
    CHECK(again.decoders == code.decoders);
    CHECK(serialize_code(again, true) == text);
    // decoders section is omitted entirely when empty
    code.decoders.clear();
    CHECK(serialize_code(code).find("decoders") == std::string::npos);
}

TEST_CASE("code parse errors carry the JSON path") {
    CHECK_THROWS_WITH_AS(parse_code("{}"), doctest::Contains("$.p"), SchemaError);
    CHECK_THROWS_WITH_AS(parse_code(R"({"p":2,"d":0,"local_maps":[]})"),
                         doctest::Contains("$.d"), SchemaError);
    CHECK_THROWS_WITH_AS(parse_code(R"({"p":4,"d":1,"local_maps":[]})"),
                         doctest::Contains(""), CompositeModulus);
    CHECK_THROWS_WITH_AS(
        parse_code(R"({"p":2,"d":1,"local_maps":[{"edge":"e","input":{"kind":"wire","id":"x"},"matrix":[[1]]}]})"),
        doctest::Contains("$.local_maps[0].input.kind"), SchemaError);
    CHECK_THROWS_AS(
        parse_code(R"({"p":2,"d":1,"local_maps":[{"edge":"e","input":{"kind":"edge","id":"x"},"matrix":[[1,0]]}]})"),
        ShapeMismatch);
    CHECK_THROWS_WITH_AS(
        parse_code(R"({"p":2,"d":1,"local_maps":[{"edge":"e","input":{"kind":"edge","id":"x"},"matrix":[[2]]}]})"),
        doctest::Contains("matrix"), SchemaError);
}

TEST_CASE("induced rank oracle reports subspace dimensions of the code") {
    Network net = support::butterfly();
    PrimeField f(2);
    RankOracle oracle = induced_rank_oracle(net, support::butterfly_xor_code(f));
    CHECK(oracle.query({src("X1")}) == 1);
    CHECK(oracle.query({edg("e3")}) == 1);
    CHECK(oracle.query({src("X1"), edg("e3")}) == 2);
    CHECK(oracle.query({src("X1"), src("X2"), edg("e3")}) == 2);
    CHECK(oracle.query({}) == 0);
    CHECK(oracle.ground().size() == 2 + 7);
}

namespace {

// Gauge move at edge e: multiply every map into e by c and every map reading
// e by c^{-1}.  All global transfers except e's are untouched and e's row
// space is preserved, so the induced rank function must not move at all.
LinearCode gauge_scaled(const LinearCode& code, const std::string& e, uint32_t c) {
    LinearCode out = code;
    uint32_t cinv = code.field.inv(c);
    for (auto& [key, m] : out.local_maps) {
        if (key.first == e) m = scale(m, c);
        if (key.second == edg(e)) m = scale(m, cinv);
    }
    return out;
}

// Scale only the maps into e (sound only when nothing downstream reads e).
LinearCode edge_scaled(const LinearCode& code, const std::string& e, uint32_t c) {
    LinearCode out = code;
    for (auto& [key, m] : out.local_maps)
        if (key.first == e) m = scale(m, c);
    return out;
}

bool same_rank_function(const Network& net, const LinearCode& a, const LinearCode& b) {
    RankOracle oa = induced_rank_oracle(net, a);
    RankOracle ob = induced_rank_oracle(net, b);
    std::vector<MessageRef> ground = oa.ground();
    if (ground.size() <= 10) {
        for (uint64_t mask = 0; mask < (uint64_t{1} << ground.size()); ++mask) {
            std::vector<MessageRef> subset;
            for (size_t i = 0; i < ground.size(); ++i)
                if ((mask >> i) & 1u) subset.push_back(ground[i]);
            if (oa.query(subset) != ob.query(subset)) return false;
        }
        return true;
    }
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<MessageRef> subset;
        for (const MessageRef& r : ground)
            if (rng() & 1u) subset.push_back(r);
        if (oa.query(subset) != ob.query(subset)) return false;
    }
    return true;
}

LinearCode random_full_code(const Network& net, const PrimeField& f, size_t d,
                            std::mt19937& rng) {
    LinearCode code(f, d);
    for (const Edge& e : net.edges()) {
        const Node* tail = net.find_node(e.tail);
        if (tail->role == NodeRole::Source) {
            code.set_map(e.id, src(net.source_messages().at(tail->id)),
                         support::random_matrix(f, d, d, rng));
        } else {
            for (const std::string& in : net.in_edges(tail->id))
                code.set_map(e.id, edg(in), support::random_matrix(f, d, d, rng));
        }
    }
    return code;
}

}  // namespace

TEST_CASE("gauge rescaling of any edge preserves the induced rank function") {
    Network net = support::butterfly();
    std::mt19937 rng(20260819);
    for (uint32_t p : {3u, 5u}) {
        PrimeField f(p);
        for (int trial = 0; trial < 6; ++trial) {
            LinearCode code = random_full_code(net, f, 1, rng);
            for (const Edge& e : net.edges())
                for (uint32_t c = 2; c < p; ++c) {
                    LinearCode moved = gauge_scaled(code, e.id, c);
                    CHECK(same_rank_function(net, code, moved));
                    CHECK(verify_solution(net, moved).solution ==
                          verify_solution(net, code).solution);
                }
        }
    }
}

TEST_CASE("rescaling an edge nothing reads preserves everything verbatim") {
    Network net = support::butterfly();
    PrimeField f(5);
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 8; ++trial) {
        LinearCode code = random_full_code(net, f, 1, rng);
        for (const std::string& e : {"e4", "e5", "e6", "e7"}) {  // all feed terminals only
            LinearCode moved = edge_scaled(code, e, 2 + rng() % 3);
            CHECK(same_rank_function(net, code, moved));
            CHECK(verify_solution(net, moved).solution == verify_solution(net, code).solution);
        }
    }
}

TEST_CASE("regression: scaling a single interior local map can change joint ranks") {
    // Two parallel mixtures of the same pair of messages plus a relayed copy:
    // scaling one summand map realigns the copy with the other mixture.
    Network net({{"sa", NodeRole::Source},
                 {"sb", NodeRole::Source},
                 {"w", NodeRole::Intermediate},
                 {"v", NodeRole::Intermediate},
                 {"t", NodeRole::Terminal}},
                {{"a1", "sa", "w"},
                 {"b1", "sb", "w"},
                 {"mix1", "w", "v"},
                 {"mix2", "w", "v"},
                 {"relay", "v", "t"}},
                {{"sa", "A"}, {"sb", "B"}}, {{"t", {"A"}}});
    PrimeField f(3);
    LinearCode code(f, 1);
    Matrix one(f, 1, 1, {1});
    Matrix two(f, 1, 1, {2});
    code.set_map("a1", src("A"), one);
    code.set_map("b1", src("B"), one);
    code.set_map("mix1", edg("a1"), one);   // mix1 = A + B
    code.set_map("mix1", edg("b1"), one);
    code.set_map("mix2", edg("a1"), one);   // mix2 = A + 2B
    code.set_map("mix2", edg("b1"), two);
    code.set_map("relay", edg("mix1"), one);
    code.set_map("relay", edg("mix2"), Matrix(f, 1, 1));  // relay = mix1
    RankOracle before = induced_rank_oracle(net, code);
    CHECK(before.query({edg("mix2"), edg("relay")}) == 2);

    // scale exactly one local map: the A-contribution into mix1
    code.set_map("mix1", edg("a1"), two);   // mix1 = 2A + B = 2 * (A + 2B) mod 3
    RankOracle after = induced_rank_oracle(net, code);
    CHECK(after.query({edg("mix2"), edg("relay")}) == 1);
}
