#include <set>

#include "doctest.h"
#include "mnet/code.hpp"
#include "mnet/errors.hpp"
#include "mnet/mnetwork.hpp"
#include "test_support.hpp"

using namespace mnet;

TEST_CASE("construction sizes follow the closed formulas") {
    // nodes: m^2 sources + m + (2m-1) relays + m^m terminals
    // edges: m^2 source edges + m^2 relay edges + (2m-1) m^m terminal edges
    Network n2 = build_mnetwork(2);
    CHECK(n2.nodes().size() == 13);
    CHECK(n2.edges().size() == 20);
    Network n3 = build_mnetwork(3);
    CHECK(n3.nodes().size() == 44);
    CHECK(n3.edges().size() == 153);
    Network n4 = build_mnetwork(4);
    CHECK(n4.nodes().size() == 283);
    CHECK(n4.edges().size() == 1824);
    for (const Network* n : {&n2, &n3, &n4}) CHECK(n->validate().empty());
    CHECK_THROWS_AS(build_mnetwork(1), InvalidM);
    CHECK_THROWS_AS(build_mnetwork(0), InvalidM);
}

TEST_CASE("m=2 reproduces the classic four-source network exactly") {
    Network built = build_mnetwork(2);
    Network expected = parse_network(support::slurp(support::data_path("mnet2_expected.json")));
    CHECK(built == expected);
}

TEST_CASE("layout ids and counts are consistent") {
    MnetLayout lay(3);
    CHECK(lay.m() == 3);
    CHECK(lay.terminal_count() == 27);
    CHECK(lay.node_count() == 44);
    CHECK(lay.edge_count() == 153);
    CHECK(lay.source_id(2, 3) == "s_2_3");
    CHECK(lay.message_id(2, 3) == "X_2_3");
    CHECK(lay.u_id(1) == "u_1");
    CHECK(lay.v_id(5) == "v_5");
    CHECK(lay.source_edge_id(1, 2) == "sv_1_2");
    CHECK(lay.uv_edge_id(2, 2) == "e_2_2");
    CHECK(lay.uv_edge_id(2, 5) == "e_2_5");
    CHECK(lay.vt_edge_id(4, 9) == "vt_4_9");
    CHECK_THROWS_AS(lay.source_id(0, 1), IndexOutOfRange);
    CHECK_THROWS_AS(lay.source_id(4, 1), IndexOutOfRange);
    CHECK_THROWS_AS(lay.uv_edge_id(1, 6), IndexOutOfRange);
    CHECK_THROWS_AS(lay.v_id(6), IndexOutOfRange);
    CHECK_THROWS_AS(lay.t_id(28), IndexOutOfRange);
}

TEST_CASE("terminal tuples enumerate [1,m]^m lexicographically") {
    for (size_t m : {2, 3}) {
        MnetLayout lay(m);
        // independent enumeration by nested counting
        std::vector<std::vector<size_t>> expected;
        std::vector<size_t> cur(m, 1);
        while (true) {
            expected.push_back(cur);
            size_t i = m;
            while (i > 0 && cur[i - 1] == m) cur[--i] = 1;
            if (i == 0) break;
            ++cur[i - 1];
        }
        REQUIRE(expected.size() == lay.terminal_count());
        for (size_t k = 1; k <= lay.terminal_count(); ++k) {
            CHECK(lay.terminal_tuple(k) == expected[k - 1]);
            CHECK(lay.tuple_terminal(expected[k - 1]) == k);
        }
        CHECK_THROWS_AS(lay.terminal_tuple(0), IndexOutOfRange);
        CHECK_THROWS_AS(lay.terminal_tuple(lay.terminal_count() + 1), IndexOutOfRange);
    }
    // spot checks: j1 is the most significant digit
    MnetLayout lay(3);
    CHECK(lay.terminal_tuple(1) == std::vector<size_t>{1, 1, 1});
    CHECK(lay.terminal_tuple(2) == std::vector<size_t>{1, 1, 2});
    CHECK(lay.terminal_tuple(27) == std::vector<size_t>{3, 3, 3});
    CHECK(lay.terminal_tuple(10) == std::vector<size_t>{2, 1, 1});
}

TEST_CASE("demands assign each terminal its tuple of messages") {
    Network net = build_mnetwork(3);
    MnetLayout lay(3);
    std::set<std::vector<std::string>> seen;
    for (size_t k = 1; k <= 27; ++k) {
        const auto& demand = net.demands().at(lay.t_id(k));
        REQUIRE(demand.size() == 3);
        auto tuple = lay.terminal_tuple(k);
        for (size_t i = 0; i < 3; ++i) CHECK(demand[i] == lay.message_id(i + 1, tuple[i]));
        seen.insert(demand);
    }
    CHECK(seen.size() == 27);  // all distinct
}

TEST_CASE("routing code forwards symbol slices on the straight and fan-out edges") {
    PrimeField f(2);
    LinearCode code = routing_code(2, f);
    CHECK(code.d == 2);
    GlobalTransfer gt = propagate(build_mnetwork(2), code);
    // source block order: s_1_1, s_1_2, s_2_1, s_2_2 -> columns 0..7
    // e_1_1 carries symbol 1 of X_1_1 and X_1_2
    Matrix e11(f, 2, 8);
    e11.set(0, 0, 1);
    e11.set(1, 2, 1);
    CHECK(gt.edge_matrix.at("e_1_1") == e11);
    // e_1_3 carries symbol 2 of the same row
    Matrix e13(f, 2, 8);
    e13.set(0, 1, 1);
    e13.set(1, 3, 1);
    CHECK(gt.edge_matrix.at("e_1_3") == e13);
    // e_2_2 carries symbol 1 of X_2_1 and X_2_2
    Matrix e22(f, 2, 8);
    e22.set(0, 4, 1);
    e22.set(1, 6, 1);
    CHECK(gt.edge_matrix.at("e_2_2") == e22);
}

TEST_CASE("the routing code solves the network for every m and field tried") {
    for (size_t m : {2, 3, 4}) {
        Network net = build_mnetwork(m);
        for (uint32_t p : {2u, 3u, 5u}) {
            LinearCode code = routing_code(m, PrimeField(p));
            CHECK(code.d == m);
            Verdict v = verify_solution(net, code);
            CHECK(v.solution);
            CHECK(v.terminals.size() == MnetLayout(m).terminal_count());
            // the embedded decoders must themselves be correct
            for (const TerminalVerdict& t : v.terminals) {
                REQUIRE(t.supplied_decoder_ok.has_value());
                CHECK(*t.supplied_decoder_ok);
            }
        }
    }
}

TEST_CASE("routing code entries are all zero or one regardless of the field") {
    LinearCode code = routing_code(3, PrimeField(7));
    for (const auto& [key, m] : code.local_maps)
        for (uint32_t e : m.entries()) CHECK(e <= 1);
}
