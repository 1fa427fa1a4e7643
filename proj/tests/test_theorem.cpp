#include <set>

#include "doctest.h"
#include "json.hpp"
#include "mnet/errors.hpp"
#include "mnet/mnetwork.hpp"
#include "mnet/theorem.hpp"
#include "test_support.hpp"

using namespace mnet;
using nlohmann::json;

TEST_CASE("the routing solution satisfies the full ledger at m=2") {
    MnetLayout lay(2);
    Network net = build_mnetwork(2);
    LinearCode code = routing_code(2, PrimeField(2));
    LedgerReport rep = run_ledger(lay, net, code);
    CHECK(rep.all_pass());
    CHECK(rep.m == 2);
    CHECK(rep.d == 2);
    CHECK(rep.p == 2);

    REQUIRE(rep.set_one.size() == 4);  // one record per demand tuple
    for (const TupleRecord& r : rep.set_one) {
        CHECK(r.pass);
        CHECK(r.rhs == 6);  // (2m-1)d = 3*2
        CHECK(r.lhs == 6);  // saturated by this solution: both terms are 3
        for (uint64_t term : r.terms) CHECK(term == 3);
    }
    REQUIRE(rep.set_two.size() == 2);  // one per source row
    for (const RowRecord& r : rep.set_two) {
        CHECK(r.pass);
        CHECK(r.rhs == 6);
        CHECK(r.lhs == 6);
    }
    REQUIRE(rep.edge_ranks.size() == 4);  // m^2 relay edges
    for (const EdgeRankRecord& r : rep.edge_ranks) {
        CHECK(r.pass);
        CHECK(r.value == 2);
    }
    CHECK(rep.edge_rank_summary.pass);
    CHECK(rep.edge_rank_summary.sum == 8);    // m^2 d
    CHECK(rep.edge_rank_summary.joint == 8);  // saturation: joint rank equals the sum
    REQUIRE(rep.independence.size() == 4);
    for (const TupleRecord& r : rep.independence) {
        CHECK(r.pass);
        CHECK(r.lhs == r.rhs);  // additivity across rows
    }
    CHECK(rep.final_record.checked);
    CHECK(rep.final_record.equality_ok);
    CHECK(rep.final_record.divides);
    for (const auto& row : rep.final_record.g_values)
        for (uint64_t g : row) CHECK(g == 3);  // (2m-1)d/m = 3
}

TEST_CASE("the routing solution satisfies the full ledger at m=3") {
    MnetLayout lay(3);
    Network net = build_mnetwork(3);
    LinearCode code = routing_code(3, PrimeField(2));
    LedgerReport rep = run_ledger(lay, net, code);
    CHECK(rep.all_pass());
    CHECK(rep.set_one.size() == 27);
    CHECK(rep.set_two.size() == 3);
    CHECK(rep.edge_ranks.size() == 9);
    CHECK(rep.independence.size() == 27);
    for (const TupleRecord& r : rep.set_one) CHECK(r.rhs == 15);  // 5*3
    CHECK(rep.edge_rank_summary.sum == 27);                       // m^2 d
    CHECK(rep.edge_rank_summary.joint == 27);
    for (const auto& row : rep.final_record.g_values)
        for (uint64_t g : row) CHECK(g == 5);  // (2m-1)d/m = 5
}

TEST_CASE("non-solutions are rejected unless explicitly allowed") {
    MnetLayout lay(2);
    Network net = build_mnetwork(2);
    LinearCode zero = support::zero_code(net, PrimeField(2), 2);
    CHECK_THROWS_AS(run_ledger(lay, net, zero), NotASolution);

    LedgerReport rep = run_ledger(lay, net, zero, true);
    CHECK_FALSE(rep.all_pass());
    // the zero code sits below both bounds: set one holds, set two collapses
    for (const TupleRecord& r : rep.set_one) CHECK(r.pass);
    for (const RowRecord& r : rep.set_two) CHECK_FALSE(r.pass);
    for (const EdgeRankRecord& r : rep.edge_ranks) {
        CHECK(r.value == 0);
        CHECK_FALSE(r.pass);
    }
    // the closing equality is skipped entirely, not reported as failing
    CHECK_FALSE(rep.final_record.checked);
}

TEST_CASE("ledger demands the oracle cover the construction's messages") {
    Network b = support::butterfly();
    LinearCode code = support::butterfly_xor_code(PrimeField(2));
    CHECK_THROWS_AS(run_ledger(MnetLayout(2), b, code), LayoutMismatch);
}

TEST_CASE("the ledger survives a found non-routing solution as well") {
    // scalar butterfly-style check is impossible here; instead reuse routing at
    // a different field to make sure nothing is hardwired to GF(2)
    MnetLayout lay(2);
    Network net = build_mnetwork(2);
    LinearCode code = routing_code(2, PrimeField(5));
    LedgerReport rep = run_ledger(lay, net, code);
    CHECK(rep.all_pass());
    CHECK(rep.p == 5);
}

TEST_CASE("ledger JSON is structured and self-describing") {
    MnetLayout lay(2);
    Network net = build_mnetwork(2);
    LinearCode code = routing_code(2, PrimeField(2));
    LedgerReport rep = run_ledger(lay, net, code);
    json j = json::parse(ledger_to_json(rep, true));
    CHECK(j["m"] == 2);
    CHECK(j["d"] == 2);
    CHECK(j["p"] == 2);
    CHECK(j["set_one"].size() == 4);
    CHECK(j["set_two"].size() == 2);
    CHECK(j["edge_ranks"].size() == 4);
    CHECK(j["independence"].size() == 4);
    CHECK(j["final"]["checked"] == true);
    CHECK(j["final"]["expected"] == "(2m-1)d/m");
    CHECK(j["final"]["equality_ok"] == true);
    CHECK(j["final"]["divides"] == true);
    CHECK(j["summary"]["all_pass"] == true);
    // every record carries its witness terms
    for (const auto& r : j["set_one"]) {
        CHECK(r.contains("tuple"));
        CHECK(r.contains("terms"));
        CHECK(r.contains("lhs"));
        CHECK(r.contains("rhs"));
        CHECK(r.contains("pass"));
    }
}

TEST_CASE("individual checks can run standalone on a code-induced oracle") {
    MnetLayout lay(2);
    Network net = build_mnetwork(2);
    LinearCode code = routing_code(2, PrimeField(3));
    RankOracle oracle = induced_rank_oracle(net, code);
    auto set_one = check_set_one(oracle, lay, 2);
    CHECK(set_one.size() == 4);
    auto set_two = check_set_two(oracle, lay, 2);
    CHECK(set_two.size() == 2);
    auto [records, summary] = check_edge_ranks(oracle, lay, 2);
    CHECK(records.size() == 4);
    CHECK(summary.pass);
    auto indep = check_independence(oracle, lay);
    CHECK(indep.size() == 4);
    Verdict v = verify_solution(net, code);
    FinalRecord fin = check_divisibility(oracle, lay, 2, v);
    CHECK(fin.checked);
    CHECK(fin.equality_ok);
    CHECK(fin.divides);
    // refuses to conclude from a non-solution
    Verdict fake;
    fake.solution = false;
    CHECK_THROWS_AS(check_divisibility(oracle, lay, 2, fake), NotASolution);
}
