#include "mnet/theorem.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "mnet/errors.hpp"

namespace mnet {

using nlohmann::json;

namespace {

MessageRef straight_ref(const MnetLayout& L, size_t i) {
    return {MessageRef::Kind::Edge, L.uv_edge_id(i, i)};
}

MessageRef fanout_ref(const MnetLayout& L, size_t i, size_t j) {
    return {MessageRef::Kind::Edge, L.uv_edge_id(i, j)};
}

MessageRef msg_ref(const MnetLayout& L, size_t i, size_t j) {
    return {MessageRef::Kind::Source, L.message_id(i, j)};
}

void check_ground(const RankOracle& oracle, const MnetLayout& L) {
    std::set<MessageRef> ground;
    for (const MessageRef& r : oracle.ground()) ground.insert(r);
    for (size_t i = 1; i <= L.m(); ++i) {
        for (size_t j = 1; j <= L.m(); ++j)
            if (!ground.count(msg_ref(L, i, j)))
                throw LayoutMismatch("oracle lacks message " + L.message_id(i, j));
        if (!ground.count(straight_ref(L, i)))
            throw LayoutMismatch("oracle lacks edge message " + L.uv_edge_id(i, i));
        for (size_t j = L.m() + 1; j <= 2 * L.m() - 1; ++j)
            if (!ground.count(fanout_ref(L, i, j)))
                throw LayoutMismatch("oracle lacks edge message " + L.uv_edge_id(i, j));
    }
}

uint64_t pair_rank(const RankOracle& oracle, const MnetLayout& L, size_t i, size_t j) {
    return oracle.query({straight_ref(L, i), msg_ref(L, i, j)});
}

}  // namespace

std::vector<TupleRecord> check_set_one(const RankOracle& oracle, const MnetLayout& layout,
                                       size_t d) {
    check_ground(oracle, layout);
    const uint64_t bound = (2 * layout.m() - 1) * d;
    std::vector<TupleRecord> records;
    records.reserve(layout.terminal_count());
    for (size_t k = 1; k <= layout.terminal_count(); ++k) {
        TupleRecord rec;
        rec.tuple = layout.terminal_tuple(k);
        for (size_t i = 1; i <= layout.m(); ++i) {
            rec.terms.push_back(pair_rank(oracle, layout, i, rec.tuple[i - 1]));
            rec.lhs += rec.terms.back();
        }
        rec.rhs = bound;
        rec.pass = rec.lhs <= rec.rhs;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<RowRecord> check_set_two(const RankOracle& oracle, const MnetLayout& layout,
                                     size_t d) {
    check_ground(oracle, layout);
    const uint64_t bound = (2 * layout.m() - 1) * d;
    std::vector<RowRecord> records;
    for (size_t i = 1; i <= layout.m(); ++i) {
        RowRecord rec;
        rec.i = i;
        for (size_t j = 1; j <= layout.m(); ++j) {
            rec.terms.push_back(pair_rank(oracle, layout, i, j));
            rec.lhs += rec.terms.back();
        }
        rec.rhs = bound;
        rec.pass = rec.lhs >= rec.rhs;
        records.push_back(std::move(rec));
    }
    return records;
}

std::pair<std::vector<EdgeRankRecord>, EdgeRankSummary> check_edge_ranks(const RankOracle& oracle,
                                                                         const MnetLayout& layout,
                                                                         size_t d) {
    check_ground(oracle, layout);
    std::vector<EdgeRankRecord> records;
    std::vector<MessageRef> all;
    EdgeRankSummary summary;
    auto add = [&](MessageRef ref, const std::string& id) {
        EdgeRankRecord rec;
        rec.edge = id;
        rec.value = oracle.query({ref});
        rec.expected = d;
        rec.pass = rec.value == rec.expected;
        summary.sum += rec.value;
        all.push_back(std::move(ref));
        records.push_back(std::move(rec));
    };
    for (size_t i = 1; i <= layout.m(); ++i) {
        add(straight_ref(layout, i), layout.uv_edge_id(i, i));
        for (size_t j = layout.m() + 1; j <= 2 * layout.m() - 1; ++j)
            add(fanout_ref(layout, i, j), layout.uv_edge_id(i, j));
    }
    summary.joint = oracle.query(all);
    summary.expected = layout.m() * layout.m() * d;
    summary.pass = summary.sum == summary.expected && summary.joint == summary.expected &&
                   std::all_of(records.begin(), records.end(),
                               [](const EdgeRankRecord& r) { return r.pass; });
    return {std::move(records), summary};
}

std::vector<TupleRecord> check_independence(const RankOracle& oracle, const MnetLayout& layout) {
    check_ground(oracle, layout);
    std::vector<TupleRecord> records;
    records.reserve(layout.terminal_count());
    for (size_t k = 1; k <= layout.terminal_count(); ++k) {
        TupleRecord rec;
        rec.tuple = layout.terminal_tuple(k);
        std::vector<MessageRef> joint;
        for (size_t i = 1; i <= layout.m(); ++i) {
            rec.terms.push_back(pair_rank(oracle, layout, i, rec.tuple[i - 1]));
            rec.lhs += rec.terms.back();
            joint.push_back(straight_ref(layout, i));
            joint.push_back(msg_ref(layout, i, rec.tuple[i - 1]));
        }
        rec.rhs = oracle.query(joint);
        rec.pass = rec.lhs == rec.rhs;
        records.push_back(std::move(rec));
    }
    return records;
}

FinalRecord check_divisibility(const RankOracle& oracle, const MnetLayout& layout, size_t d,
                               const Verdict& verdict) {
    if (!verdict.solution)
        throw NotASolution("the closing equality is only claimed for verified solutions");
    check_ground(oracle, layout);
    FinalRecord rec;
    rec.checked = true;
    rec.equality_ok = true;
    const size_t m = layout.m();
    for (size_t i = 1; i <= m; ++i) {
        std::vector<uint64_t> row;
        for (size_t j = 1; j <= m; ++j) {
            uint64_t g = pair_rank(oracle, layout, i, j);
            // g == (2m-1)d/m, compared without division
            if (g * m != (2 * m - 1) * d) rec.equality_ok = false;
            row.push_back(g);
        }
        rec.g_values.push_back(std::move(row));
    }
    rec.divides = d % m == 0;
    return rec;
}

bool LedgerReport::all_pass() const {
    bool final_ok = !final_record.checked || (final_record.equality_ok && final_record.divides);
    return set_one_all_pass && set_two_all_pass && edge_ranks_ok && independence_ok && final_ok;
}

LedgerReport run_ledger(const MnetLayout& layout, const Network& net, const LinearCode& code,
                        bool allow_nonsolution) {
    Verdict verdict = verify_solution(net, code);
    if (!verdict.solution && !allow_nonsolution)
        throw NotASolution("code does not verify as a solution; rerun with the nonsolution flag");
    RankOracle oracle = induced_rank_oracle(net, code);

    LedgerReport report;
    report.m = layout.m();
    report.d = code.d;
    report.p = code.field.p();
    report.set_one = check_set_one(oracle, layout, code.d);
    report.set_two = check_set_two(oracle, layout, code.d);
    auto [edge_records, edge_summary] = check_edge_ranks(oracle, layout, code.d);
    report.edge_ranks = std::move(edge_records);
    report.edge_rank_summary = edge_summary;
    report.independence = check_independence(oracle, layout);
    if (verdict.solution)
        report.final_record = check_divisibility(oracle, layout, code.d, verdict);

    report.set_one_all_pass = std::all_of(report.set_one.begin(), report.set_one.end(),
                                          [](const TupleRecord& r) { return r.pass; });
    report.set_two_all_pass = std::all_of(report.set_two.begin(), report.set_two.end(),
                                          [](const RowRecord& r) { return r.pass; });
    report.edge_ranks_ok = report.edge_rank_summary.pass;
    report.independence_ok = std::all_of(report.independence.begin(), report.independence.end(),
                                         [](const TupleRecord& r) { return r.pass; });
    return report;
}

std::string ledger_to_json(const LedgerReport& r, bool pretty) {
    json j;
    j["m"] = r.m;
    j["d"] = r.d;
    j["p"] = r.p;
    j["set_one"] = json::array();
    for (const TupleRecord& rec : r.set_one)
        j["set_one"].push_back({{"tuple", rec.tuple},
                                {"terms", rec.terms},
                                {"lhs", rec.lhs},
                                {"rhs", rec.rhs},
                                {"pass", rec.pass}});
    j["set_two"] = json::array();
    for (const RowRecord& rec : r.set_two)
        j["set_two"].push_back({{"i", rec.i},
                                {"terms", rec.terms},
                                {"lhs", rec.lhs},
                                {"rhs", rec.rhs},
                                {"pass", rec.pass}});
    j["edge_ranks"] = json::array();
    for (const EdgeRankRecord& rec : r.edge_ranks)
        j["edge_ranks"].push_back({{"edge", rec.edge},
                                   {"value", rec.value},
                                   {"expected", rec.expected},
                                   {"pass", rec.pass}});
    j["edge_rank_summary"] = {{"sum", r.edge_rank_summary.sum},
                              {"joint", r.edge_rank_summary.joint},
                              {"expected", r.edge_rank_summary.expected},
                              {"pass", r.edge_rank_summary.pass}};
    j["independence"] = json::array();
    for (const TupleRecord& rec : r.independence)
        j["independence"].push_back({{"tuple", rec.tuple},
                                     {"terms", rec.terms},
                                     {"lhs", rec.lhs},
                                     {"joint", rec.rhs},
                                     {"pass", rec.pass}});
    j["final"] = {{"checked", r.final_record.checked},
                  {"expected", "(2m-1)d/m"},
                  {"g_values", r.final_record.g_values},
                  {"equality_ok", r.final_record.equality_ok},
                  {"divides", r.final_record.divides}};
    j["summary"] = {{"set_one_all_pass", r.set_one_all_pass},
                    {"set_two_all_pass", r.set_two_all_pass},
                    {"edge_ranks_ok", r.edge_ranks_ok},
                    {"independence_ok", r.independence_ok},
                    {"all_pass", r.all_pass()}};
    return pretty ? j.dump(2) + "\n" : j.dump();
}

}  // namespace mnet
