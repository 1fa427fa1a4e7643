#include "mnet/polymatroid.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mnet/errors.hpp"

namespace mnet {

using nlohmann::json;

namespace {

constexpr size_t kMaxGround = 20;
constexpr size_t kMaxViolations = 100;

std::string subset_key(uint32_t mask) {
    std::string key;
    for (size_t i = 0; mask >> i; ++i) {
        if (!((mask >> i) & 1u)) continue;
        if (!key.empty()) key += ",";
        key += std::to_string(i + 1);
    }
    return key;
}

std::string subset_braces(uint32_t mask) {
    return "{" + subset_key(mask) + "}";
}

}  // namespace

RankTable::RankTable(size_t n, std::vector<uint32_t> ranks) : n_(n), ranks_(std::move(ranks)) {
    if (n > kMaxGround)
        throw GroundSetTooLarge("ground set of size " + std::to_string(n) + " exceeds " +
                                std::to_string(kMaxGround));
    if (ranks_.size() != (size_t{1} << n))
        throw IncompleteTable("table has " + std::to_string(ranks_.size()) +
                              " entries, expected " + std::to_string(size_t{1} << n));
}

uint32_t RankTable::rank(uint32_t mask) const {
    if (mask >= ranks_.size())
        throw IndexOutOfRange("subset mask " + std::to_string(mask) + " out of range");
    return ranks_[mask];
}

uint32_t RankTable::rank_of(const std::vector<size_t>& subset) const {
    uint32_t mask = 0;
    for (size_t el : subset) {
        if (el < 1 || el > n_)
            throw IndexOutOfRange("element " + std::to_string(el) + " not in [1," +
                                  std::to_string(n_) + "]");
        mask |= uint32_t{1} << (el - 1);
    }
    return ranks_[mask];
}

RankTable parse_rank_table(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("rank table is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw SchemaError("$.n: expected an integer");
    int64_t n_raw = j["n"].get<int64_t>();
    if (n_raw < 0) throw SchemaError("$.n: expected a non-negative integer");
    size_t n = static_cast<size_t>(n_raw);
    if (n > kMaxGround)
        throw GroundSetTooLarge("ground set of size " + std::to_string(n) + " exceeds " +
                                std::to_string(kMaxGround));
    if (!j.contains("ranks") || !j["ranks"].is_object())
        throw SchemaError("$.ranks: expected an object");
    std::vector<uint32_t> ranks(size_t{1} << n);
    std::vector<bool> seen(size_t{1} << n, false);
    for (const auto& [key, val] : j["ranks"].items()) {
        uint32_t mask = 0;
        if (!key.empty()) {
            std::stringstream ss(key);
            std::string part;
            size_t prev = 0;
            while (std::getline(ss, part, ',')) {
                size_t el = 0;
                try {
                    el = std::stoul(part);
                } catch (const std::exception&) {
                    throw SchemaError("$.ranks['" + key + "']: malformed subset key");
                }
                if (el < 1 || el > n || el <= prev)
                    throw SchemaError("$.ranks['" + key +
                                      "']: keys must be sorted 1-based elements in [1," +
                                      std::to_string(n) + "]");
                prev = el;
                mask |= uint32_t{1} << (el - 1);
            }
        }
        if (!val.is_number_integer() || val.get<int64_t>() < 0)
            throw SchemaError("$.ranks['" + key + "']: expected a non-negative integer");
        seen[mask] = true;
        ranks[mask] = static_cast<uint32_t>(val.get<int64_t>());
    }
    for (size_t mask = 0; mask < seen.size(); ++mask)
        if (!seen[mask])
            throw IncompleteTable("missing rank for subset " +
                                  subset_braces(static_cast<uint32_t>(mask)));
    return RankTable(n, std::move(ranks));
}

std::string serialize_rank_table(const RankTable& t, bool pretty) {
    json ranks = json::object();
    for (size_t mask = 0; mask < t.size(); ++mask)
        ranks[subset_key(static_cast<uint32_t>(mask))] = t.rank(static_cast<uint32_t>(mask));
    json j = {{"n", t.n()}, {"ranks", std::move(ranks)}};
    return pretty ? j.dump(2) + "\n" : j.dump();
}

AxiomReport check_axioms(const RankTable& t) {
    AxiomReport report;
    auto add = [&](AxiomViolation v) {
        report.ok = false;
        if (report.violations.size() < kMaxViolations)
            report.violations.push_back(std::move(v));
        else
            report.truncated = true;
    };

    if (t.rank(0) != 0)
        add({"normalization", 0, 0, "rank of the empty set is " + std::to_string(t.rank(0))});

    const uint32_t full = static_cast<uint32_t>(t.size() - 1);
    for (uint32_t a = 0; a <= full; ++a) {
        for (size_t i = 0; i < t.n(); ++i) {
            if ((a >> i) & 1u) continue;
            uint32_t ai = a | (uint32_t{1} << i);
            if (t.rank(a) > t.rank(ai))
                add({"monotonicity", a, ai,
                     "rank" + subset_braces(a) + " = " + std::to_string(t.rank(a)) +
                         " > rank" + subset_braces(ai) + " = " + std::to_string(t.rank(ai))});
            for (size_t jj = i + 1; jj < t.n(); ++jj) {
                if ((a >> jj) & 1u) continue;
                uint32_t aj = a | (uint32_t{1} << jj);
                uint32_t aij = ai | (uint32_t{1} << jj);
                if (t.rank(ai) + t.rank(aj) < t.rank(aij) + t.rank(a))
                    add({"submodularity", ai, aj,
                         "rank" + subset_braces(ai) + " + rank" + subset_braces(aj) + " = " +
                             std::to_string(t.rank(ai) + t.rank(aj)) + " < rank" +
                             subset_braces(aij) + " + rank" + subset_braces(a) + " = " +
                             std::to_string(t.rank(aij) + t.rank(a))});
            }
        }
    }
    return report;
}

size_t rho_max(const RankTable& t) {
    size_t best = 0;
    for (uint32_t mask = 1; mask < t.size(); ++mask) {
        size_t card = static_cast<size_t>(std::popcount(mask));
        best = std::max(best, (static_cast<size_t>(t.rank(mask)) + card - 1) / card);
    }
    return best;
}

size_t rho_max(const RankOracle& o, const std::vector<std::vector<MessageRef>>& family) {
    size_t best = 0;
    for (const auto& subset : family) {
        std::set<MessageRef> uniq(subset.begin(), subset.end());
        if (uniq.empty()) continue;
        size_t r = o.query(subset);
        best = std::max(best, (r + uniq.size() - 1) / uniq.size());
    }
    return best;
}

bool membership(const std::vector<uint64_t>& v, const RankTable& t) {
    if (v.size() != t.n())
        throw DimensionMismatch("vector of length " + std::to_string(v.size()) +
                                " against ground set of size " + std::to_string(t.n()));
    for (uint32_t mask = 1; mask < t.size(); ++mask) {
        uint64_t total = 0;
        for (size_t i = 0; i < t.n(); ++i)
            if ((mask >> i) & 1u) total += v[i];
        if (total > t.rank(mask)) return false;
    }
    return true;
}

namespace {

void subspace_walk(const std::vector<Matrix>& mats, size_t next, uint32_t mask,
                   const EliminationBasis& eb, std::vector<uint32_t>& ranks) {
    if (next == mats.size()) {
        ranks[mask] = static_cast<uint32_t>(eb.rank());
        return;
    }
    subspace_walk(mats, next + 1, mask, eb, ranks);
    EliminationBasis with = eb;
    with.insert_rows(mats[next]);
    subspace_walk(mats, next + 1, mask | (uint32_t{1} << next), with, ranks);
}

}  // namespace

RankTable from_subspaces(const std::vector<Matrix>& mats) {
    if (mats.size() > kMaxGround)
        throw GroundSetTooLarge("ground set of size " + std::to_string(mats.size()) +
                                " exceeds " + std::to_string(kMaxGround));
    if (mats.empty()) return RankTable(0, {0});
    PrimeField f = mats.front().field();
    size_t ambient = mats.front().cols();
    for (const Matrix& m : mats)
        if (m.field() != f || m.cols() != ambient)
            throw AmbientMismatch("subspace matrices disagree on field or ambient width");
    std::vector<uint32_t> ranks(size_t{1} << mats.size());
    subspace_walk(mats, 0, 0, EliminationBasis(f, ambient), ranks);
    return RankTable(mats.size(), std::move(ranks));
}

RankTable restrict_to_table(const RankOracle& o, const std::vector<MessageRef>& refs) {
    if (refs.size() > kMaxGround)
        throw GroundSetTooLarge("restriction to " + std::to_string(refs.size()) +
                                " refs exceeds " + std::to_string(kMaxGround));
    std::vector<uint32_t> ranks(size_t{1} << refs.size());
    for (uint32_t mask = 0; mask < ranks.size(); ++mask) {
        std::vector<MessageRef> subset;
        for (size_t i = 0; i < refs.size(); ++i)
            if ((mask >> i) & 1u) subset.push_back(refs[i]);
        ranks[mask] = static_cast<uint32_t>(o.query(subset));
    }
    return RankTable(refs.size(), std::move(ranks));
}

DpnMapping identity_mapping(const Network& net) {
    DpnMapping f;
    for (const auto& [src, msg] : net.source_messages()) {
        MessageRef r{MessageRef::Kind::Source, msg};
        f.to_ground.emplace(r, r);
    }
    for (const Edge& e : net.edges()) {
        MessageRef r{MessageRef::Kind::Edge, e.id};
        f.to_ground.emplace(r, r);
    }
    return f;
}

namespace {

const MessageRef& mapped(const DpnMapping& f, const MessageRef& r) {
    auto it = f.to_ground.find(r);
    if (it == f.to_ground.end())
        throw PartialMapping("mapping is not defined on " + ref_name(r));
    return it->second;
}

// I(x) for a source is its message; otherwise the in-edge messages.
// O(x) is the out-edge messages plus, at a terminal, its demanded messages.
std::set<MessageRef> node_inputs(const Network& net, const Node& x, const DpnMapping& f) {
    std::set<MessageRef> in;
    if (x.role == NodeRole::Source) {
        auto it = net.source_messages().find(x.id);
        if (it != net.source_messages().end())
            in.insert(mapped(f, {MessageRef::Kind::Source, it->second}));
    } else {
        for (const std::string& eid : net.in_edges(x.id))
            in.insert(mapped(f, {MessageRef::Kind::Edge, eid}));
    }
    return in;
}

std::set<MessageRef> node_outputs(const Network& net, const Node& x, const DpnMapping& f) {
    std::set<MessageRef> out;
    for (const std::string& eid : net.out_edges(x.id))
        out.insert(mapped(f, {MessageRef::Kind::Edge, eid}));
    if (x.role == NodeRole::Terminal) {
        if (auto it = net.demands().find(x.id); it != net.demands().end())
            for (const std::string& msg : it->second)
                out.insert(mapped(f, {MessageRef::Kind::Source, msg}));
    }
    return out;
}

}  // namespace

DpnReport check_dpn(const Network& net, const RankOracle& oracle, const DpnMapping& f, size_t d) {
    DpnReport report;
    report.family = "all subsets of the source image plus per-node input/output files";

    // (1) injectivity on source messages
    std::map<MessageRef, std::string> image_of;
    std::set<MessageRef> source_image;
    for (const auto& [src, msg] : net.source_messages()) {
        const MessageRef& g = mapped(f, {MessageRef::Kind::Source, msg});
        auto [it, fresh] = image_of.emplace(g, msg);
        if (!fresh) {
            report.ok = false;
            report.violations.push_back(
                {1, "messages '" + it->second + "' and '" + msg + "' both map to " + ref_name(g)});
        }
        source_image.insert(g);
    }

    // (2) d * |A ∩ f(mu)| <= rank(A), over subsets of the source image and the
    // per-node files collected below
    std::vector<MessageRef> image(source_image.begin(), source_image.end());
    if (image.size() > kMaxGround)
        throw GroundSetTooLarge("source image of size " + std::to_string(image.size()) +
                                " exceeds " + std::to_string(kMaxGround));
    auto check_member = [&](const std::set<MessageRef>& subset) {
        size_t in_image = 0;
        for (const MessageRef& r : subset)
            if (source_image.count(r)) ++in_image;
        if (in_image == 0) return;
        std::vector<MessageRef> refs(subset.begin(), subset.end());
        size_t r = oracle.query(refs);
        if (d * in_image > r) {
            report.ok = false;
            std::string names;
            for (const MessageRef& ref : refs) names += (names.empty() ? "" : ", ") + ref_name(ref);
            report.violations.push_back(
                {2, "d*|A ∩ f(mu)| = " + std::to_string(d * in_image) + " > rank(A) = " +
                        std::to_string(r) + " for A = {" + names + "}"});
        }
    };
    for (uint32_t mask = 1; mask < (uint32_t{1} << image.size()); ++mask) {
        std::set<MessageRef> subset;
        for (size_t i = 0; i < image.size(); ++i)
            if ((mask >> i) & 1u) subset.insert(image[i]);
        check_member(subset);
    }

    // (3) rank preservation at every node, with the node files doubling as the
    // mixed sample family for (2)
    for (const Node& x : net.nodes()) {
        std::set<MessageRef> in = node_inputs(net, x, f);
        std::set<MessageRef> both = in;
        std::set<MessageRef> out = node_outputs(net, x, f);
        both.insert(out.begin(), out.end());
        check_member(both);
        std::vector<MessageRef> in_refs(in.begin(), in.end());
        std::vector<MessageRef> both_refs(both.begin(), both.end());
        size_t r_in = oracle.query(in_refs);
        size_t r_both = oracle.query(both_refs);
        if (r_in != r_both) {
            report.ok = false;
            report.violations.push_back(
                {3, "node '" + x.id + "': rank(f(I(x))) = " + std::to_string(r_in) +
                        " but rank(f(I(x) ∪ O(x))) = " + std::to_string(r_both)});
        }
    }
    return report;
}

std::string axiom_report_to_json(const AxiomReport& r, bool pretty) {
    json j;
    j["ok"] = r.ok;
    j["truncated"] = r.truncated;
    j["violations"] = json::array();
    for (const AxiomViolation& v : r.violations)
        j["violations"].push_back({{"kind", v.kind},
                                   {"set_a", subset_key(v.set_a)},
                                   {"set_b", subset_key(v.set_b)},
                                   {"detail", v.detail}});
    return pretty ? j.dump(2) + "\n" : j.dump();
}

std::string dpn_report_to_json(const DpnReport& r, bool pretty) {
    json j;
    j["ok"] = r.ok;
    j["family"] = r.family;
    j["violations"] = json::array();
    for (const DpnViolation& v : r.violations)
        j["violations"].push_back({{"condition", v.condition}, {"detail", v.detail}});
    return pretty ? j.dump(2) + "\n" : j.dump();
}

Matrix parse_matrix_fixture(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("matrix fixture is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("p") || !j.contains("rows") || !j.contains("cols") ||
        !j.contains("entries") || !j["p"].is_number_integer() ||
        !j["rows"].is_number_integer() || !j["cols"].is_number_integer() ||
        !j["entries"].is_array())
        throw SchemaError("$: expected {p, rows, cols, entries}");
    PrimeField f(static_cast<uint32_t>(j["p"].get<int64_t>()));
    size_t rows = static_cast<size_t>(j["rows"].get<int64_t>());
    size_t cols = static_cast<size_t>(j["cols"].get<int64_t>());
    if (j["entries"].size() != rows * cols)
        throw SchemaError("$.entries: expected " + std::to_string(rows * cols) + " values");
    std::vector<uint32_t> entries;
    entries.reserve(rows * cols);
    for (const auto& e : j["entries"]) {
        if (!e.is_number_integer() || e.get<int64_t>() < 0 ||
            e.get<int64_t>() >= static_cast<int64_t>(f.p()))
            throw SchemaError("$.entries: values must be integers in [0, " +
                              std::to_string(f.p()) + ")");
        entries.push_back(static_cast<uint32_t>(e.get<int64_t>()));
    }
    return Matrix(f, rows, cols, std::move(entries));
}

std::string serialize_matrix_fixture(const Matrix& m, bool pretty) {
    json j;
    j["p"] = m.field().p();
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["entries"] = m.entries();
    return pretty ? j.dump(2) + "\n" : j.dump();
}

}  // namespace mnet
