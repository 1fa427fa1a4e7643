#include "mnet/solver.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <thread>

#include "json.hpp"
#include "mnet/errors.hpp"
#include "mnet/sha256.hpp"

namespace mnet {

using nlohmann::json;

namespace {

using u128 = unsigned __int128;

constexpr u128 kU128Max = ~u128{0};

std::string u128_str(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s += static_cast<char>('0' + static_cast<int>(v % 10));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

uint64_t sat_u64(u128 v) {
    return v > std::numeric_limits<uint64_t>::max() ? std::numeric_limits<uint64_t>::max()
                                                    : static_cast<uint64_t>(v);
}

u128 sat_add(u128 a, u128 b) { return a > kU128Max - b ? kU128Max : a + b; }

// One enumerated local map: the matrix on (edge, input).
struct Slot {
    std::string edge;
    MessageRef input;
};

// What a partial assignment pins down about one edge's global transfer: the
// exact matrix when every contributing map is fixed, otherwise a basis of a
// space guaranteed to contain the row space under every completion.
struct EdgeBound {
    bool exact = false;
    Matrix rows;
    size_t dim = 0;

    EdgeBound(bool e, Matrix r, size_t d) : exact(e), rows(std::move(r)), dim(d) {}
};

struct ShardResult {
    std::optional<std::pair<u128, LinearCode>> found;
    u128 covered = 0;
};

class Searcher {
  public:
    Searcher(const Network& net, const SearchConfig& cfg)
        : net_(net), cfg_(cfg), f_(cfg.field), d_(cfg.d) {
        setup();
    }

    SearchOutcome run();

  private:
    void setup();
    Matrix digit_matrix(u128 v) const;
    EdgeBound compute_bound(const std::string& eid, const std::vector<u128>& digits,
                            size_t depth, const std::map<std::string, EdgeBound>& bounds) const;
    bool cut_check(const std::string& term,
                   const std::map<std::string, EdgeBound>& bounds) const;
    bool prefix_feasible(const std::vector<u128>& digits, size_t depth) const;
    std::vector<Matrix> subspace_candidates(const Matrix& basis) const;
    std::optional<std::map<std::string, Matrix>> feasible_terminal(
        const std::string& term, const std::map<std::string, EdgeBound>& bounds) const;
    std::optional<LinearCode> try_leaf(const std::vector<u128>& digits) const;

    struct ShardState {
        u128 lo = 0, hi = 0;
        std::vector<u128> digits;
        std::optional<std::pair<u128, LinearCode>> found;
        u128 covered = 0;
        std::atomic<uint64_t>* best_hint = nullptr;
    };
    void dfs(ShardState& st, size_t depth, u128 base_index) const;

    const Network& net_;
    SearchConfig cfg_;
    PrimeField f_;
    size_t d_;
    size_t cols_ = 0;
    std::map<std::string, Matrix> source_block_;     // source id -> identity block
    bool canonical_ = false;
    std::set<std::string> canonical_edges_;          // source edges pinned to identity
    std::vector<std::string> enum_edges_;            // enumerated, sorted by id
    std::vector<Slot> slots_;
    std::map<std::string, std::pair<size_t, size_t>> slot_range_;  // edge -> [first, last)
    std::vector<bool> boundary_;                     // prefix length -> an edge completed here
    std::vector<std::string> topo_edges_;            // every edge, tails in topo order
    std::map<std::string, std::vector<MessageRef>> inputs_of_;
    std::set<std::string> terminal_incident_;
    std::vector<std::string> terminals_;             // sorted
    std::map<std::string, std::vector<std::string>> term_in_;
    std::map<std::string, Matrix> selection_;        // terminal -> demanded-rows matrix
    u128 base_ = 0;
    u128 space_ = 0;
    bool space_saturated_ = false;
    std::vector<u128> widths_;                       // widths_[t] = base^(slots-t), saturated
    bool widths_saturated_ = false;
};

void Searcher::setup() {
    if (d_ == 0) throw DimensionMismatch("search dimension must be >= 1");
    auto violations = net_.validate();
    if (!violations.empty())
        throw InvalidNetwork("network fails validation: " + violations.front().kind + " (" +
                             violations.front().detail + ")");

    std::vector<std::string> sources = net_.source_order();
    cols_ = sources.size() * d_;
    for (size_t i = 0; i < sources.size(); ++i) {
        Matrix m(f_, d_, cols_);
        for (size_t r = 0; r < d_; ++r) m.set(r, i * d_ + r, 1);
        source_block_.emplace(sources[i], std::move(m));
    }

    for (const Edge& e : net_.edges()) {
        const Node* tail = net_.find_node(e.tail);
        const Node* head = net_.find_node(e.head);
        std::vector<MessageRef> ins;
        if (tail->role == NodeRole::Source) {
            ins.push_back({MessageRef::Kind::Source, net_.source_messages().at(tail->id)});
        } else {
            for (const std::string& eid : net_.in_edges(tail->id))
                ins.push_back({MessageRef::Kind::Edge, eid});
        }
        if (ins.empty())
            throw InvalidNetwork("edge '" + e.id +
                                 "' has no inputs at its tail; no map can cover it");
        inputs_of_.emplace(e.id, std::move(ins));
        if (head->role == NodeRole::Terminal) terminal_incident_.insert(e.id);
    }

    std::set<std::string> demanded;
    for (const auto& [term, msgs] : net_.demands())
        for (const std::string& m : msgs) demanded.insert(m);
    canonical_ = cfg_.canonicalize_sources;
    for (const std::string& s : sources) {
        const auto& outs = net_.out_edges(s);
        if (outs.size() != 1 || terminal_incident_.count(outs.front()) ||
            !demanded.count(net_.source_messages().at(s))) {
            canonical_ = false;
            break;
        }
    }
    if (canonical_)
        for (const std::string& s : sources) canonical_edges_.insert(net_.out_edges(s).front());

    for (const Edge& e : net_.edges()) {
        if (terminal_incident_.count(e.id) || canonical_edges_.count(e.id)) continue;
        enum_edges_.push_back(e.id);
    }
    std::sort(enum_edges_.begin(), enum_edges_.end());
    for (const std::string& eid : enum_edges_) {
        size_t first = slots_.size();
        for (const MessageRef& in : inputs_of_.at(eid)) slots_.push_back({eid, in});
        slot_range_.emplace(eid, std::make_pair(first, slots_.size()));
    }
    boundary_.assign(slots_.size() + 1, false);
    for (const auto& [eid, range] : slot_range_) boundary_[range.second] = true;
    boundary_[0] = false;

    for (const std::string& node : net_.topo_order())
        for (const std::string& eid : net_.out_edges(node)) topo_edges_.push_back(eid);

    for (const Node& n : net_.nodes()) {
        if (n.role != NodeRole::Terminal) continue;
        terminals_.push_back(n.id);
        term_in_[n.id] = net_.in_edges(n.id);
        std::vector<Matrix> parts;
        if (auto it = net_.demands().find(n.id); it != net_.demands().end())
            for (const std::string& msg : it->second)
                parts.push_back(source_block_.at(*net_.message_source(msg)));
        selection_.emplace(n.id, vstack(f_, cols_, parts));
    }
    std::sort(terminals_.begin(), terminals_.end());

    base_ = 1;
    for (size_t i = 0; i < d_ * d_; ++i) {
        if (base_ > kU128Max / f_.p()) throw DimensionMismatch("slot base overflows");
        base_ *= f_.p();
    }
    space_ = 1;
    for (size_t i = 0; i < slots_.size(); ++i) {
        if (space_ > kU128Max / base_) {
            space_ = kU128Max;
            space_saturated_ = true;
            break;
        }
        space_ *= base_;
    }
    widths_.assign(slots_.size() + 1, 1);
    for (size_t t = slots_.size(); t-- > 0;) {
        if (widths_[t + 1] > kU128Max / base_) {
            widths_[t] = kU128Max;
            widths_saturated_ = true;
        } else {
            widths_[t] = widths_[t + 1] * base_;
            if (widths_[t + 1] == kU128Max) widths_[t] = kU128Max;
        }
    }
}

Matrix Searcher::digit_matrix(u128 v) const {
    std::vector<uint32_t> entries(d_ * d_);
    for (size_t t = d_ * d_; t-- > 0;) {
        entries[t] = static_cast<uint32_t>(v % f_.p());
        v /= f_.p();
    }
    return Matrix(f_, d_, d_, std::move(entries));
}

EdgeBound Searcher::compute_bound(const std::string& eid, const std::vector<u128>& digits,
                                  size_t depth,
                                  const std::map<std::string, EdgeBound>& bounds) const {
    const std::vector<MessageRef>& inputs = inputs_of_.at(eid);

    if (canonical_edges_.count(eid)) {
        const Matrix& block = source_block_.at(*net_.message_source(inputs.front().id));
        return {true, block, d_};
    }

    auto range_it = slot_range_.find(eid);
    bool assigned = range_it != slot_range_.end() && range_it->second.second <= depth;
    bool inputs_exact = true;
    for (const MessageRef& in : inputs)
        if (in.kind == MessageRef::Kind::Edge && !bounds.at(in.id).exact) inputs_exact = false;

    if (assigned && inputs_exact) {
        Matrix m(f_, d_, cols_);
        size_t slot = range_it->second.first;
        for (const MessageRef& in : inputs) {
            Matrix a = digit_matrix(digits[slot++]);
            const Matrix& src = in.kind == MessageRef::Kind::Source
                                    ? source_block_.at(*net_.message_source(in.id))
                                    : bounds.at(in.id).rows;
            m = add(m, mul(a, src));
        }
        EliminationBasis eb(f_, cols_);
        eb.insert_rows(m);
        return {true, std::move(m), eb.rank()};
    }

    EliminationBasis eb(f_, cols_);
    for (const MessageRef& in : inputs) {
        if (in.kind == MessageRef::Kind::Source)
            eb.insert_rows(source_block_.at(*net_.message_source(in.id)));
        else
            eb.insert_rows(bounds.at(in.id).rows);
    }
    size_t dim = eb.rank();
    return {false, eb.basis_matrix(), dim};
}

bool Searcher::cut_check(const std::string& term,
                         const std::map<std::string, EdgeBound>& bounds) const {
    const std::vector<std::string>& ins = term_in_.at(term);
    const Matrix& sel = selection_.at(term);
    if (sel.rows() == 0) return true;
    size_t r = ins.size();

    std::vector<uint32_t> masks;
    if (r <= 12) {
        for (uint32_t m = 0; m < (uint32_t{1} << r); ++m) masks.push_back(m);
    } else {
        masks = {0, static_cast<uint32_t>((uint64_t{1} << r) - 1)};
    }

    for (uint32_t mask : masks) {
        // F = edges whose bit is set: they contribute capacity; the rest
        // contribute their containing spaces in full.
        EliminationBasis eb(f_, cols_);
        size_t cap = 0;
        for (size_t i = 0; i < r; ++i) {
            const EdgeBound& b = bounds.at(ins[i]);
            if ((mask >> i) & 1u)
                cap += std::min(d_, b.dim);
            else
                eb.insert_rows(b.rows);
        }
        size_t before = eb.rank();
        eb.insert_rows(sel);
        if (eb.rank() - before > cap) return false;
    }
    return true;
}

bool Searcher::prefix_feasible(const std::vector<u128>& digits, size_t depth) const {
    std::map<std::string, EdgeBound> bounds;
    for (const std::string& eid : topo_edges_)
        bounds.emplace(eid, compute_bound(eid, digits, depth, bounds));
    for (const std::string& term : terminals_)
        if (!cut_check(term, bounds)) return false;
    return true;
}

// All d-dimensional subspaces of the row space of `basis` (whose rows are
// independent), enumerated as reduced echelon forms in basis coordinates:
// deterministic and duplicate-free.
std::vector<Matrix> Searcher::subspace_candidates(const Matrix& basis) const {
    size_t w = basis.rows();
    std::vector<Matrix> out;
    std::vector<size_t> pivots(d_);
    for (size_t i = 0; i < d_; ++i) pivots[i] = i;

    auto emit_for_pivots = [&]() {
        std::vector<std::pair<size_t, size_t>> free_pos;
        std::set<size_t> pivot_set(pivots.begin(), pivots.end());
        for (size_t i = 0; i < d_; ++i)
            for (size_t c = pivots[i] + 1; c < w; ++c)
                if (!pivot_set.count(c)) free_pos.emplace_back(i, c);
        u128 total = 1;
        for (size_t i = 0; i < free_pos.size(); ++i) total *= f_.p();
        for (u128 v = 0; v < total; ++v) {
            Matrix coords(f_, d_, w);
            for (size_t i = 0; i < d_; ++i) coords.set(i, pivots[i], 1);
            u128 rem = v;
            for (size_t i = free_pos.size(); i-- > 0;) {
                coords.set(free_pos[i].first, free_pos[i].second,
                           static_cast<uint32_t>(rem % f_.p()));
                rem /= f_.p();
            }
            out.push_back(mul(coords, basis));
        }
    };

    // combinations of pivot columns in lexicographic order
    while (true) {
        emit_for_pivots();
        size_t i = d_;
        while (i-- > 0) {
            if (pivots[i] + 1 <= w - (d_ - i)) {
                ++pivots[i];
                for (size_t j = i + 1; j < d_; ++j) pivots[j] = pivots[j - 1] + 1;
                break;
            }
            if (i == 0) return out;
        }
    }
}

std::optional<std::map<std::string, Matrix>> Searcher::feasible_terminal(
    const std::string& term, const std::map<std::string, EdgeBound>& bounds) const {
    const std::vector<std::string>& ins = term_in_.at(term);
    const Matrix& sel = selection_.at(term);

    auto pad_to_d = [&](const Matrix& rows) {
        Matrix m(f_, d_, cols_);
        for (size_t r = 0; r < rows.rows() && r < d_; ++r)
            for (size_t c = 0; c < cols_; ++c) m.set(r, c, rows.at(r, c));
        return m;
    };

    std::map<std::string, Matrix> chosen;
    EliminationBasis fixed(f_, cols_);
    std::vector<std::string> variable;
    for (const std::string& eid : ins) {
        const EdgeBound& b = bounds.at(eid);
        if (b.dim <= d_) {
            chosen.emplace(eid, pad_to_d(b.rows));
            fixed.insert_rows(b.rows);
        } else {
            variable.push_back(eid);
        }
    }

    auto decodes = [&](const EliminationBasis& eb) {
        for (size_t r = 0; r < sel.rows(); ++r)
            if (!eb.contains(sel.row(r))) return false;
        return true;
    };

    std::function<bool(size_t, const EliminationBasis&)> descend =
        [&](size_t i, const EliminationBasis& eb) {
            if (i == variable.size()) return decodes(eb);
            for (const Matrix& cand : subspace_candidates(bounds.at(variable[i]).rows)) {
                EliminationBasis next = eb;
                next.insert_rows(cand);
                chosen.insert_or_assign(variable[i], cand);
                if (descend(i + 1, next)) return true;
            }
            return false;
        };
    if (!descend(0, fixed)) return std::nullopt;
    return chosen;
}

std::optional<LinearCode> Searcher::try_leaf(const std::vector<u128>& digits) const {
    std::map<std::string, EdgeBound> bounds;
    for (const std::string& eid : topo_edges_)
        bounds.emplace(eid, compute_bound(eid, digits, slots_.size(), bounds));

    std::map<std::string, std::map<std::string, Matrix>> plans;
    for (const std::string& term : terminals_) {
        auto plan = feasible_terminal(term, bounds);
        if (!plan) return std::nullopt;
        plans.emplace(term, std::move(*plan));
    }

    LinearCode code(f_, d_);
    for (const std::string& eid : canonical_edges_)
        code.set_map(eid, inputs_of_.at(eid).front(), identity(f_, d_));
    for (size_t i = 0; i < slots_.size(); ++i)
        code.set_map(slots_[i].edge, slots_[i].input, digit_matrix(digits[i]));

    for (const std::string& term : terminals_) {
        const auto& plan = plans.at(term);
        std::vector<Matrix> bt_parts;
        for (const std::string& eid : term_in_.at(term)) {
            const Matrix& target = plan.at(eid);
            const std::vector<MessageRef>& inputs = inputs_of_.at(eid);
            std::vector<Matrix> t_parts;
            for (const MessageRef& in : inputs)
                t_parts.push_back(in.kind == MessageRef::Kind::Source
                                      ? source_block_.at(*net_.message_source(in.id))
                                      : bounds.at(in.id).rows);
            Matrix stacked = vstack(f_, cols_, t_parts);
            auto coeff = solve_decoder(stacked, target);
            if (!coeff) throw Error("internal: chosen subspace escapes its bundle");
            for (size_t i = 0; i < inputs.size(); ++i) {
                Matrix a(f_, d_, d_);
                for (size_t r = 0; r < d_; ++r)
                    for (size_t c = 0; c < d_; ++c) a.set(r, c, coeff->at(r, i * d_ + c));
                code.set_map(eid, inputs[i], std::move(a));
            }
            bt_parts.push_back(target);
        }
        Matrix bt = vstack(f_, cols_, bt_parts);
        auto dec = solve_decoder(bt, selection_.at(term));
        if (!dec) throw Error("internal: feasible terminal lost decodability");
        code.decoders.insert_or_assign(term, std::move(*dec));
    }

    Verdict verdict = verify_solution(net_, code);
    if (!verdict.solution) throw Error("internal: synthesized code fails verification");
    return code;
}

void Searcher::dfs(ShardState& st, size_t depth, u128 base_index) const {
    if (st.found) return;
    u128 node_hi = sat_add(base_index, widths_[depth]);
    if (node_hi <= st.lo || base_index >= st.hi) return;

    uint64_t hint = st.best_hint->load(std::memory_order_relaxed);
    if (static_cast<u128>(hint) < base_index) return;  // a lower index already won

    u128 overlap = std::min(node_hi, st.hi) - std::max(base_index, st.lo);
    if (depth > 0 && boundary_[depth] && !prefix_feasible(st.digits, depth)) {
        st.covered += overlap;
        return;
    }
    if (depth == slots_.size()) {
        st.covered += 1;
        if (auto code = try_leaf(st.digits)) {
            st.found = {base_index, std::move(*code)};
            uint64_t idx = sat_u64(base_index);
            uint64_t cur = st.best_hint->load(std::memory_order_relaxed);
            while (idx < cur &&
                   !st.best_hint->compare_exchange_weak(cur, idx, std::memory_order_relaxed)) {
            }
        }
        return;
    }
    u128 child_w = widths_[depth + 1];
    for (u128 v = 0; v < base_; ++v) {
        u128 child_base = sat_add(base_index, v * child_w);
        if (child_base >= st.hi) break;
        if (sat_add(child_base, child_w) <= st.lo) continue;
        st.digits[depth] = v;
        dfs(st, depth + 1, child_base);
        if (st.found) return;
    }
}

SearchOutcome Searcher::run() {
    u128 limit = space_;
    if (cfg_.budget && static_cast<u128>(*cfg_.budget) < limit)
        limit = static_cast<u128>(*cfg_.budget);

    size_t shard_count = std::max<size_t>(1, cfg_.shards);
    std::atomic<uint64_t> best_hint{std::numeric_limits<uint64_t>::max()};
    std::vector<ShardResult> results(shard_count);

    auto run_shard = [&](size_t s) {
        ShardState st;
        st.lo = limit / shard_count * s + std::min<u128>(s, limit % shard_count);
        st.hi = limit / shard_count * (s + 1) + std::min<u128>(s + 1, limit % shard_count);
        st.digits.assign(slots_.size(), 0);
        st.best_hint = &best_hint;
        if (st.lo < st.hi) dfs(st, 0, 0);
        results[s].found = std::move(st.found);
        results[s].covered = st.covered;
    };

    if (shard_count == 1) {
        run_shard(0);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(shard_count);
        for (size_t s = 0; s < shard_count; ++s) workers.emplace_back(run_shard, s);
        for (std::thread& w : workers) w.join();
    }

    std::string mode = canonical_
                           ? "source maps fixed to identity on " +
                                 std::to_string(canonical_edges_.size()) + " source edges; "
                           : "";
    std::string desc = mode + "enumerated " + std::to_string(slots_.size()) +
                       " local-map slots across " + std::to_string(enum_edges_.size()) +
                       " non-terminal edges over GF(" + std::to_string(f_.p()) +
                       "), d=" + std::to_string(d_) + ", " + u128_str(base_) +
                       " values per slot, space " + u128_str(space_) +
                       (space_saturated_ ? " (saturated)" : "") +
                       "; terminal-incident maps and decoders synthesized per terminal";

    SearchOutcome out;
    out.canonicalized = canonical_;
    std::optional<std::pair<u128, LinearCode>> best;
    for (ShardResult& r : results)
        if (r.found && (!best || r.found->first < best->first)) best = std::move(r.found);
    if (best) {
        out.kind = SearchOutcome::Kind::Found;
        out.code = std::move(best->second);
        out.found_index = sat_u64(best->first);
        out.enumerated = sat_u64(best->first + 1);
        out.description = desc + "; stopped at the first solution";
        return out;
    }
    u128 covered = 0;
    for (const ShardResult& r : results) covered = sat_add(covered, r.covered);
    if (covered != limit) throw Error("internal: shards did not cover the full range");
    if (limit == space_ && !space_saturated_) {
        out.kind = SearchOutcome::Kind::ExhaustedNone;
        out.enumerated = sat_u64(space_);
        out.description = desc + "; full space covered, no solution exists";
    } else {
        out.kind = SearchOutcome::Kind::Inconclusive;
        out.enumerated = sat_u64(limit);
        out.description = desc + "; truncated to the first " + u128_str(limit) +
                          " candidates by budget, no solution among them";
    }
    return out;
}

}  // namespace

std::string outcome_name(SearchOutcome::Kind k) {
    switch (k) {
        case SearchOutcome::Kind::Found: return "found";
        case SearchOutcome::Kind::ExhaustedNone: return "exhausted_none";
        case SearchOutcome::Kind::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

SearchOutcome search(const Network& net, const SearchConfig& cfg) {
    if (cfg.budget && *cfg.budget == 0)
        throw BudgetZero("budget must be at least 1 when present");
    Searcher searcher(net, cfg);
    return searcher.run();
}

std::string certify(const Network& net, const SearchConfig& cfg, const SearchOutcome& out,
                    bool pretty) {
    json j;
    j["network_sha"] = sha256_hex(serialize_network(net));
    j["p"] = cfg.field.p();
    j["d"] = cfg.d;
    j["canonicalized"] = out.canonicalized;
    j["enumerated"] = out.enumerated;
    j["outcome"] = outcome_name(out.kind);
    j["description"] = out.description;
    if (out.kind == SearchOutcome::Kind::Found) {
        j["found_index"] = out.found_index;
        j["code"] = json::parse(serialize_code(*out.code));
    }
    return pretty ? j.dump(2) + "\n" : j.dump();
}

}  // namespace mnet
