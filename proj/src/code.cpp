#include "mnet/code.hpp"

#include <algorithm>

#include "json.hpp"
#include "mnet/errors.hpp"

namespace mnet {

using nlohmann::json;

const Matrix* LinearCode::map_for(const std::string& edge, const MessageRef& input) const {
    auto it = local_maps.find({edge, input});
    return it == local_maps.end() ? nullptr : &it->second;
}

void LinearCode::set_map(const std::string& edge, MessageRef input, Matrix m) {
    local_maps.insert_or_assign({edge, std::move(input)}, std::move(m));
}

namespace {

json matrix_rows(const Matrix& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_rows(const json& j, PrimeField f, size_t rows, size_t cols,
                        const std::string& path) {
    if (!j.is_array() || j.size() != rows)
        throw ShapeMismatch(path + ": expected " + std::to_string(rows) + " rows");
    std::vector<uint32_t> entries;
    entries.reserve(rows * cols);
    for (size_t i = 0; i < rows; ++i) {
        const json& r = j[i];
        if (!r.is_array() || r.size() != cols)
            throw ShapeMismatch(path + "[" + std::to_string(i) + "]: expected " +
                                std::to_string(cols) + " entries");
        for (size_t k = 0; k < cols; ++k) {
            const json& e = r[k];
            if (!e.is_number_integer() || e.get<int64_t>() < 0 ||
                e.get<int64_t>() >= static_cast<int64_t>(f.p()))
                throw SchemaError(path + "[" + std::to_string(i) + "][" + std::to_string(k) +
                                  "]: entries must be integers in [0, " + std::to_string(f.p()) +
                                  ")");
            entries.push_back(static_cast<uint32_t>(e.get<int64_t>()));
        }
    }
    return Matrix(f, rows, cols, std::move(entries));
}

}  // namespace

LinearCode parse_code(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("code document is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("$: expected an object");
    if (!j.contains("p") || !j["p"].is_number_integer())
        throw SchemaError("$.p: expected an integer");
    if (!j.contains("d") || !j["d"].is_number_integer() || j["d"].get<int64_t>() < 1)
        throw SchemaError("$.d: expected an integer >= 1");
    PrimeField f(static_cast<uint32_t>(j["p"].get<int64_t>()));
    size_t d = static_cast<size_t>(j["d"].get<int64_t>());
    LinearCode code(f, d);
    if (!j.contains("local_maps") || !j["local_maps"].is_array())
        throw SchemaError("$.local_maps: expected an array");
    for (size_t i = 0; i < j["local_maps"].size(); ++i) {
        std::string path = "$.local_maps[" + std::to_string(i) + "]";
        const json& m = j["local_maps"][i];
        if (!m.is_object() || !m.contains("edge") || !m.contains("input") || !m.contains("matrix"))
            throw SchemaError(path + ": expected {edge, input, matrix}");
        if (!m["edge"].is_string()) throw SchemaError(path + ".edge: expected a string");
        const json& in = m["input"];
        if (!in.is_object() || !in.contains("kind") || !in.contains("id") ||
            !in["kind"].is_string() || !in["id"].is_string())
            throw SchemaError(path + ".input: expected {kind, id}");
        std::string kind = in["kind"].get<std::string>();
        MessageRef ref;
        if (kind == "source")
            ref.kind = MessageRef::Kind::Source;
        else if (kind == "edge")
            ref.kind = MessageRef::Kind::Edge;
        else
            throw SchemaError(path + ".input.kind: expected 'source' or 'edge'");
        ref.id = in["id"].get<std::string>();
        code.set_map(m["edge"].get<std::string>(), std::move(ref),
                     matrix_from_rows(m["matrix"], f, d, d, path + ".matrix"));
    }
    if (j.contains("decoders")) {
        if (!j["decoders"].is_array()) throw SchemaError("$.decoders: expected an array");
        for (size_t i = 0; i < j["decoders"].size(); ++i) {
            std::string path = "$.decoders[" + std::to_string(i) + "]";
            const json& dec = j["decoders"][i];
            if (!dec.is_object() || !dec.contains("terminal") || !dec.contains("matrix") ||
                !dec["terminal"].is_string())
                throw SchemaError(path + ": expected {terminal, matrix}");
            const json& rows = dec["matrix"];
            if (!rows.is_array() || rows.empty() || !rows[0].is_array())
                throw SchemaError(path + ".matrix: expected a non-empty array of rows");
            code.decoders.emplace(
                dec["terminal"].get<std::string>(),
                matrix_from_rows(rows, f, rows.size(), rows[0].size(), path + ".matrix"));
        }
    }
    return code;
}

std::string serialize_code(const LinearCode& c, bool pretty) {
    json j;
    j["p"] = c.field.p();
    j["d"] = c.d;
    j["local_maps"] = json::array();
    for (const auto& [key, m] : c.local_maps) {
        const auto& [edge, input] = key;
        j["local_maps"].push_back(
            {{"edge", edge},
             {"input",
              {{"kind", input.kind == MessageRef::Kind::Source ? "source" : "edge"},
               {"id", input.id}}},
             {"matrix", matrix_rows(m)}});
    }
    if (!c.decoders.empty()) {
        j["decoders"] = json::array();
        for (const auto& [term, m] : c.decoders)
            j["decoders"].push_back({{"terminal", term}, {"matrix", matrix_rows(m)}});
    }
    return pretty ? j.dump(2) + "\n" : j.dump();
}

namespace {

// The input universe of an edge: the tail's message if the tail is a source,
// otherwise the tail's in-edges.
std::vector<MessageRef> edge_inputs(const Network& net, const Edge& e) {
    const Node* tail = net.find_node(e.tail);
    if (!tail) throw ShapeMismatch("edge '" + e.id + "' has unknown tail '" + e.tail + "'");
    std::vector<MessageRef> ins;
    if (tail->role == NodeRole::Source) {
        auto it = net.source_messages().find(tail->id);
        if (it == net.source_messages().end())
            throw ShapeMismatch("source '" + tail->id + "' generates no message");
        ins.push_back({MessageRef::Kind::Source, it->second});
    } else {
        for (const std::string& eid : net.in_edges(tail->id))
            ins.push_back({MessageRef::Kind::Edge, eid});
    }
    return ins;
}

void check_code_shapes(const Network& net, const LinearCode& code) {
    for (const auto& [key, m] : code.local_maps) {
        const auto& [edge_id, input] = key;
        if (m.field() != code.field || m.rows() != code.d || m.cols() != code.d)
            throw ShapeMismatch("local map for edge '" + edge_id + "' is not a " +
                                std::to_string(code.d) + "x" + std::to_string(code.d) +
                                " matrix over GF(" + std::to_string(code.field.p()) + ")");
        const Edge* e = net.find_edge(edge_id);
        if (!e) throw ShapeMismatch("local map refers to unknown edge '" + edge_id + "'");
        std::vector<MessageRef> legal = edge_inputs(net, *e);
        if (std::find(legal.begin(), legal.end(), input) == legal.end())
            throw ShapeMismatch("local map for edge '" + edge_id + "' names input " +
                                ref_name(input) + " which does not feed its tail");
    }
}

}  // namespace

GlobalTransfer propagate(const Network& net, const LinearCode& code) {
    check_code_shapes(net, code);
    GlobalTransfer gt(code.field, code.d);
    gt.source_order = net.source_order();
    for (size_t i = 0; i < gt.source_order.size(); ++i)
        gt.block_col[gt.source_order[i]] = i * code.d;
    const size_t cols = gt.cols();

    for (const std::string& node_id : net.topo_order()) {
        for (const std::string& eid : net.out_edges(node_id)) {
            const Edge& e = *net.find_edge(eid);
            std::vector<MessageRef> inputs = edge_inputs(net, e);
            bool covered = false;
            Matrix m(code.field, code.d, cols);
            for (const MessageRef& in : inputs) {
                const Matrix* a = code.map_for(eid, in);
                if (!a) continue;  // absent map = zero
                covered = true;
                if (in.kind == MessageRef::Kind::Source) {
                    auto src = net.message_source(in.id);
                    size_t base = gt.block_col.at(*src);
                    for (size_t r = 0; r < code.d; ++r)
                        for (size_t c = 0; c < code.d; ++c)
                            m.set(r, base + c, code.field.add(m.at(r, base + c), a->at(r, c)));
                } else {
                    m = add(m, mul(*a, gt.edge_matrix.at(in.id)));
                }
            }
            if (!covered)
                throw UncoveredEdge("edge '" + eid + "' has no local map on any input of its tail");
            gt.edge_matrix.emplace(eid, std::move(m));
        }
    }
    return gt;
}

Matrix block_selection(const GlobalTransfer& gt, const std::string& source) {
    auto it = gt.block_col.find(source);
    if (it == gt.block_col.end()) throw UnknownNode("no source '" + source + "' in block layout");
    Matrix s(gt.field, gt.d, gt.cols());
    for (size_t r = 0; r < gt.d; ++r) s.set(r, it->second + r, 1);
    return s;
}

Matrix demand_selection(const GlobalTransfer& gt, const Network& net,
                        const std::vector<std::string>& messages) {
    std::vector<Matrix> parts;
    for (const std::string& msg : messages) {
        auto src = net.message_source(msg);
        if (!src) throw UnknownMessageRef("no source generates message '" + msg + "'");
        parts.push_back(block_selection(gt, *src));
    }
    return vstack(gt.field, gt.cols(), parts);
}

Verdict verify_solution(const Network& net, const LinearCode& code) {
    GlobalTransfer gt = propagate(net, code);
    Verdict verdict;
    verdict.source_order = gt.source_order;

    std::vector<std::string> terminals;
    for (const Node& n : net.nodes())
        if (n.role == NodeRole::Terminal) terminals.push_back(n.id);
    std::sort(terminals.begin(), terminals.end());

    verdict.solution = true;
    for (const std::string& t : terminals) {
        TerminalVerdict tv;
        tv.terminal = t;
        std::vector<Matrix> parts;
        for (const std::string& eid : net.in_edges(t)) parts.push_back(gt.edge_matrix.at(eid));
        Matrix bt = vstack(gt.field, gt.cols(), parts);
        std::vector<std::string> wants;
        if (auto it = net.demands().find(t); it != net.demands().end()) wants = it->second;
        Matrix st = demand_selection(gt, net, wants);
        auto dec = solve_decoder(bt, st);
        tv.decodable = dec.has_value();
        if (dec) {
            tv.decoder = std::move(*dec);
        } else {
            // name the first message whose block falls outside the row space
            EliminationBasis eb(gt.field, gt.cols());
            eb.insert_rows(bt);
            for (const std::string& msg : wants) {
                Matrix sel = demand_selection(gt, net, {msg});
                bool ok = true;
                for (size_t r = 0; r < sel.rows(); ++r)
                    if (!eb.contains(sel.row(r))) ok = false;
                if (!ok) {
                    tv.witness = "message '" + msg + "' is not recoverable at '" + t + "'";
                    break;
                }
            }
            verdict.solution = false;
        }
        if (auto it = code.decoders.find(t); it != code.decoders.end()) {
            const Matrix& sup = it->second;
            tv.supplied_decoder_ok = sup.rows() == st.rows() && sup.cols() == bt.rows() &&
                                     mul(sup, bt) == st;
        }
        verdict.terminals.push_back(std::move(tv));
    }
    return verdict;
}

std::string verdict_to_json(const Verdict& v, bool pretty) {
    json j;
    j["solution"] = v.solution;
    j["source_block_order"] = v.source_order;
    j["terminals"] = json::array();
    for (const TerminalVerdict& tv : v.terminals) {
        json t;
        t["terminal"] = tv.terminal;
        t["decodable"] = tv.decodable;
        if (tv.decoder) t["decoder"] = matrix_rows(*tv.decoder);
        if (!tv.witness.empty()) t["witness"] = tv.witness;
        if (tv.supplied_decoder_ok) t["supplied_decoder_ok"] = *tv.supplied_decoder_ok;
        j["terminals"].push_back(std::move(t));
    }
    return pretty ? j.dump(2) + "\n" : j.dump();
}

RankOracle induced_rank_oracle(const Network& net, const LinearCode& code) {
    GlobalTransfer gt = propagate(net, code);
    std::map<MessageRef, Matrix> mats;
    for (const auto& [src, msg] : net.source_messages())
        mats.emplace(MessageRef{MessageRef::Kind::Source, msg}, block_selection(gt, src));
    for (const auto& [eid, m] : gt.edge_matrix)
        mats.emplace(MessageRef{MessageRef::Kind::Edge, eid}, m);
    return RankOracle(gt.field, gt.cols(), std::move(mats));
}

}  // namespace mnet
