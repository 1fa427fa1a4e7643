#include "mnet/network.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "json.hpp"
#include "mnet/errors.hpp"

namespace mnet {

using nlohmann::json;

std::string role_name(NodeRole r) {
    switch (r) {
        case NodeRole::Source: return "source";
        case NodeRole::Intermediate: return "intermediate";
        case NodeRole::Terminal: return "terminal";
    }
    return "?";
}

std::optional<NodeRole> role_from_name(const std::string& s) {
    if (s == "source") return NodeRole::Source;
    if (s == "intermediate") return NodeRole::Intermediate;
    if (s == "terminal") return NodeRole::Terminal;
    return std::nullopt;
}

Network::Network(std::vector<Node> nodes, std::vector<Edge> edges,
                 std::map<std::string, std::string> source_messages,
                 std::map<std::string, std::vector<std::string>> demands)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      source_messages_(std::move(source_messages)),
      demands_(std::move(demands)) {
    for (size_t i = 0; i < nodes_.size(); ++i) {
        node_index_.emplace(nodes_[i].id, i);  // duplicates keep the first; validate() reports
        in_.try_emplace(nodes_[i].id);
        out_.try_emplace(nodes_[i].id);
    }
    for (size_t i = 0; i < edges_.size(); ++i) {
        edge_index_.emplace(edges_[i].id, i);
        if (auto it = out_.find(edges_[i].tail); it != out_.end()) it->second.push_back(edges_[i].id);
        if (auto it = in_.find(edges_[i].head); it != in_.end()) it->second.push_back(edges_[i].id);
    }
    for (auto& [_, v] : in_) std::sort(v.begin(), v.end());
    for (auto& [_, v] : out_) std::sort(v.begin(), v.end());
}

const Node* Network::find_node(const std::string& id) const {
    auto it = node_index_.find(id);
    return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

const Edge* Network::find_edge(const std::string& id) const {
    auto it = edge_index_.find(id);
    return it == edge_index_.end() ? nullptr : &edges_[it->second];
}

const std::vector<std::string>& Network::in_edges(const std::string& node) const {
    auto it = in_.find(node);
    if (it == in_.end()) throw UnknownNode("no node with id '" + node + "'");
    return it->second;
}

const std::vector<std::string>& Network::out_edges(const std::string& node) const {
    auto it = out_.find(node);
    if (it == out_.end()) throw UnknownNode("no node with id '" + node + "'");
    return it->second;
}

std::vector<std::string> Network::topo_order() const {
    std::map<std::string, size_t> indeg;
    for (const Node& n : nodes_) indeg[n.id] = 0;
    for (const Edge& e : edges_)
        if (node_index_.count(e.tail) && node_index_.count(e.head) && e.tail != e.head)
            ++indeg[e.head];
    // min-heap on node id makes the order deterministic
    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& [id, d] : indeg)
        if (d == 0) ready.push(id);
    std::vector<std::string> order;
    order.reserve(nodes_.size());
    while (!ready.empty()) {
        std::string id = ready.top();
        ready.pop();
        order.push_back(id);
        auto it = out_.find(id);
        if (it == out_.end()) continue;
        for (const std::string& eid : it->second) {
            const Edge& e = edges_[edge_index_.at(eid)];
            if (!node_index_.count(e.head) || e.head == e.tail) continue;
            if (--indeg[e.head] == 0) ready.push(e.head);
        }
    }
    if (order.size() != indeg.size()) throw CycleDetected("network contains a directed cycle");
    return order;
}

std::vector<Violation> Network::validate() const {
    std::vector<Violation> v;
    std::set<std::string> node_ids, edge_ids, message_ids;
    for (const Node& n : nodes_)
        if (!node_ids.insert(n.id).second)
            v.push_back({"duplicate-node-id", n.id, "node id appears more than once"});
    for (const Edge& e : edges_) {
        if (!edge_ids.insert(e.id).second)
            v.push_back({"duplicate-edge-id", e.id, "edge id appears more than once"});
        if (!node_ids.count(e.tail))
            v.push_back({"unknown-endpoint", e.id, "tail '" + e.tail + "' is not a node"});
        if (!node_ids.count(e.head))
            v.push_back({"unknown-endpoint", e.id, "head '" + e.head + "' is not a node"});
    }
    for (const Node& n : nodes_) {
        if (n.role == NodeRole::Source && !in_.at(n.id).empty())
            v.push_back({"source-has-in-edge", n.id, "sources must not have incoming edges"});
        if (n.role == NodeRole::Terminal && !out_.at(n.id).empty())
            v.push_back({"terminal-has-out-edge", n.id, "terminals must not have outgoing edges"});
        if (n.role == NodeRole::Source && !source_messages_.count(n.id))
            v.push_back({"source-without-message", n.id, "source generates no message"});
    }
    for (const auto& [src, msg] : source_messages_) {
        const Node* n = find_node(src);
        if (!n)
            v.push_back({"message-on-unknown-node", src, "source_messages names a missing node"});
        else if (n->role != NodeRole::Source)
            v.push_back({"message-on-non-source", src, "only sources generate messages"});
        if (!message_ids.insert(msg).second)
            v.push_back({"duplicate-message-id", msg, "two sources generate the same message"});
    }
    for (const auto& [term, wants] : demands_) {
        const Node* n = find_node(term);
        if (!n)
            v.push_back({"demand-on-unknown-node", term, "demands name a missing node"});
        else if (n->role != NodeRole::Terminal)
            v.push_back({"demand-on-non-terminal", term, "only terminals demand messages"});
        for (const std::string& msg : wants)
            if (!message_ids.count(msg))
                v.push_back({"demand-unknown-message", msg,
                             "terminal '" + term + "' demands a message no source generates"});
    }
    try {
        topo_order();
    } catch (const CycleDetected&) {
        v.push_back({"cycle", "", "network contains a directed cycle"});
    }
    return v;
}

std::vector<std::string> Network::source_order() const {
    std::vector<std::string> s;
    for (const Node& n : nodes_)
        if (n.role == NodeRole::Source) s.push_back(n.id);
    std::sort(s.begin(), s.end());
    return s;
}

std::optional<std::string> Network::message_source(const std::string& msg) const {
    for (const auto& [src, m] : source_messages_)
        if (m == msg) return src;
    return std::nullopt;
}

bool Network::operator==(const Network& o) const {
    return nodes_ == o.nodes_ && edges_ == o.edges_ && source_messages_ == o.source_messages_ &&
           demands_ == o.demands_;
}

namespace {

const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + ": missing key '" + key + "'");
    return *it;
}

std::string need_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path + ": expected a string");
    return j.get<std::string>();
}

}  // namespace

Network parse_network(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("network document is not valid JSON: ") + e.what());
    }
    const json& jnodes = need(j, "nodes", "$");
    if (!jnodes.is_array()) throw SchemaError("$.nodes: expected an array");
    std::vector<Node> nodes;
    std::set<std::string> ids;
    for (size_t i = 0; i < jnodes.size(); ++i) {
        std::string path = "$.nodes[" + std::to_string(i) + "]";
        std::string id = need_string(need(jnodes[i], "id", path), path + ".id");
        std::string role = need_string(need(jnodes[i], "role", path), path + ".role");
        auto r = role_from_name(role);
        if (!r) throw SchemaError(path + ".role: unknown role '" + role + "'");
        nodes.push_back({id, *r});
        ids.insert(id);
    }
    const json& jedges = need(j, "edges", "$");
    if (!jedges.is_array()) throw SchemaError("$.edges: expected an array");
    std::vector<Edge> edges;
    for (size_t i = 0; i < jedges.size(); ++i) {
        std::string path = "$.edges[" + std::to_string(i) + "]";
        Edge e;
        e.id = need_string(need(jedges[i], "id", path), path + ".id");
        e.tail = need_string(need(jedges[i], "tail", path), path + ".tail");
        e.head = need_string(need(jedges[i], "head", path), path + ".head");
        if (!ids.count(e.tail)) throw SchemaError(path + ".tail: unknown node '" + e.tail + "'");
        if (!ids.count(e.head)) throw SchemaError(path + ".head: unknown node '" + e.head + "'");
        edges.push_back(std::move(e));
    }
    const json& jmsgs = need(j, "source_messages", "$");
    if (!jmsgs.is_object()) throw SchemaError("$.source_messages: expected an object");
    std::map<std::string, std::string> source_messages;
    std::set<std::string> messages;
    for (auto it = jmsgs.begin(); it != jmsgs.end(); ++it) {
        std::string path = "$.source_messages." + it.key();
        if (!ids.count(it.key())) throw SchemaError(path + ": unknown node '" + it.key() + "'");
        source_messages[it.key()] = need_string(it.value(), path);
        messages.insert(source_messages[it.key()]);
    }
    const json& jdem = need(j, "demands", "$");
    if (!jdem.is_object()) throw SchemaError("$.demands: expected an object");
    std::map<std::string, std::vector<std::string>> demands;
    for (auto it = jdem.begin(); it != jdem.end(); ++it) {
        std::string path = "$.demands." + it.key();
        if (!ids.count(it.key())) throw SchemaError(path + ": unknown node '" + it.key() + "'");
        if (!it.value().is_array()) throw SchemaError(path + ": expected an array");
        std::vector<std::string> wants;
        for (size_t i = 0; i < it.value().size(); ++i) {
            std::string mp = path + "[" + std::to_string(i) + "]";
            std::string msg = need_string(it.value()[i], mp);
            if (!messages.count(msg)) throw SchemaError(mp + ": unknown message '" + msg + "'");
            wants.push_back(msg);
        }
        demands[it.key()] = std::move(wants);
    }
    return Network(std::move(nodes), std::move(edges), std::move(source_messages),
                   std::move(demands));
}

std::string serialize_network(const Network& n, bool pretty) {
    json j;
    j["nodes"] = json::array();
    for (const Node& node : n.nodes())
        j["nodes"].push_back({{"id", node.id}, {"role", role_name(node.role)}});
    j["edges"] = json::array();
    for (const Edge& e : n.edges())
        j["edges"].push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}});
    j["source_messages"] = json::object();
    for (const auto& [src, msg] : n.source_messages()) j["source_messages"][src] = msg;
    j["demands"] = json::object();
    for (const auto& [term, wants] : n.demands()) j["demands"][term] = wants;
    return pretty ? j.dump(2) + "\n" : j.dump();
}

}  // namespace mnet
