#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mnet {

enum class NodeRole { Source, Intermediate, Terminal };

std::string role_name(NodeRole r);
std::optional<NodeRole> role_from_name(const std::string& s);

struct Node {
    std::string id;
    NodeRole role;
    bool operator==(const Node&) const = default;
};

struct Edge {
    std::string id;
    std::string tail;
    std::string head;
    bool operator==(const Edge&) const = default;
};

// A structural problem found by validate().  Violations are data, not
// exceptions: a broken network is a legitimate input to report on.
struct Violation {
    std::string kind;     // stable identifier, e.g. "cycle", "source-has-in-edge"
    std::string subject;  // offending node/edge/message id
    std::string detail;   // human-readable explanation
};

// Directed acyclic network with unit-capacity edges, distinguished sources
// (one message each) and terminals (ordered demand lists).  The constructor
// accepts anything well-typed; validate() reports structural violations.
class Network {
  public:
    Network() = default;
    Network(std::vector<Node> nodes, std::vector<Edge> edges,
            std::map<std::string, std::string> source_messages,
            std::map<std::string, std::vector<std::string>> demands);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::map<std::string, std::string>& source_messages() const { return source_messages_; }
    const std::map<std::string, std::vector<std::string>>& demands() const { return demands_; }

    const Node* find_node(const std::string& id) const;
    const Edge* find_edge(const std::string& id) const;

    // In/out edge ids of a node, sorted by edge id.  UnknownNode if absent.
    const std::vector<std::string>& in_edges(const std::string& node) const;
    const std::vector<std::string>& out_edges(const std::string& node) const;

    // Deterministic topological order of node ids (ties broken by id).
    // Throws CycleDetected when the graph has a directed cycle.
    std::vector<std::string> topo_order() const;

    std::vector<Violation> validate() const;

    // Source node ids in sorted order; fixes the block layout of global
    // transfer matrices everywhere downstream.
    std::vector<std::string> source_order() const;
    // Which source generates this message id, if any.
    std::optional<std::string> message_source(const std::string& msg) const;

    bool operator==(const Network& o) const;

  private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::map<std::string, std::string> source_messages_;
    std::map<std::string, std::vector<std::string>> demands_;

    std::map<std::string, size_t> node_index_;
    std::map<std::string, size_t> edge_index_;
    std::map<std::string, std::vector<std::string>> in_, out_;
};

// JSON round trip.  parse_network throws SchemaError (message includes the
// JSON path) on malformed documents or unresolvable references.
Network parse_network(const std::string& text);
std::string serialize_network(const Network& n, bool pretty = false);

}  // namespace mnet
