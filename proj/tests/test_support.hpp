#pragma once

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mnet/code.hpp"
#include "mnet/matrix.hpp"
#include "mnet/network.hpp"

namespace support {

inline std::string data_path(const std::string& name) {
    const char* dir = std::getenv("MNET_TEST_DATA");
    return std::string(dir ? dir : "tests/data") + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// The classic two-source relay network: both terminals want both messages,
// each sees one message directly and one mixed edge through the bottleneck.
inline mnet::Network butterfly() {
    using mnet::Edge;
    using mnet::Node;
    using mnet::NodeRole;
    std::vector<Node> nodes = {{"s1", NodeRole::Source},       {"s2", NodeRole::Source},
                               {"r1", NodeRole::Intermediate}, {"r2", NodeRole::Intermediate},
                               {"t1", NodeRole::Terminal},     {"t2", NodeRole::Terminal}};
    std::vector<Edge> edges = {{"e1", "s1", "r1"}, {"e2", "s2", "r1"}, {"e3", "r1", "r2"},
                               {"e4", "s1", "t1"}, {"e5", "s2", "t2"}, {"e6", "r2", "t1"},
                               {"e7", "r2", "t2"}};
    return mnet::Network(nodes, edges, {{"s1", "X1"}, {"s2", "X2"}},
                         {{"t1", {"X1", "X2"}}, {"t2", {"X1", "X2"}}});
}

inline mnet::MessageRef src(const std::string& msg) {
    return {mnet::MessageRef::Kind::Source, msg};
}
inline mnet::MessageRef edg(const std::string& id) {
    return {mnet::MessageRef::Kind::Edge, id};
}

// Scalar identity-forwarding code on the butterfly with the mixing edge
// carrying the sum of both inputs: the textbook d=1 solution.
inline mnet::LinearCode butterfly_xor_code(const mnet::PrimeField& f) {
    mnet::LinearCode code(f, 1);
    mnet::Matrix one(f, 1, 1, {1});
    code.set_map("e1", src("X1"), one);
    code.set_map("e2", src("X2"), one);
    code.set_map("e3", edg("e1"), one);
    code.set_map("e3", edg("e2"), one);
    code.set_map("e4", src("X1"), one);
    code.set_map("e5", src("X2"), one);
    code.set_map("e6", edg("e3"), one);
    code.set_map("e7", edg("e3"), one);
    return code;
}

// Every local map present and zero: decodes nothing anywhere.
inline mnet::LinearCode zero_code(const mnet::Network& net, const mnet::PrimeField& f,
                                  size_t d) {
    mnet::LinearCode code(f, d);
    for (const mnet::Edge& e : net.edges()) {
        const mnet::Node* tail = net.find_node(e.tail);
        if (tail->role == mnet::NodeRole::Source) {
            code.set_map(e.id, src(net.source_messages().at(tail->id)), mnet::Matrix(f, d, d));
        } else {
            for (const std::string& in : net.in_edges(tail->id))
                code.set_map(e.id, edg(in), mnet::Matrix(f, d, d));
        }
    }
    return code;
}

inline mnet::Matrix random_matrix(const mnet::PrimeField& f, size_t rows, size_t cols,
                                  std::mt19937& rng) {
    std::uniform_int_distribution<uint32_t> dist(0, f.p() - 1);
    std::vector<uint32_t> entries(rows * cols);
    for (uint32_t& e : entries) e = dist(rng);
    return mnet::Matrix(f, rows, cols, std::move(entries));
}

}  // namespace support
