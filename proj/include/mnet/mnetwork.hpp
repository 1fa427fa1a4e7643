#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mnet/code.hpp"
#include "mnet/network.hpp"

namespace mnet {

// Naming scheme for the m-parameterized network family produced by build_mnetwork.
// All indices are 1-based. For parameter m there are m*m sources s_i_j (message
// X_i_j), m relays u_i, 2m-1 relays v_i and m^m terminals t_k; terminal t_k
// demands the tuple (X_1_j1, ..., X_m_jm) where (j1..jm) is the k-th tuple of
// [1,m]^m in lexicographic order with j1 most significant.
class MnetLayout {
public:
    explicit MnetLayout(size_t m);

    size_t m() const { return m_; }
    size_t terminal_count() const { return tcount_; }
    size_t node_count() const;
    size_t edge_count() const;

    std::string source_id(size_t i, size_t j) const;
    std::string u_id(size_t i) const;
    std::string v_id(size_t i) const;
    std::string t_id(size_t k) const;
    std::string message_id(size_t i, size_t j) const;

    std::string source_edge_id(size_t i, size_t j) const;  // s_i_j -> u_i
    std::string uv_edge_id(size_t i, size_t j) const;      // u_i -> v_j
    std::string vt_edge_id(size_t i, size_t k) const;      // v_i -> t_k

    std::vector<size_t> terminal_tuple(size_t k) const;
    size_t tuple_terminal(const std::vector<size_t>& tuple) const;

private:
    void check_row(size_t i) const;

    size_t m_;
    size_t tcount_;
};

Network build_mnetwork(size_t m);

// The hand-rolled block-routing solution with d = m: edge e_i_j forwards one
// symbol slice of every message of source row i, and each terminal reassembles
// its demanded tuple symbol by symbol. Includes explicit decoders.
LinearCode routing_code(size_t m, const PrimeField& f);

}  // namespace mnet
