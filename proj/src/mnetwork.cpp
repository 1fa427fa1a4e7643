#include "mnet/mnetwork.hpp"

#include <algorithm>
#include <map>

#include "mnet/errors.hpp"

namespace mnet {

namespace {

size_t checked_pow(size_t base, size_t exp) {
    size_t r = 1;
    for (size_t i = 0; i < exp; ++i) {
        if (r > SIZE_MAX / base) throw InvalidM("m^m overflows for m=" + std::to_string(base));
        r *= base;
    }
    return r;
}

}  // namespace

MnetLayout::MnetLayout(size_t m) : m_(m) {
    if (m < 2) throw InvalidM("network family requires m >= 2, got " + std::to_string(m));
    tcount_ = checked_pow(m, m);
}

size_t MnetLayout::node_count() const { return m_ * m_ + m_ + (2 * m_ - 1) + tcount_; }

size_t MnetLayout::edge_count() const {
    // m^2 source edges, m^2 u->v edges (m straight + m(m-1) fan-out), (2m-1)m^m v->t edges
    return m_ * m_ + m_ * m_ + (2 * m_ - 1) * tcount_;
}

void MnetLayout::check_row(size_t i) const {
    if (i < 1 || i > m_)
        throw IndexOutOfRange("index " + std::to_string(i) + " not in [1," + std::to_string(m_) +
                              "]");
}

std::string MnetLayout::source_id(size_t i, size_t j) const {
    check_row(i);
    check_row(j);
    return "s_" + std::to_string(i) + "_" + std::to_string(j);
}

std::string MnetLayout::u_id(size_t i) const {
    check_row(i);
    return "u_" + std::to_string(i);
}

std::string MnetLayout::v_id(size_t i) const {
    if (i < 1 || i > 2 * m_ - 1)
        throw IndexOutOfRange("v index " + std::to_string(i) + " not in [1," +
                              std::to_string(2 * m_ - 1) + "]");
    return "v_" + std::to_string(i);
}

std::string MnetLayout::t_id(size_t k) const {
    if (k < 1 || k > tcount_)
        throw IndexOutOfRange("terminal index " + std::to_string(k) + " not in [1," +
                              std::to_string(tcount_) + "]");
    return "t_" + std::to_string(k);
}

std::string MnetLayout::message_id(size_t i, size_t j) const {
    check_row(i);
    check_row(j);
    return "X_" + std::to_string(i) + "_" + std::to_string(j);
}

std::string MnetLayout::source_edge_id(size_t i, size_t j) const {
    check_row(i);
    check_row(j);
    return "sv_" + std::to_string(i) + "_" + std::to_string(j);
}

std::string MnetLayout::uv_edge_id(size_t i, size_t j) const {
    check_row(i);
    if (j != i && (j < m_ + 1 || j > 2 * m_ - 1))
        throw IndexOutOfRange("u_" + std::to_string(i) + " has no edge to v_" + std::to_string(j));
    return "e_" + std::to_string(i) + "_" + std::to_string(j);
}

std::string MnetLayout::vt_edge_id(size_t i, size_t k) const {
    v_id(i);
    t_id(k);
    return "vt_" + std::to_string(i) + "_" + std::to_string(k);
}

std::vector<size_t> MnetLayout::terminal_tuple(size_t k) const {
    t_id(k);
    std::vector<size_t> tuple(m_, 1);
    size_t rem = k - 1;
    for (size_t pos = m_; pos-- > 0;) {
        tuple[pos] = rem % m_ + 1;
        rem /= m_;
    }
    return tuple;
}

size_t MnetLayout::tuple_terminal(const std::vector<size_t>& tuple) const {
    if (tuple.size() != m_)
        throw IndexOutOfRange("tuple has " + std::to_string(tuple.size()) + " entries, expected " +
                              std::to_string(m_));
    size_t k = 0;
    for (size_t j : tuple) {
        check_row(j);
        k = k * m_ + (j - 1);
    }
    return k + 1;
}

Network build_mnetwork(size_t m) {
    MnetLayout L(m);
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::map<std::string, std::string> messages;
    std::map<std::string, std::vector<std::string>> demands;
    nodes.reserve(L.node_count());
    edges.reserve(L.edge_count());

    for (size_t i = 1; i <= m; ++i)
        for (size_t j = 1; j <= m; ++j) {
            nodes.push_back({L.source_id(i, j), NodeRole::Source});
            messages[L.source_id(i, j)] = L.message_id(i, j);
        }
    for (size_t i = 1; i <= m; ++i) nodes.push_back({L.u_id(i), NodeRole::Intermediate});
    for (size_t i = 1; i <= 2 * m - 1; ++i) nodes.push_back({L.v_id(i), NodeRole::Intermediate});
    for (size_t k = 1; k <= L.terminal_count(); ++k) {
        nodes.push_back({L.t_id(k), NodeRole::Terminal});
        std::vector<size_t> tuple = L.terminal_tuple(k);
        std::vector<std::string> want;
        for (size_t i = 1; i <= m; ++i) want.push_back(L.message_id(i, tuple[i - 1]));
        demands[L.t_id(k)] = std::move(want);
    }

    for (size_t i = 1; i <= m; ++i)
        for (size_t j = 1; j <= m; ++j)
            edges.push_back({L.source_edge_id(i, j), L.source_id(i, j), L.u_id(i)});
    for (size_t i = 1; i <= m; ++i) edges.push_back({L.uv_edge_id(i, i), L.u_id(i), L.v_id(i)});
    for (size_t i = 1; i <= m; ++i)
        for (size_t j = m + 1; j <= 2 * m - 1; ++j)
            edges.push_back({L.uv_edge_id(i, j), L.u_id(i), L.v_id(j)});
    for (size_t i = 1; i <= 2 * m - 1; ++i)
        for (size_t k = 1; k <= L.terminal_count(); ++k)
            edges.push_back({L.vt_edge_id(i, k), L.v_id(i), L.t_id(k)});

    return Network(std::move(nodes), std::move(edges), std::move(messages), std::move(demands));
}

LinearCode routing_code(size_t m, const PrimeField& f) {
    MnetLayout L(m);
    const size_t d = m;
    LinearCode code(f, d);

    for (size_t i = 1; i <= m; ++i)
        for (size_t j = 1; j <= m; ++j)
            code.set_map(L.source_edge_id(i, j),
                         {MessageRef::Kind::Source, L.message_id(i, j)}, identity(f, d));

    // e_i_j carries slice k of every message of row i, where slice k means the
    // k-th symbol: k = 1 for the straight edge e_i_i, k = j - m + 1 for the
    // fan-out edges. Row l-1 of the edge vector is symbol k of X_i_l.
    for (size_t i = 1; i <= m; ++i) {
        for (size_t l = 1; l <= m; ++l) {
            Matrix a = zeros(f, d, d);
            a.set(l - 1, 0, 1);
            code.set_map(L.uv_edge_id(i, i), {MessageRef::Kind::Edge, L.source_edge_id(i, l)},
                         std::move(a));
        }
        for (size_t j = m + 1; j <= 2 * m - 1; ++j) {
            size_t k = j - m + 1;
            for (size_t l = 1; l <= m; ++l) {
                Matrix a = zeros(f, d, d);
                a.set(l - 1, k - 1, 1);
                code.set_map(L.uv_edge_id(i, j), {MessageRef::Kind::Edge, L.source_edge_id(i, l)},
                             std::move(a));
            }
        }
    }

    for (size_t t = 1; t <= L.terminal_count(); ++t) {
        std::vector<size_t> tuple = L.terminal_tuple(t);
        // v_i for i <= m forwards its slice-1 vector unchanged.
        for (size_t i = 1; i <= m; ++i)
            code.set_map(L.vt_edge_id(i, t), {MessageRef::Kind::Edge, L.uv_edge_id(i, i)},
                         identity(f, d));
        // v_j for j > m compresses slice k down to the one symbol per row that
        // this terminal demands: row i-1 picks coordinate tuple[i-1]-1.
        for (size_t j = m + 1; j <= 2 * m - 1; ++j) {
            for (size_t i = 1; i <= m; ++i) {
                Matrix a = zeros(f, d, d);
                a.set(i - 1, tuple[i - 1] - 1, 1);
                code.set_map(L.vt_edge_id(j, t), {MessageRef::Kind::Edge, L.uv_edge_id(i, j)},
                             std::move(a));
            }
        }

        // Decoder: inputs stack in edge-id order, demanded message i occupies
        // rows [(i-1)d, i*d).
        std::vector<std::string> in_ids;
        for (size_t i = 1; i <= 2 * m - 1; ++i) in_ids.push_back(L.vt_edge_id(i, t));
        std::sort(in_ids.begin(), in_ids.end());
        std::map<std::string, size_t> pos;
        for (size_t i = 0; i < in_ids.size(); ++i) pos[in_ids[i]] = i;

        Matrix dec = zeros(f, m * d, (2 * m - 1) * d);
        for (size_t i = 1; i <= m; ++i) {
            dec.set((i - 1) * d, pos.at(L.vt_edge_id(i, t)) * d + tuple[i - 1] - 1, 1);
            for (size_t k = 2; k <= m; ++k)
                dec.set((i - 1) * d + k - 1, pos.at(L.vt_edge_id(m + k - 1, t)) * d + i - 1, 1);
        }
        code.decoders.emplace(L.t_id(t), std::move(dec));
    }
    return code;
}

}  // namespace mnet
