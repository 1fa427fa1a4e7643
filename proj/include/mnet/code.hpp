#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mnet/matrix.hpp"
#include "mnet/network.hpp"
#include "mnet/rank_oracle.hpp"

namespace mnet {

// A (d,d) vector linear code: one d x d local map per (input, edge) pair.
// For an edge out of a source the input is the source's message; for an edge
// out of an intermediate node the inputs are the node's in-edges.  Absent
// maps mean zero.  Decoders are optional per terminal: solvability is the
// existence of decoders, so verification never requires them.
struct LinearCode {
    PrimeField field;
    size_t d = 1;
    std::map<std::pair<std::string, MessageRef>, Matrix> local_maps;  // (edge, input) -> map
    std::map<std::string, Matrix> decoders;                           // terminal -> decoder

    LinearCode(PrimeField f, size_t dim) : field(f), d(dim) {}

    const Matrix* map_for(const std::string& edge, const MessageRef& input) const;
    void set_map(const std::string& edge, MessageRef input, Matrix m);
};

LinearCode parse_code(const std::string& text);
std::string serialize_code(const LinearCode& c, bool pretty = false);

// Global transfer matrices: for every edge, the d x (S*d) matrix expressing
// its message in terms of all source symbols.  Source blocks are laid out in
// sorted source-id order.
struct GlobalTransfer {
    PrimeField field;
    size_t d = 1;
    std::vector<std::string> source_order;
    std::map<std::string, size_t> block_col;   // source id -> first column
    std::map<std::string, Matrix> edge_matrix; // edge id -> d x (S*d)

    GlobalTransfer(PrimeField f, size_t dim) : field(f), d(dim) {}
    size_t cols() const { return source_order.size() * d; }
};

// Walks the network in topological order, composing local maps into global
// transfer matrices.  Throws ShapeMismatch for maps of the wrong shape or
// referencing impossible inputs, and UncoveredEdge for an edge none of whose
// tail inputs has any map (an explicit zero matrix is fine; total absence is
// almost always a typo).
GlobalTransfer propagate(const Network& net, const LinearCode& code);

// d-row selection matrix extracting one source's block, and the stacked
// selection for an ordered demand list.
Matrix block_selection(const GlobalTransfer& gt, const std::string& source);
Matrix demand_selection(const GlobalTransfer& gt, const Network& net,
                        const std::vector<std::string>& messages);

struct TerminalVerdict {
    std::string terminal;
    bool decodable = false;
    std::optional<Matrix> decoder;           // synthesized when decodable
    std::string witness;                     // first unrecoverable message when not
    std::optional<bool> supplied_decoder_ok; // only when the code carried one
};

struct Verdict {
    bool solution = false;
    std::vector<TerminalVerdict> terminals;  // sorted by terminal id
    std::vector<std::string> source_order;
};

Verdict verify_solution(const Network& net, const LinearCode& code);
std::string verdict_to_json(const Verdict& v, bool pretty = false);

// Rank function induced by a code: ground set = all source messages plus all
// edge messages; the matrix of a source message is the identity on its block.
RankOracle induced_rank_oracle(const Network& net, const LinearCode& code);

}  // namespace mnet
