#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mnet/matrix.hpp"
#include "mnet/network.hpp"
#include "mnet/rank_oracle.hpp"

namespace mnet {

// Complete rank function over the subsets of a ground set {1..n}, n <= 20.
// Subset masks use bit i-1 for element i.
class RankTable {
public:
    RankTable(size_t n, std::vector<uint32_t> ranks);

    size_t n() const { return n_; }
    size_t size() const { return ranks_.size(); }
    uint32_t rank(uint32_t mask) const;
    uint32_t rank_of(const std::vector<size_t>& subset) const;  // 1-based elements
    bool operator==(const RankTable&) const = default;

private:
    size_t n_;
    std::vector<uint32_t> ranks_;
};

RankTable parse_rank_table(const std::string& text);
std::string serialize_rank_table(const RankTable& t, bool pretty = false);

// Single witnessed failure of one of the three rank-function axioms.
struct AxiomViolation {
    std::string kind;  // "normalization" | "monotonicity" | "submodularity"
    uint32_t set_a = 0;
    uint32_t set_b = 0;
    std::string detail;
};

struct AxiomReport {
    bool ok = true;
    bool truncated = false;
    std::vector<AxiomViolation> violations;
};

// Checks normalization, monotonicity (single-element ascents) and the local
// exchange form of submodularity, which together imply the full axioms.
AxiomReport check_axioms(const RankTable& t);

size_t rho_max(const RankTable& t);
size_t rho_max(const RankOracle& o, const std::vector<std::vector<MessageRef>>& family);

// True iff v lies in the polymatroid: sum of v over A never exceeds rank(A).
bool membership(const std::vector<uint64_t>& v, const RankTable& t);

// rank(X) = dimension of the sum of the row spaces indexed by X.
RankTable from_subspaces(const std::vector<Matrix>& mats);

// Tabulates an oracle on the sublattice generated by the given refs;
// element i of the table corresponds to refs[i-1].
RankTable restrict_to_table(const RankOracle& o, const std::vector<MessageRef>& refs);

// Assignment of every network message (source messages and edge messages) to a
// ground element of the rank oracle.
struct DpnMapping {
    std::map<MessageRef, MessageRef> to_ground;
};

DpnMapping identity_mapping(const Network& net);

struct DpnViolation {
    int condition = 0;  // 1, 2 or 3
    std::string detail;
};

struct DpnReport {
    bool ok = true;
    std::string family;  // which subset family condition (2) was checked over
    std::vector<DpnViolation> violations;
};

// Checks the three mapping conditions: injectivity on source messages, the
// scaled-indicator membership condition (over all subsets of the source image
// plus the node input/output files), and rank preservation at every node.
// The output side of a terminal is taken to include its demanded messages, so
// rank preservation at a terminal is exactly decodability.
DpnReport check_dpn(const Network& net, const RankOracle& oracle, const DpnMapping& f, size_t d);

std::string axiom_report_to_json(const AxiomReport& r, bool pretty = false);
std::string dpn_report_to_json(const DpnReport& r, bool pretty = false);

// Matrix fixture JSON: {"p": int, "rows": int, "cols": int, "entries": [row-major ints]}.
Matrix parse_matrix_fixture(const std::string& text);
std::string serialize_matrix_fixture(const Matrix& m, bool pretty = false);

}  // namespace mnet
