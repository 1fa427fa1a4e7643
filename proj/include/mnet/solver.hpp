#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mnet/code.hpp"
#include "mnet/network.hpp"

namespace mnet {

struct SearchConfig {
    PrimeField field = PrimeField(2);
    size_t d = 1;
    std::optional<uint64_t> budget;  // absent = run to exhaustion; zero = BudgetZero
    bool canonicalize_sources = true;
    size_t shards = 1;
};

// Result of an exhaustive (or budget-truncated) hunt for a (d,d) solution.
// `enumerated` counts candidate indices covered either by explicit testing or
// by a pruning proof; on Found it is found_index + 1. Counts and the index
// saturate at 2^64-1 in reports.
struct SearchOutcome {
    enum class Kind { Found, ExhaustedNone, Inconclusive };
    Kind kind = Kind::Inconclusive;
    std::optional<LinearCode> code;  // present iff Found; includes decoders
    uint64_t found_index = 0;
    uint64_t enumerated = 0;
    bool canonicalized = false;
    std::string description;
};

std::string outcome_name(SearchOutcome::Kind k);

// Enumerates local-map assignments on all edges not incident to a terminal
// (odometer over d*d matrices, edges sorted by id, first slot most
// significant); terminal-incident maps and decoders are synthesized per
// terminal by exact subspace feasibility. Deterministic: the lowest-index
// solution wins regardless of shard count.
SearchOutcome search(const Network& net, const SearchConfig& cfg);

// Machine-readable, replayable record of a finished search. Identical
// configurations yield byte-identical certificates.
std::string certify(const Network& net, const SearchConfig& cfg, const SearchOutcome& out,
                    bool pretty = false);

}  // namespace mnet
