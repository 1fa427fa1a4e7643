#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "mnet/matrix.hpp"

namespace mnet {

// A message in the coding universe: either a source message (by message id)
// or the message carried by an edge (by edge id).
struct MessageRef {
    enum class Kind { Source, Edge } kind;
    std::string id;

    auto operator<=>(const MessageRef&) const = default;
};

std::string ref_name(const MessageRef& r);  // "X_1_1" / "edge:e_1_1" style label

// Rank function over subsets of a fixed ground set of messages, backed by
// one matrix per message over a common ambient space: the rank of a subset
// is the rank of the stacked matrices.  Queries are cached (keyed by the
// sorted, deduplicated subset) and safe to issue concurrently.
class RankOracle {
  public:
    RankOracle(PrimeField f, size_t cols, std::map<MessageRef, Matrix> matrices);

    size_t query(std::vector<MessageRef> refs) const;  // UnknownMessageRef
    const Matrix& matrix_of(const MessageRef& r) const;

    std::vector<MessageRef> ground() const;
    const PrimeField& field() const { return f_; }
    size_t cols() const { return cols_; }

  private:
    PrimeField f_;
    size_t cols_;
    std::map<MessageRef, Matrix> mats_;
    mutable std::mutex mu_;
    mutable std::map<std::vector<MessageRef>, size_t> cache_;
};

}  // namespace mnet
