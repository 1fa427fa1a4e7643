#include "mnet/rank_oracle.hpp"

#include <algorithm>

#include "mnet/errors.hpp"

namespace mnet {

std::string ref_name(const MessageRef& r) {
    return r.kind == MessageRef::Kind::Source ? r.id : "edge:" + r.id;
}

RankOracle::RankOracle(PrimeField f, size_t cols, std::map<MessageRef, Matrix> matrices)
    : f_(f), cols_(cols), mats_(std::move(matrices)) {
    for (const auto& [ref, m] : mats_)
        if (m.field() != f_ || m.cols() != cols_)
            throw DimensionMismatch("matrix for " + ref_name(ref) +
                                    " does not match the oracle's ambient space");
}

size_t RankOracle::query(std::vector<MessageRef> refs) const {
    std::sort(refs.begin(), refs.end());
    refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(refs);
        if (it != cache_.end()) return it->second;
    }
    EliminationBasis eb(f_, cols_);
    for (const MessageRef& r : refs) eb.insert_rows(matrix_of(r));
    size_t rk = eb.rank();
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(std::move(refs), rk);
    return rk;
}

const Matrix& RankOracle::matrix_of(const MessageRef& r) const {
    auto it = mats_.find(r);
    if (it == mats_.end()) throw UnknownMessageRef("no message " + ref_name(r) + " in the oracle");
    return it->second;
}

std::vector<MessageRef> RankOracle::ground() const {
    std::vector<MessageRef> g;
    g.reserve(mats_.size());
    for (const auto& [ref, _] : mats_) g.push_back(ref);
    return g;
}

}  // namespace mnet
