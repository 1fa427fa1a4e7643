#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mnet/field.hpp"

namespace mnet {

// Dense row-major matrix over GF(p).  Sizes here are tiny (coding maps are
// d x d, transfer matrices d x S*d), so the representation favours clarity:
// one uint32_t per entry, exact arithmetic, no cleverness.
class Matrix {
  public:
    Matrix(PrimeField f, size_t rows, size_t cols);
    Matrix(PrimeField f, size_t rows, size_t cols, std::vector<uint32_t> entries);

    const PrimeField& field() const { return f_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    uint32_t at(size_t r, size_t c) const { return a_[r * cols_ + c]; }
    void set(size_t r, size_t c, uint32_t v) { a_[r * cols_ + c] = v % f_.p(); }

    std::span<const uint32_t> row(size_t r) const { return {a_.data() + r * cols_, cols_}; }
    std::span<uint32_t> row(size_t r) { return {a_.data() + r * cols_, cols_}; }
    const std::vector<uint32_t>& entries() const { return a_; }

    bool is_zero() const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

  private:
    PrimeField f_;
    size_t rows_, cols_;
    std::vector<uint32_t> a_;
};

Matrix zeros(PrimeField f, size_t rows, size_t cols);
Matrix identity(PrimeField f, size_t n);

// a + b, a * b; shapes must agree (DimensionMismatch otherwise).
Matrix add(const Matrix& a, const Matrix& b);
Matrix mul(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, uint32_t c);

// Vertical concatenation.  The field and column count are explicit so the
// empty stack is well-defined (a 0 x cols matrix); every part must match.
Matrix vstack(PrimeField f, size_t cols, std::span<const Matrix> parts);

// Reduced row echelon form (pivots 1, pivot columns cleared elsewhere).
Matrix rref(Matrix m);
size_t rank(const Matrix& m);

// Smallest-footprint solve: find D with D * basis = target, if target's rows
// lie in the row space of basis.  Returns std::nullopt otherwise.
std::optional<Matrix> solve_decoder(const Matrix& basis, const Matrix& target);

// Inverse of a square matrix, or nullopt when singular.
std::optional<Matrix> inverse(const Matrix& m);

// Incremental row-space tracker: insert rows one at a time, keeping a
// reduced basis.  This is the hot path of the solver and the rank oracle,
// where the same prefix of rows is extended over and over.
class EliminationBasis {
  public:
    EliminationBasis(PrimeField f, size_t cols);

    // Reduces the row against the basis; if a nonzero residual remains it
    // joins the basis and the call returns true.
    bool insert(std::span<const uint32_t> row);
    void insert_rows(const Matrix& m);

    // True iff the row already lies in the spanned space (does not insert).
    bool contains(std::span<const uint32_t> row) const;

    size_t rank() const { return pivots_.size(); }
    size_t cols() const { return cols_; }
    // Basis rows in pivot order; each has a leading 1 in its pivot column.
    Matrix basis_matrix() const;

  private:
    void reduce(std::vector<uint32_t>& row) const;

    PrimeField f_;
    size_t cols_;
    std::vector<std::vector<uint32_t>> rows_;  // reduced rows, pivot order
    std::vector<size_t> pivots_;
};

}  // namespace mnet
