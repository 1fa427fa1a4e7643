#include "mnet/matrix.hpp"

#include <algorithm>
#include <string>

#include "mnet/errors.hpp"

namespace mnet {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix::Matrix(PrimeField f, size_t rows, size_t cols)
    : f_(f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

Matrix::Matrix(PrimeField f, size_t rows, size_t cols, std::vector<uint32_t> entries)
    : f_(f), rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_)
        throw DimensionMismatch("entry count " + std::to_string(a_.size()) + " does not fill a " +
                                shape(*this) + " matrix");
    for (uint32_t& v : a_)
        if (v >= f_.p())
            throw DimensionMismatch("entry " + std::to_string(v) + " out of range for GF(" +
                                    std::to_string(f_.p()) + ")");
}

bool Matrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](uint32_t v) { return v == 0; });
}

bool Matrix::operator==(const Matrix& o) const {
    return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

Matrix zeros(PrimeField f, size_t rows, size_t cols) { return Matrix(f, rows, cols); }

Matrix identity(PrimeField f, size_t n) {
    Matrix m(f, n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (a.field() != b.field() || a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("cannot add " + shape(a) + " and " + shape(b));
    Matrix r(a.field(), a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r.set(i, j, a.field().add(a.at(i, j), b.at(i, j)));
    return r;
}

Matrix mul(const Matrix& a, const Matrix& b) {
    if (a.field() != b.field())
        throw DimensionMismatch("cannot multiply matrices over different fields");
    if (a.cols() != b.rows())
        throw DimensionMismatch("cannot multiply " + shape(a) + " by " + shape(b));
    const PrimeField& f = a.field();
    Matrix r(f, a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            uint32_t aik = a.at(i, k);
            if (aik == 0) continue;
            for (size_t j = 0; j < b.cols(); ++j)
                r.set(i, j, f.add(r.at(i, j), f.mul(aik, b.at(k, j))));
        }
    return r;
}

Matrix scale(const Matrix& a, uint32_t c) {
    Matrix r(a.field(), a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r.set(i, j, a.field().mul(a.at(i, j), c));
    return r;
}

Matrix vstack(PrimeField f, size_t cols, std::span<const Matrix> parts) {
    size_t total = 0;
    for (const Matrix& m : parts) {
        if (m.field() != f) throw DimensionMismatch("stack parts over different fields");
        if (m.cols() != cols)
            throw DimensionMismatch("stack part has " + std::to_string(m.cols()) +
                                    " columns, expected " + std::to_string(cols));
        total += m.rows();
    }
    Matrix r(f, total, cols);
    size_t at = 0;
    for (const Matrix& m : parts)
        for (size_t i = 0; i < m.rows(); ++i, ++at)
            for (size_t j = 0; j < cols; ++j) r.set(at, j, m.at(i, j));
    return r;
}

Matrix rref(Matrix m) {
    const PrimeField& f = m.field();
    size_t lead = 0;
    for (size_t r = 0; r < m.rows() && lead < m.cols(); ++r) {
        size_t pr = r;
        while (pr < m.rows() && m.at(pr, lead) == 0) ++pr;
        if (pr == m.rows()) {
            ++lead;
            --r;
            continue;
        }
        if (pr != r)
            for (size_t j = 0; j < m.cols(); ++j) {
                uint32_t t = m.at(r, j);
                m.set(r, j, m.at(pr, j));
                m.set(pr, j, t);
            }
        uint32_t piv = f.inv(m.at(r, lead));
        for (size_t j = 0; j < m.cols(); ++j) m.set(r, j, f.mul(m.at(r, j), piv));
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            uint32_t c = m.at(i, lead);
            if (c == 0) continue;
            for (size_t j = 0; j < m.cols(); ++j)
                m.set(i, j, f.sub(m.at(i, j), f.mul(c, m.at(r, j))));
        }
        ++lead;
    }
    return m;
}

size_t rank(const Matrix& m) {
    EliminationBasis eb(m.field(), m.cols());
    eb.insert_rows(m);
    return eb.rank();
}

std::optional<Matrix> solve_decoder(const Matrix& basis, const Matrix& target) {
    if (basis.field() != target.field())
        throw DimensionMismatch("basis and target over different fields");
    if (basis.cols() != target.cols())
        throw DimensionMismatch("basis has " + std::to_string(basis.cols()) +
                                " columns, target has " + std::to_string(target.cols()));
    const PrimeField& f = basis.field();
    size_t n = basis.cols(), k = basis.rows();

    // Echelonize [basis | I] so each reduced row remembers the combination of
    // original basis rows that produced it.
    struct Row {
        std::vector<uint32_t> v;  // length n, leading 1 at pivot
        std::vector<uint32_t> c;  // length k, v == c * basis
        size_t pivot;
    };
    std::vector<Row> rows;
    for (size_t i = 0; i < k; ++i) {
        std::vector<uint32_t> v(basis.row(i).begin(), basis.row(i).end());
        std::vector<uint32_t> c(k, 0);
        c[i] = 1;
        for (const Row& r : rows) {
            uint32_t x = v[r.pivot];
            if (x == 0) continue;
            for (size_t j = 0; j < n; ++j) v[j] = f.sub(v[j], f.mul(x, r.v[j]));
            for (size_t j = 0; j < k; ++j) c[j] = f.sub(c[j], f.mul(x, r.c[j]));
        }
        size_t p = 0;
        while (p < n && v[p] == 0) ++p;
        if (p == n) continue;  // dependent row, nothing new
        uint32_t piv = f.inv(v[p]);
        for (size_t j = 0; j < n; ++j) v[j] = f.mul(v[j], piv);
        for (size_t j = 0; j < k; ++j) c[j] = f.mul(c[j], piv);
        // keep earlier rows fully reduced as well so lookups stay one pass
        for (Row& r : rows) {
            uint32_t x = r.v[p];
            if (x == 0) continue;
            for (size_t j = 0; j < n; ++j) r.v[j] = f.sub(r.v[j], f.mul(x, v[j]));
            for (size_t j = 0; j < k; ++j) r.c[j] = f.sub(r.c[j], f.mul(x, c[j]));
        }
        rows.push_back(Row{std::move(v), std::move(c), p});
    }

    Matrix d(f, target.rows(), k);
    for (size_t i = 0; i < target.rows(); ++i) {
        std::vector<uint32_t> v(target.row(i).begin(), target.row(i).end());
        std::vector<uint32_t> c(k, 0);
        for (const Row& r : rows) {
            uint32_t x = v[r.pivot];
            if (x == 0) continue;
            for (size_t j = 0; j < n; ++j) v[j] = f.sub(v[j], f.mul(x, r.v[j]));
            for (size_t j = 0; j < k; ++j) c[j] = f.add(c[j], f.mul(x, r.c[j]));
        }
        if (std::any_of(v.begin(), v.end(), [](uint32_t x) { return x != 0; }))
            return std::nullopt;  // target row outside the row space
        for (size_t j = 0; j < k; ++j) d.set(i, j, c[j]);
    }
    return d;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square " + shape(m));
    auto d = solve_decoder(m, identity(m.field(), m.rows()));
    return d;  // D * m = I and m square forces m * D = I as well
}

EliminationBasis::EliminationBasis(PrimeField f, size_t cols) : f_(f), cols_(cols) {}

void EliminationBasis::reduce(std::vector<uint32_t>& row) const {
    for (size_t i = 0; i < rows_.size(); ++i) {
        uint32_t x = row[pivots_[i]];
        if (x == 0) continue;
        const std::vector<uint32_t>& b = rows_[i];
        for (size_t j = 0; j < cols_; ++j) row[j] = f_.sub(row[j], f_.mul(x, b[j]));
    }
}

bool EliminationBasis::insert(std::span<const uint32_t> row) {
    if (row.size() != cols_)
        throw DimensionMismatch("row of length " + std::to_string(row.size()) +
                                " inserted into basis with " + std::to_string(cols_) + " columns");
    std::vector<uint32_t> v(row.begin(), row.end());
    reduce(v);
    size_t p = 0;
    while (p < cols_ && v[p] == 0) ++p;
    if (p == cols_) return false;
    uint32_t piv = f_.inv(v[p]);
    for (size_t j = 0; j < cols_; ++j) v[j] = f_.mul(v[j], piv);
    for (std::vector<uint32_t>& b : rows_) {
        uint32_t x = b[p];
        if (x == 0) continue;
        for (size_t j = 0; j < cols_; ++j) b[j] = f_.sub(b[j], f_.mul(x, v[j]));
    }
    size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(v));
    pivots_.insert(pivots_.begin() + pos, p);
    return true;
}

void EliminationBasis::insert_rows(const Matrix& m) {
    if (m.field() != f_) throw DimensionMismatch("basis and rows over different fields");
    for (size_t i = 0; i < m.rows(); ++i) insert(m.row(i));
}

bool EliminationBasis::contains(std::span<const uint32_t> row) const {
    std::vector<uint32_t> v(row.begin(), row.end());
    reduce(v);
    return std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; });
}

Matrix EliminationBasis::basis_matrix() const {
    Matrix m(f_, rows_.size(), cols_);
    for (size_t i = 0; i < rows_.size(); ++i)
        for (size_t j = 0; j < cols_; ++j) m.set(i, j, rows_[i][j]);
    return m;
}

}  // namespace mnet
