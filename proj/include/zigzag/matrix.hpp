// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zigzag/field.hpp"

namespace zigzag {

/// Dense row-major matrix of field elements. The field itself is passed to
/// the operations; the matrix only stores values.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::uint32_t rows, std::uint32_t cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0) {}

    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }

    FieldElem& at(std::uint32_t r, std::uint32_t c) { return a_[std::size_t(r) * cols_ + c]; }
    FieldElem at(std::uint32_t r, std::uint32_t c) const { return a_[std::size_t(r) * cols_ + c]; }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    static Matrix identity(std::uint32_t n) {
        Matrix m(n, n);
        for (std::uint32_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

  private:
    std::uint32_t rows_ = 0, cols_ = 0;
    std::vector<FieldElem> a_;
};

inline Matrix mat_mul(const Field& F, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::uint32_t i = 0; i < a.rows(); ++i)
        for (std::uint32_t t = 0; t < a.cols(); ++t) {
            const FieldElem v = a.at(i, t);
            if (!v) continue;
            for (std::uint32_t j = 0; j < b.cols(); ++j)
                if (b.at(t, j)) c.at(i, j) = F.add(c.at(i, j), F.mul(v, b.at(t, j)));
        }
    return c;
}

inline std::vector<FieldElem> mat_vec(const Field& F, const Matrix& a, const std::vector<FieldElem>& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("mat_vec: shape mismatch");
    std::vector<FieldElem> y(a.rows(), 0);
    for (std::uint32_t i = 0; i < a.rows(); ++i) {
        FieldElem acc = 0;
        for (std::uint32_t j = 0; j < a.cols(); ++j)
            if (a.at(i, j) && x[j]) acc = F.add(acc, F.mul(a.at(i, j), x[j]));
        y[i] = acc;
    }
    return y;
}

/// A matrix with exactly one nonzero entry per row and per column: entry
/// (to_row[c], c) = coeff[c]. Permutation-with-coefficients matrices of both
/// constructions live here; composition stays closed.
struct MonomialMatrix {
    std::vector<std::uint32_t> to_row;  // column -> row of its nonzero entry
    std::vector<FieldElem> coeff;       // column -> value of that entry

    std::uint32_t size() const { return static_cast<std::uint32_t>(to_row.size()); }

    // Row-centric view.
    std::uint32_t src_col(std::uint32_t row) const { return from_row_[row]; }
    FieldElem row_coeff(std::uint32_t row) const { return coeff[from_row_[row]]; }

    static MonomialMatrix make(std::vector<std::uint32_t> to_row, std::vector<FieldElem> coeff) {
        MonomialMatrix m;
        m.to_row = std::move(to_row);
        m.coeff = std::move(coeff);
        if (m.to_row.size() != m.coeff.size()) throw std::invalid_argument("monomial: size mismatch");
        m.from_row_.assign(m.to_row.size(), UINT32_MAX);
        for (std::uint32_t c = 0; c < m.size(); ++c) {
            if (m.to_row[c] >= m.size() || m.from_row_[m.to_row[c]] != UINT32_MAX)
                throw std::invalid_argument("monomial: not a permutation");
            if (m.coeff[c] == 0) throw std::invalid_argument("monomial: zero coefficient");
            m.from_row_[m.to_row[c]] = c;
        }
        return m;
    }

    static MonomialMatrix identity(std::uint32_t n) {
        std::vector<std::uint32_t> t(n);
        for (std::uint32_t i = 0; i < n; ++i) t[i] = i;
        return make(std::move(t), std::vector<FieldElem>(n, 1));
    }

  private:
    std::vector<std::uint32_t> from_row_;
};

inline MonomialMatrix mono_mul(const Field& F, const MonomialMatrix& a, const MonomialMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("mono_mul: size mismatch");
    const std::uint32_t n = a.size();
    std::vector<std::uint32_t> to_row(n);
    std::vector<FieldElem> coeff(n);
    for (std::uint32_t c = 0; c < n; ++c) {
        to_row[c] = a.to_row[b.to_row[c]];
        coeff[c] = F.mul(a.coeff[b.to_row[c]], b.coeff[c]);
    }
    return MonomialMatrix::make(std::move(to_row), std::move(coeff));
}

inline MonomialMatrix mono_pow(const Field& F, const MonomialMatrix& a, std::uint32_t e) {
    MonomialMatrix acc = MonomialMatrix::identity(a.size());
    for (std::uint32_t i = 0; i < e; ++i) acc = mono_mul(F, acc, a);
    return acc;
}

inline MonomialMatrix mono_scale(const Field& F, const MonomialMatrix& a, FieldElem s) {
    std::vector<FieldElem> coeff(a.coeff);
    for (auto& v : coeff) v = F.mul(v, s);
    return MonomialMatrix::make(a.to_row, std::move(coeff));
}

inline Matrix to_dense(const MonomialMatrix& a) {
    Matrix m(a.size(), a.size());
    for (std::uint32_t c = 0; c < a.size(); ++c) m.at(a.to_row[c], c) = a.coeff[c];
    return m;
}

/// In-place Gauss-Jordan elimination with deterministic pivoting: the first
/// row (lowest index) holding a nonzero entry in the pivot column wins.
/// Returns false when the matrix is singular.
inline bool gauss_invert_inplace(const Field& F, Matrix& m, std::vector<std::vector<FieldElem>>* rhs) {
    if (m.rows() != m.cols()) throw std::invalid_argument("gauss: matrix not square");
    const std::uint32_t n = m.rows();
    for (std::uint32_t col = 0; col < n; ++col) {
        std::uint32_t piv = col;
        while (piv < n && m.at(piv, col) == 0) ++piv;
        if (piv == n) return false;
        if (piv != col) {
            for (std::uint32_t j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
            if (rhs)
                for (auto& v : *rhs) std::swap(v[piv], v[col]);
        }
        const FieldElem pinv = F.inv(m.at(col, col));
        for (std::uint32_t j = 0; j < n; ++j) m.at(col, j) = F.mul(m.at(col, j), pinv);
        if (rhs)
            for (auto& v : *rhs) v[col] = F.mul(v[col], pinv);
        for (std::uint32_t i = 0; i < n; ++i) {
            if (i == col) continue;
            const FieldElem f = m.at(i, col);
            if (!f) continue;
            for (std::uint32_t j = 0; j < n; ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(col, j)));
            if (rhs)
                for (auto& v : *rhs) v[i] = F.sub(v[i], F.mul(f, v[col]));
        }
    }
    return true;
}

/// Solves m*x = b; returns false when the system is singular.
inline bool gauss_solve(const Field& F, Matrix m, std::vector<FieldElem> b, std::vector<FieldElem>& x) {
    std::vector<std::vector<FieldElem>> rhs{std::move(b)};
    if (!gauss_invert_inplace(F, m, &rhs)) return false;
    x = std::move(rhs[0]);
    return true;
}

inline bool invertible(const Field& F, Matrix m) { return gauss_invert_inplace(F, m, nullptr); }

}  // namespace zigzag
