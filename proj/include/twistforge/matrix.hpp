#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace twistforge {

/// Dense row-major matrix over a field-like scalar type.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  Matrix transpose() const {
    Matrix t;
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.data_.reserve(data_.size());
    for (std::size_t j = 0; j < cols_; ++j) {
      for (std::size_t i = 0; i < rows_; ++i) t.data_.push_back((*this)(i, j));
    }
    return t;
  }

  template <class F>
  auto map(F f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    Matrix<U> out;
    if (data_.empty()) return out;
    out = Matrix<U>(rows_, cols_, f(data_[0]));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix dimension mismatch in product");
    const T zero = a.data_.at(0) - a.data_.at(0);
    Matrix r(a.rows_, b.cols_, zero);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (!is_zero(b(k, j))) r(i, j) += x * b(k, j);
        }
      }
    }
    return r;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix dimension mismatch in sum");
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix dimension mismatch in difference");
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Reduced row echelon form over a field, in place; returns the pivot columns.
template <class T>
std::vector<std::size_t> rref_in_place(Matrix<T>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    }
    const T iv = inverse(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) {
      if (!is_zero(m(r, j))) m(r, j) = m(r, j) * iv;
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      const T f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!is_zero(m(r, j))) m(i, j) = m(i, j) - f * m(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m) {
  return rref_in_place(m).size();
}

/// Gauss-Jordan inverse; nullopt when singular.
template <class T>
std::optional<Matrix<T>> try_inverse(const Matrix<T>& m, const T& one) {
  if (!m.is_square()) throw DomainError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const T zero = one - one;
  Matrix<T> aug(n, 2 * n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = one;
  }
  const auto piv = rref_in_place(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix<T> inv(n, n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  }
  return inv;
}

template <class T>
Matrix<T> matrix_inverse(const Matrix<T>& m, const T& one) {
  auto r = try_inverse(m, one);
  if (!r) throw DivisionByZero("matrix is singular");
  return *r;
}

using QVector = std::vector<Rational>;

/// Sparse rational vector: sorted (index, value) pairs with nonzero values.
using SparseVec = std::vector<std::pair<std::size_t, Rational>>;

/// Basis of the right nullspace {x : A x = 0} by fraction-free (Bareiss) elimination.
inline std::vector<QVector> nullspace_bareiss(const std::vector<QVector>& a, std::size_t ncols) {
  // scale rows to integers
  std::vector<std::vector<Integer>> m;
  m.reserve(a.size());
  for (const auto& row : a) {
    Integer l = 1;
    bool nonzero = false;
    for (const auto& x : row) {
      if (sgn(x) != 0) {
        nonzero = true;
        l = lcm(l, Integer(x.get_den()));
      }
    }
    if (!nonzero) continue;
    std::vector<Integer> ir(ncols);
    for (std::size_t j = 0; j < ncols; ++j) {
      Rational s = row[j] * l;
      ir[j] = s.get_num();
    }
    m.push_back(std::move(ir));
  }
  const std::size_t rows = m.size();
  std::vector<std::size_t> pivots;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Integer& piv = m[r][c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Integer f = m[i][c];
      for (std::size_t j = c; j < ncols; ++j) {
        Integer v = piv * m[i][j] - f * m[r][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = std::move(v);
      }
    }
    prev = m[r][c];
    pivots.push_back(c);
    ++r;
  }
  // back substitution on the echelon form
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    QVector x(ncols, Rational(0));
    x[f] = 1;
    for (std::size_t k = pivots.size(); k-- > 0;) {
      const std::size_t c = pivots[k];
      Rational s = 0;
      for (std::size_t j = c + 1; j < ncols; ++j) {
        if (sgn(m[k][j]) != 0 && sgn(x[j]) != 0) s += Rational(m[k][j]) * x[j];
      }
      x[c] = -s / Rational(m[k][c]);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Canonical reduced row echelon basis of the span of the given vectors.
inline std::vector<QVector> canonical_basis(std::vector<QVector> vecs, std::size_t ncols) {
  if (vecs.empty()) return {};
  Matrix<Rational> m(vecs.size(), ncols, Rational(0));
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (std::size_t j = 0; j < ncols; ++j) m(i, j) = vecs[i][j];
  }
  const auto piv = rref_in_place(m);
  std::vector<QVector> out;
  for (std::size_t i = 0; i < piv.size(); ++i) out.push_back(m.row(i));
  return out;
}

}  // namespace twistforge
