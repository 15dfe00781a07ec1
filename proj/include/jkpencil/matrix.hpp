#pragma once

#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "jkpencil/error.hpp"
#include "jkpencil/gaussian.hpp"
#include "jkpencil/ratfunc.hpp"
#include "jkpencil/rational.hpp"

namespace jkp {

template <class F>
struct FieldOps;

template <>
struct FieldOps<Rational> {
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static std::size_t cost(const Rational& x) { return bit_size(x); }
};

template <>
struct FieldOps<RatFunc> {
  static bool is_zero(const RatFunc& x) { return x.is_zero(); }
  static std::size_t cost(const RatFunc& x) { return x.complexity(); }
};

template <>
struct FieldOps<GaussianRational> {
  static bool is_zero(const GaussianRational& x) { return x.is_zero(); }
  static std::size_t cost(const GaussianRational& x) { return bit_size(x.re) + bit_size(x.im); }
};

template <class F>
bool field_is_zero(const F& x) {
  return FieldOps<F>::is_zero(x);
}

template <class F>
using Vec = std::vector<F>;

// Dense row-major matrix over an exact field.
template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, F(0)) {}
  Matrix(std::initializer_list<std::initializer_list<F>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw_internal("ShapeMismatch", "ragged initializer");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  static Matrix from_columns(std::size_t rows, const std::vector<Vec<F>>& cols) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw_internal("ShapeMismatch", "column length");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec<F> column(std::size_t j) const {
    Vec<F> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  std::vector<Vec<F>> columns() const {
    std::vector<Vec<F>> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }
  Vec<F> row(std::size_t i) const {
    return Vec<F>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix select_columns(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!field_is_zero(x)) return false;
    return true;
  }

  Vec<F> apply(const Vec<F>& v) const {
    if (v.size() != cols_) throw_internal("ShapeMismatch", "matrix-vector product");
    Vec<F> r(rows_, F(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const F& a = (*this)(i, j);
        if (field_is_zero(a) || field_is_zero(v[j])) continue;
        r[i] += a * v[j];
      }
    return r;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const F& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const F& s) { return a *= s; }
  friend Matrix operator*(const F& s, Matrix a) { return a *= s; }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& x : r.data_) x = -x;
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw_internal("ShapeMismatch", "matrix product");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const F& x = a(i, k);
        if (field_is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const F& y = b(k, j);
          if (field_is_zero(y)) continue;
          r(i, j) += x * y;
        }
      }
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw_internal("ShapeMismatch", "matrix sum");
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<F> data_;
};

template <class F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw_internal("ShapeMismatch", "hstack");
  Matrix<F> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

template <class F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw_internal("ShapeMismatch", "vstack");
  Matrix<F> m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

template <class F>
Matrix<F> block_diagonal(const std::vector<Matrix<F>>& blocks) {
  std::size_t n = 0, m = 0;
  for (const auto& b : blocks) {
    n += b.rows();
    m += b.cols();
  }
  Matrix<F> r(n, m);
  std::size_t i = 0, j = 0;
  for (const auto& b : blocks) {
    r.set_block(i, j, b);
    i += b.rows();
    j += b.cols();
  }
  return r;
}

template <class F>
F dot(const Vec<F>& a, const Vec<F>& b) {
  F s(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (field_is_zero(a[i]) || field_is_zero(b[i])) continue;
    s += a[i] * b[i];
  }
  return s;
}

// u^T M v
template <class F>
F bilinear(const Matrix<F>& m, const Vec<F>& u, const Vec<F>& v) {
  return dot(u, m.apply(v));
}

template <class F>
struct Echelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

// Reduced row echelon form by Gauss-Jordan elimination. Within each column
// the pivot is the nonzero candidate of least FieldOps::cost, which keeps
// rational-function entries small.
template <class F>
Echelon<F> rref(Matrix<F> m, std::size_t max_col = static_cast<std::size_t>(-1)) {
  const std::size_t rows = m.rows(), cols = std::min(m.cols(), max_col);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows, best_cost = 0;
    for (std::size_t i = r; i < rows; ++i) {
      if (field_is_zero(m(i, c))) continue;
      const std::size_t cost = FieldOps<F>::cost(m(i, c));
      if (best == rows || cost < best_cost) {
        best = i;
        best_cost = cost;
      }
    }
    if (best == rows) continue;
    if (best != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(best, j));
    const F inv = F(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!field_is_zero(m(r, j))) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || field_is_zero(m(i, c))) continue;
      const F f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (field_is_zero(m(r, j))) continue;
        m(i, j) -= f * m(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  return rref(m).rank();
}

// Columns form a basis of {v : m v = 0}.
template <class F>
Matrix<F> kernel(const Matrix<F>& m) {
  const auto e = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec<F>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vec<F> v(n, F(0));
    v[f] = F(1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
      if (!field_is_zero(e.reduced(i, f))) v[e.pivots[i]] = -e.reduced(i, f);
    }
    basis.push_back(std::move(v));
  }
  return Matrix<F>::from_columns(n, basis);
}

// One solution of m v = b with every free variable set to zero.
template <class F>
std::optional<Vec<F>> solve(const Matrix<F>& m, const Vec<F>& b) {
  if (b.size() != m.rows()) throw_internal("ShapeMismatch", "solve");
  Matrix<F> aug(m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < b.size(); ++i) aug(i, m.cols()) = b[i];
  const auto e = rref(std::move(aug));
  Vec<F> x(m.cols(), F(0));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == m.cols()) return std::nullopt;
    x[e.pivots[i]] = e.reduced(i, m.cols());
  }
  return x;
}

// Solves m X = b column by column; absent if any column is inconsistent.
template <class F>
std::optional<Matrix<F>> solve_many(const Matrix<F>& m, const Matrix<F>& b) {
  const auto e = rref(hstack(m, b), m.cols());
  Matrix<F> x(m.cols(), b.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[i], j) = e.reduced(i, m.cols() + j);
  for (std::size_t i = e.pivots.size(); i < m.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (!field_is_zero(e.reduced(i, m.cols() + j))) return std::nullopt;
  return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
  if (m.rows() != m.cols()) throw_internal("ShapeMismatch", "inverse of non-square matrix");
  auto x = solve_many(m, Matrix<F>::identity(m.rows()));
  if (!x || rank(m) != m.rows()) return std::nullopt;
  return x;
}

template <class F>
F determinant(Matrix<F> m) {
  if (m.rows() != m.cols()) throw_internal("ShapeMismatch", "determinant of non-square matrix");
  const std::size_t n = m.rows();
  F det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = n, best_cost = 0;
    for (std::size_t i = c; i < n; ++i) {
      if (field_is_zero(m(i, c))) continue;
      const std::size_t cost = FieldOps<F>::cost(m(i, c));
      if (best == n || cost < best_cost) {
        best = i;
        best_cost = cost;
      }
    }
    if (best == n) return F(0);
    if (best != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(best, j));
      det = -det;
    }
    det *= m(c, c);
    const F inv = F(1) / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (field_is_zero(m(i, c))) continue;
      const F f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) {
        if (field_is_zero(m(c, j))) continue;
        m(i, j) -= f * m(c, j);
      }
    }
  }
  return det;
}

template <class F>
Matrix<F> matrix_power(const Matrix<F>& m, unsigned e) {
  Matrix<F> r = Matrix<F>::identity(m.rows());
  for (unsigned i = 0; i < e; ++i) r = r * m;
  return r;
}

template <class F>
bool is_skew(const Matrix<F>& m) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (!(m(i, j) == -m(j, i))) return false;
  return true;
}

using QMatrix = Matrix<Rational>;
using QVector = Vec<Rational>;

}  // namespace jkp
