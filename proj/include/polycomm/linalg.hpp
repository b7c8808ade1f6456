#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <vector>

#include "polycomm/rational.hpp"

namespace polycomm {

class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t dim) : e_(dim) {}
  QVector(std::initializer_list<Rational> init) : e_(init) {}
  explicit QVector(std::vector<Rational> entries) : e_(std::move(entries)) {}

  std::size_t dim() const { return e_.size(); }
  Rational& operator[](std::size_t i) { return e_[i]; }
  const Rational& operator[](std::size_t i) const { return e_[i]; }
  const std::vector<Rational>& entries() const { return e_; }

  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }

  bool is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](const Rational& x) { return x == 0; });
  }

  friend bool operator==(const QVector& a, const QVector& b) = default;
  // Lexicographic; used for canonical sorting of rays, normals and vertices.
  friend bool operator<(const QVector& a, const QVector& b) { return a.e_ < b.e_; }

  QVector& operator+=(const QVector& o) {
    check_dim(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  QVector& operator-=(const QVector& o) {
    check_dim(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
  }
  QVector& operator*=(const Rational& c) {
    for (auto& x : e_) x *= c;
    return *this;
  }

  friend QVector operator+(QVector a, const QVector& b) { return a += b; }
  friend QVector operator-(QVector a, const QVector& b) { return a -= b; }
  friend QVector operator*(const Rational& c, QVector a) { return a *= c; }
  friend QVector operator-(QVector a) {
    for (auto& x : a.e_) x = -x;
    return a;
  }

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (i) os << ',';
      os << e_[i].str();
    }
    os << ')';
    return os.str();
  }

 private:
  void check_dim(const QVector& o) const {
    if (e_.size() != o.e_.size()) throw SemanticError("vector dimension mismatch");
  }
  std::vector<Rational> e_;
};

inline Rational dot(const QVector& a, const QVector& b) {
  if (a.dim() != b.dim()) throw SemanticError("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational norm_sq(const QVector& a) { return dot(a, a); }

inline bool is_integer_vector(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_integer(x); });
}

// Scales a nonzero vector to its primitive integer representative with the
// same direction (clear denominators, divide by the gcd of the entries).
inline QVector primitive(const QVector& v) {
  if (v.is_zero()) throw SemanticError("primitive: zero vector");
  Int l = 1;
  for (const auto& x : v) l = lcm_int(l, den(x));
  Int g = 0;
  std::vector<Rational> out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    Int n = num(v[i]) * (l / den(v[i]));
    out[i] = Rational(n);
    g = boost::multiprecision::gcd(g, abs(n));
  }
  for (auto& x : out) x /= Rational(g);
  return QVector(std::move(out));
}

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    a_.reserve(r_ * c_);
    for (const auto& row : rows) {
      if (row.size() != c_) throw SemanticError("matrix rows of unequal length");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static QMatrix from_rows(const std::vector<QVector>& rows) {
    if (rows.empty()) return QMatrix();
    QMatrix m(rows.size(), rows[0].dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].dim() != m.c_) throw SemanticError("matrix rows of unequal length");
      for (std::size_t j = 0; j < m.c_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool is_square() const { return r_ == c_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  QVector row(std::size_t i) const {
    QVector v(c_);
    for (std::size_t j = 0; j < c_; ++j) v[j] = (*this)(i, j);
    return v;
  }
  QVector col(std::size_t j) const {
    QVector v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  std::vector<QVector> row_vectors() const {
    std::vector<QVector> out;
    out.reserve(r_);
    for (std::size_t i = 0; i < r_; ++i) out.push_back(row(i));
    return out;
  }

  QMatrix transpose() const {
    QMatrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) = default;
  friend bool operator<(const QMatrix& a, const QMatrix& b) {
    if (a.r_ != b.r_) return a.r_ < b.r_;
    if (a.c_ != b.c_) return a.c_ < b.c_;
    return a.a_ < b.a_;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.c_ != b.r_) throw SemanticError("matrix product: dimension mismatch");
    QMatrix p(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.c_; ++j) p(i, j) += a(i, k) * b(k, j);
      }
    return p;
  }

  friend QVector operator*(const QMatrix& a, const QVector& v) {
    if (a.c_ != v.dim()) throw SemanticError("matrix-vector product: dimension mismatch");
    QVector out(a.r_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t j = 0; j < a.c_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend QMatrix operator-(QMatrix a) {
    for (auto& x : a.a_) x = -x;
    return a;
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < r_; ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < c_; ++j) {
        if (j) os << ' ';
        os << (*this)(i, j).str();
      }
    }
    os << ']';
    return os.str();
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Rational> a_;  // row-major
};

namespace detail {

// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
    std::size_t sel = r;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(r, j));
    const Rational p = m(r, col);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) /= p;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(QMatrix m) { return detail::rref(m).size(); }

inline std::size_t rank(const std::vector<QVector>& rows) {
  if (rows.empty()) return 0;
  return rank(QMatrix::from_rows(rows));
}

inline Rational det(QMatrix m) {
  if (!m.is_square()) throw SemanticError("det: matrix not square");
  Rational d = 1;
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && m(sel, col) == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(sel, j), m(col, j));
      d = -d;
    }
    d *= m(col, col);
    const Rational inv = 1 / m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m(i, col) == 0) continue;
      const Rational f = m(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return d;
}

inline std::optional<QMatrix> inverse(const QMatrix& a) {
  if (!a.is_square()) throw SemanticError("inverse: matrix not square");
  const std::size_t n = a.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = detail::rref(aug);
  if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

// Any solution of A x = b, if one exists.
inline std::optional<QVector> solve(const QMatrix& a, const QVector& b) {
  if (a.rows() != b.dim()) throw SemanticError("solve: dimension mismatch");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto pivots = detail::rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;  // 0 = 1 row
  QVector x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
  return x;
}

// Basis of the right kernel {x : A x = 0}.
inline std::vector<QVector> kernel_basis(QMatrix a) {
  const std::size_t n = a.cols();
  auto pivots = detail::rref(a);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    QVector v(n);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline QMatrix matrix_power(const QMatrix& a, unsigned long e) {
  if (!a.is_square()) throw SemanticError("matrix_power: matrix not square");
  QMatrix result = QMatrix::identity(a.rows());
  QMatrix base = a;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

}  // namespace polycomm
