#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "polycomm/linalg.hpp"

namespace polycomm {

// Integer lattice given by a canonical row-style Hermite normal form basis:
// pivots positive, entries above each pivot reduced into [0, pivot), rows
// ordered by pivot column.  The basis is unique per lattice, so equality of
// lattices is structural equality of bases.
struct Lattice {
  std::size_t ambient_dim = 0;
  std::vector<QVector> basis;  // HNF rows, integer entries

  std::size_t rank() const { return basis.size(); }
  friend bool operator==(const Lattice&, const Lattice&) = default;
};

namespace detail {

using IntRow = std::vector<Int>;

inline void row_axpy(IntRow& target, const Int& q, const IntRow& src) {
  for (std::size_t j = 0; j < target.size(); ++j) target[j] -= q * src[j];
}

// Row Hermite normal form, in place.  If `u` is non-null it receives the
// unimodular transform applied to the rows, so that u * input = output.
// Returns the number of nonzero rows; zero rows are moved to the bottom.
inline std::size_t hnf_inplace(std::vector<IntRow>& a, std::vector<IntRow>* u = nullptr) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  if (u) {
    u->assign(m, IntRow(m));
    for (std::size_t i = 0; i < m; ++i) (*u)[i][i] = 1;
  }
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    if (u) std::swap((*u)[i], (*u)[j]);
  };
  auto subtract = [&](std::size_t i, const Int& q, std::size_t j) {
    if (q == 0) return;
    row_axpy(a[i], q, a[j]);
    if (u) row_axpy((*u)[i], q, (*u)[j]);
  };
  auto negate = [&](std::size_t i) {
    for (auto& x : a[i]) x = -x;
    if (u)
      for (auto& x : (*u)[i]) x = -x;
  };

  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < m; ++col) {
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (a[i][col] != 0 && (best == m || abs(a[i][col]) < abs(a[best][col]))) best = i;
      if (best == m) break;  // column clear below r
      swap_rows(r, best);
      bool nonzero_left = false;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (a[i][col] == 0) continue;
        subtract(i, a[i][col] / a[r][col], r);  // truncated quotient shrinks |entry|
        if (a[i][col] != 0) nonzero_left = true;
      }
      if (!nonzero_left) break;
    }
    if (a[r][col] == 0) continue;
    if (a[r][col] < 0) negate(r);
    for (std::size_t i = 0; i < r; ++i) subtract(i, floor_div(a[i][col], a[r][col]), r);
    ++r;
  }
  return r;
}

inline IntRow to_int_row(const QVector& v) {
  IntRow row(v.dim());
  for (std::size_t j = 0; j < v.dim(); ++j) row[j] = to_int(v[j]);
  return row;
}

inline QVector to_qvector(const IntRow& row) {
  QVector v(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) v[j] = Rational(row[j]);
  return v;
}

}  // namespace detail

// Canonical HNF basis of the lattice generated by the given integer rows.
// Idempotent and independent of the order of the input rows.
inline Lattice hnf(const std::vector<QVector>& rows, std::size_t ambient_dim) {
  std::vector<detail::IntRow> a;
  a.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.dim() != ambient_dim) throw SemanticError("hnf: row dimension mismatch");
    a.push_back(detail::to_int_row(r));
  }
  const std::size_t rk = detail::hnf_inplace(a);
  Lattice l;
  l.ambient_dim = ambient_dim;
  for (std::size_t i = 0; i < rk; ++i) l.basis.push_back(detail::to_qvector(a[i]));
  return l;
}

inline Lattice standard_lattice(std::size_t n) {
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    QVector e(n);
    e[i] = 1;
    rows.push_back(std::move(e));
  }
  return hnf(rows, n);
}

inline Lattice scaled_lattice(std::size_t n, const Int& c) {
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    QVector e(n);
    e[i] = Rational(c);
    rows.push_back(std::move(e));
  }
  return hnf(rows, n);
}

// Integer coordinates of v with respect to the HNF basis, if v lies in the
// lattice.  Back substitution along the staircase.
inline std::optional<std::vector<Int>> lattice_coordinates(const Lattice& l, const QVector& v) {
  if (v.dim() != l.ambient_dim) throw SemanticError("lattice membership: dimension mismatch");
  if (!is_integer_vector(v)) return std::nullopt;
  QVector rest = v;
  std::vector<Int> coords(l.basis.size());
  for (std::size_t i = 0; i < l.basis.size(); ++i) {
    std::size_t p = 0;
    while (p < l.ambient_dim && l.basis[i][p] == 0) ++p;
    const Rational c = rest[p] / l.basis[i][p];
    if (!is_integer(c)) return std::nullopt;
    rest -= c * l.basis[i];
    coords[i] = num(c);
  }
  if (!rest.is_zero()) return std::nullopt;
  return coords;
}

inline bool lattice_contains(const Lattice& l, const QVector& v) {
  return lattice_coordinates(l, v).has_value();
}

// Exact intersection: the left kernel of the stacked basis matrix, read off
// a unimodular HNF transform, yields the coefficient lattice.
inline Lattice lattice_intersect(const Lattice& l1, const Lattice& l2) {
  if (l1.ambient_dim != l2.ambient_dim)
    throw SemanticError("lattice_intersect: ambient dimension mismatch");
  const std::size_t k1 = l1.rank(), k2 = l2.rank();
  std::vector<detail::IntRow> stacked;
  stacked.reserve(k1 + k2);
  for (const auto& r : l1.basis) stacked.push_back(detail::to_int_row(r));
  for (const auto& r : l2.basis) stacked.push_back(detail::to_int_row(r));
  std::vector<detail::IntRow> u;
  const std::size_t rk = detail::hnf_inplace(stacked, &u);
  std::vector<QVector> gens;
  for (std::size_t i = rk; i < k1 + k2; ++i) {
    QVector v(l1.ambient_dim);
    for (std::size_t t = 0; t < k1; ++t)
      for (std::size_t j = 0; j < l1.ambient_dim; ++j) v[j] += Rational(u[i][t]) * l1.basis[t][j];
    gens.push_back(std::move(v));
  }
  return hnf(gens, l1.ambient_dim);
}

// Index [sup : sub].  Requires sub to be contained in sup; the index is the
// absolute determinant of the coordinate matrix when the ranks agree, and
// infinite (nullopt) when the rank drops.
inline std::optional<Int> lattice_index(const Lattice& sub, const Lattice& sup) {
  if (sub.ambient_dim != sup.ambient_dim)
    throw SemanticError("lattice_index: ambient dimension mismatch");
  QMatrix coords(sub.rank(), sup.rank());
  for (std::size_t i = 0; i < sub.rank(); ++i) {
    auto c = lattice_coordinates(sup, sub.basis[i]);
    if (!c) throw SemanticError("lattice_index: sub is not a sublattice of sup");
    for (std::size_t j = 0; j < sup.rank(); ++j) coords(i, j) = Rational((*c)[j]);
  }
  if (sub.rank() < sup.rank()) return std::nullopt;
  return abs(to_int(det(coords)));
}

}  // namespace polycomm
