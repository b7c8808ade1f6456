#pragma once

#include <random>
#include <vector>

#include "polycomm/json_io.hpp"

// Shared fixtures and independent oracles.  Everything here is test-only
// and deliberately avoids the library's own conversion paths wherever it
// serves as a cross-check.
namespace fixtures {

using namespace polycomm;

inline Rational q(long n, long d = 1) { return Rational(n, d); }

inline QVector vec2(const Rational& a, const Rational& b) { return QVector{a, b}; }

// The running planar example: six sector pieces whose level set is a
// pentagon.
inline PolyFun example_polyfun() {
  auto piece = [](QVector z1, QVector z2, QVector y) {
    return Piece{Cone::from_generators(2, {std::move(z1), std::move(z2)}), std::move(y)};
  };
  std::vector<Piece> pieces;
  pieces.push_back(piece(vec2(q(1, 4), q(1, 2)), vec2(q(0), q(1, 2)), vec2(q(0), q(2))));
  pieces.push_back(piece(vec2(q(1, 4), q(1, 2)), vec2(q(1, 4), q(0)), vec2(q(4), q(0))));
  pieces.push_back(piece(vec2(q(1, 4), q(1, 2)), vec2(q(1, 4), q(0)), vec2(q(4), q(0))));
  pieces.push_back(piece(vec2(q(1, 4), q(0)), vec2(q(0), q(-1, 2)), vec2(q(4), q(-2))));
  pieces.push_back(piece(vec2(q(-1, 2), q(0)), vec2(q(0), q(-1, 2)), vec2(q(-2), q(-2))));
  pieces.push_back(piece(vec2(q(0), q(1, 2)), vec2(q(-1, 2), q(0)), vec2(q(-2), q(2))));
  return PolyFun(2, std::move(pieces));
}

// The l1 norm as a polyhedral function: one piece per closed quadrant with
// the matching sign vector as form.
inline PolyFun l1_polyfun() {
  std::vector<Piece> pieces;
  for (int sx : {+1, -1})
    for (int sy : {+1, -1}) {
      std::vector<QVector> gens{vec2(q(sx), q(0)), vec2(q(0), q(sy))};
      pieces.push_back({Cone::from_generators(2, std::move(gens)), vec2(q(sx), q(sy))});
    }
  return PolyFun(2, std::move(pieces));
}

inline Alphabet example_alphabet() {
  return Alphabet(2, {{"e", vec2(q(0), q(0))},
                      {"x", vec2(q(1), q(0))},
                      {"y", vec2(q(0), q(1))},
                      {"X", vec2(q(-1), q(0))},
                      {"Y", vec2(q(0), q(-1))}});
}

// (exy^2)*(ey)* u (exy^2)*(e^3x)* u (exy^2)* y^-1 (e^3x)* u (e^3x)*(eY)*
// u (eX)*(eY)* u (ey)*(eX)*
inline StarredLanguage example_language() {
  Alphabet a = example_alphabet();
  auto w = [&](std::initializer_list<const char*> names) {
    std::vector<std::string> v(names.begin(), names.end());
    return make_word(a, v);
  };
  std::vector<StarredBranch> branches;
  branches.push_back({{w({}), w({}), w({})}, {w({"e", "x", "y", "y"}), w({"e", "y"})}});
  branches.push_back({{w({}), w({}), w({})}, {w({"e", "x", "y", "y"}), w({"e", "e", "e", "x"})}});
  branches.push_back({{w({}), w({"Y"}), w({})}, {w({"e", "x", "y", "y"}), w({"e", "e", "e", "x"})}});
  branches.push_back({{w({}), w({}), w({})}, {w({"e", "e", "e", "x"}), w({"e", "Y"})}});
  branches.push_back({{w({}), w({}), w({})}, {w({"e", "X"}), w({"e", "Y"})}});
  branches.push_back({{w({}), w({}), w({})}, {w({"e", "y"}), w({"e", "X"})}});
  return StarredLanguage(std::move(a), std::move(branches));
}

inline Rational random_rational(std::mt19937& rng, int max_num = 6, int max_den = 6) {
  std::uniform_int_distribution<int> n(-max_num, max_num), d(1, max_den);
  return Rational(n(rng), d(rng));
}

inline QVector random_integer_vector(std::mt19937& rng, std::size_t dim, int bound = 4) {
  std::uniform_int_distribution<int> e(-bound, bound);
  QVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = e(rng);
  return v;
}

inline QMatrix random_rational_matrix(std::mt19937& rng, std::size_t n, int max_num = 6,
                                      int max_den = 6) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = random_rational(rng, max_num, max_den);
  return m;
}

inline QMatrix random_invertible(std::mt19937& rng, std::size_t n, int max_num = 6,
                                 int max_den = 6) {
  while (true) {
    QMatrix m = random_rational_matrix(rng, n, max_num, max_den);
    if (det(m) != 0) return m;
  }
}

// Product of random elementary row operations; determinant +-1.
inline QMatrix random_unimodular(std::mt19937& rng, std::size_t n, int ops = 6) {
  QMatrix m = QMatrix::identity(n);
  std::uniform_int_distribution<int> idx(0, static_cast<int>(n) - 1), c(-2, 2);
  for (int t = 0; t < ops; ++t) {
    int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    QMatrix e = QMatrix::identity(n);
    e(i, j) = c(rng);
    m = m * e;
  }
  return m;
}

// Valid planar polyhedral function: a fan of sectors spanned by
// consecutive directions (the four axis directions are always included,
// so each sector lies inside a quadrant) with forms interpolating random
// positive boundary values.  Valid by construction.
inline PolyFun random_valid_polyfun(std::mt19937& rng, int extra_dirs = 4) {
  std::set<QVector> dirset;
  dirset.insert(vec2(q(1), q(0)));
  dirset.insert(vec2(q(0), q(1)));
  dirset.insert(vec2(q(-1), q(0)));
  dirset.insert(vec2(q(0), q(-1)));
  std::uniform_int_distribution<int> e(-4, 4);
  while (dirset.size() < 4 + static_cast<std::size_t>(extra_dirs)) {
    QVector d = vec2(q(e(rng)), q(e(rng)));
    if (!d.is_zero()) dirset.insert(primitive(d));
  }
  std::vector<QVector> dirs(dirset.begin(), dirset.end());
  auto angle_class = [](const QVector& v) {
    return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1;
  };
  std::sort(dirs.begin(), dirs.end(), [&](const QVector& a, const QVector& b) {
    const int ha = angle_class(a), hb = angle_class(b);
    if (ha != hb) return ha < hb;
    return a[0] * b[1] - a[1] * b[0] > 0;
  });
  std::uniform_int_distribution<int> cn(1, 5), cd(1, 3);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < dirs.size(); ++i) values.push_back(Rational(cn(rng), cd(rng)));
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const std::size_t j = (i + 1) % dirs.size();
    QMatrix m(2, 2);
    for (std::size_t col = 0; col < 2; ++col) {
      m(0, col) = dirs[i][col];
      m(1, col) = dirs[j][col];
    }
    auto y = solve(m, QVector{values[i], values[j]});
    pieces.push_back({Cone::from_generators(2, {dirs[i], dirs[j]}), *y});
  }
  return PolyFun(2, std::move(pieces));
}

// Caratheodory membership oracle: v lies in cone(Z) iff it is a
// nonnegative combination of some linearly independent subset of Z.
inline bool cone_member_oracle(const std::vector<QVector>& zs, const QVector& v,
                               std::size_t dim) {
  if (v.is_zero()) return true;
  const std::size_t m = zs.size();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > dim) continue;
    std::vector<QVector> subset;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) subset.push_back(zs[i]);
    if (rank(subset) != subset.size()) continue;
    QMatrix cols(dim, subset.size());
    for (std::size_t c = 0; c < subset.size(); ++c)
      for (std::size_t r = 0; r < dim; ++r) cols(r, c) = subset[c][r];
    auto coeff = solve(cols, v);
    if (!coeff) continue;
    bool ok = true;
    for (std::size_t c = 0; c < subset.size(); ++c)
      if ((*coeff)[c] < 0) ok = false;
    if (ok && cols * *coeff == v) return true;
  }
  return false;
}

// Characteristic polynomial by Faddeev-LeVerrier; an oracle independent of
// the Krylov-based minimal polynomial.
inline QPolynomial char_poly(const QMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  QMatrix m = QMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    if (k > 1) {
      QMatrix shifted = a * m;
      for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c[n - k + 1];
      m = std::move(shifted);
    }
    QMatrix am = a * m;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Rational(Int(k));
  }
  return QPolynomial(std::move(c));
}

inline int mobius(unsigned long k) {
  int mu = 1;
  for (unsigned long p = 2; p * p <= k; ++p) {
    if (k % p) continue;
    k /= p;
    if (k % p == 0) return 0;
    mu = -mu;
  }
  if (k > 1) mu = -mu;
  return mu;
}

// Phi_k = prod_{d | k} (x^d - 1)^{mobius(k/d)}; independent of the divisor
// recursion used by the library.
inline QPolynomial cyclotomic_mobius(unsigned long k) {
  QPolynomial numerator{1};
  std::vector<unsigned long> denominators;
  for (unsigned long d = 1; d <= k; ++d) {
    if (k % d) continue;
    const int mu = mobius(k / d);
    if (mu == 1) numerator = numerator * QPolynomial::x_pow_minus_one(static_cast<unsigned>(d));
    if (mu == -1) denominators.push_back(d);
  }
  for (unsigned long d : denominators) {
    auto [quo, rem] = divmod(numerator, QPolynomial::x_pow_minus_one(static_cast<unsigned>(d)));
    if (!rem.is_zero()) throw std::logic_error("mobius cyclotomic: non-exact division");
    numerator = std::move(quo);
  }
  return numerator;
}

}  // namespace fixtures
