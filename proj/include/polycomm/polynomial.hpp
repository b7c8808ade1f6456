#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "polycomm/linalg.hpp"

namespace polycomm {

// Univariate polynomial over the rationals, coefficients lowest degree
// first.  The zero polynomial has an empty coefficient list.
class QPolynomial {
 public:
  QPolynomial() = default;
  explicit QPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  QPolynomial(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

  static QPolynomial constant(const Rational& c) { return QPolynomial({c}); }
  static QPolynomial x() { return QPolynomial({0, 1}); }
  // x^k - 1
  static QPolynomial x_pow_minus_one(unsigned k) {
    std::vector<Rational> c(k + 1);
    c[0] = -1;
    c[k] = 1;
    return QPolynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& coeff(std::size_t i) const {
    static const Rational zero = 0;
    return i < c_.size() ? c_[i] : zero;
  }
  const Rational& leading() const { return c_.back(); }
  const std::vector<Rational>& coefficients() const { return c_; }

  Rational eval(const Rational& x) const {
    Rational v = 0;
    for (std::size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
    return v;
  }

  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  bool has_integer_coefficients() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return is_integer(q); });
  }

  QPolynomial monic() const {
    if (is_zero()) return *this;
    QPolynomial p = *this;
    const Rational l = p.c_.back();
    for (auto& x : p.c_) x /= l;
    return p;
  }

  QPolynomial derivative() const {
    if (c_.size() <= 1) return QPolynomial();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = Rational(Int(i)) * c_[i];
    return QPolynomial(std::move(d));
  }

  friend bool operator==(const QPolynomial& a, const QPolynomial& b) = default;

  friend QPolynomial operator+(const QPolynomial& a, const QPolynomial& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return QPolynomial(std::move(c));
  }
  friend QPolynomial operator-(const QPolynomial& a, const QPolynomial& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return QPolynomial(std::move(c));
  }
  friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return QPolynomial();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return QPolynomial(std::move(c));
  }
  friend QPolynomial operator*(const Rational& s, const QPolynomial& a) {
    std::vector<Rational> c(a.c_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = s * a.c_[i];
    return QPolynomial(std::move(c));
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!out.empty()) out += (c_[i] > 0) ? " + " : " - ";
      else if (c_[i] < 0) out += "-";
      const Rational a = abs(c_[i]);
      if (a != 1 || i == 0) out += a.str();
      if (i >= 1) out += "x";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

// Exact euclidean division: a = q*b + r with deg r < deg b.
inline std::pair<QPolynomial, QPolynomial> divmod(const QPolynomial& a, const QPolynomial& b) {
  if (b.is_zero()) throw SemanticError("polynomial division by zero");
  std::vector<Rational> rem(a.coefficients());
  const int db = b.degree();
  if (a.degree() < db) return {QPolynomial(), a};
  std::vector<Rational> quo(a.degree() - db + 1);
  for (int i = a.degree(); i >= db; --i) {
    const Rational f = rem[i] / b.leading();
    if (f == 0) continue;
    quo[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.coeff(j);
  }
  return {QPolynomial(std::move(quo)), QPolynomial(std::move(rem))};
}

inline bool divides(const QPolynomial& b, const QPolynomial& a) {
  return divmod(a, b).second.is_zero();
}

inline QPolynomial gcd_poly(QPolynomial a, QPolynomial b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline bool is_squarefree(const QPolynomial& p) {
  if (p.is_zero()) return false;
  return gcd_poly(p, p.derivative()).degree() == 0;
}

// Yun's algorithm: p = prod f_i^i with the f_i squarefree and coprime.
inline std::vector<std::pair<QPolynomial, int>> squarefree_decomposition(const QPolynomial& p) {
  if (p.is_zero()) throw SemanticError("squarefree decomposition of zero");
  std::vector<std::pair<QPolynomial, int>> out;
  QPolynomial g = gcd_poly(p, p.derivative());
  if (g.degree() == 0) {
    if (p.degree() > 0) out.emplace_back(p.monic(), 1);
    return out;
  }
  QPolynomial w = divmod(p, g).first;
  QPolynomial y = divmod(p.derivative(), g).first;
  int i = 1;
  while (w.degree() > 0) {
    QPolynomial z = y - w.derivative();
    QPolynomial h = gcd_poly(w, z);
    if (h.degree() > 0) out.emplace_back(h, i);
    w = divmod(w, h).first;
    y = divmod(z, h).first;
    ++i;
  }
  return out;
}

// Coefficient reversal x^deg * p(1/x); factors of x drop out.
inline QPolynomial reciprocal(const QPolynomial& p) {
  std::vector<Rational> c(p.coefficients().rbegin(), p.coefficients().rend());
  return QPolynomial(std::move(c));
}

namespace detail {

// Scale to integer coefficients with positive content; sign-preserving.
inline QPolynomial primitive_scale(const QPolynomial& p) {
  if (p.is_zero()) return p;
  Int l = 1;
  for (const auto& c : p.coefficients()) l = lcm_int(l, den(c));
  Int g = 0;
  for (const auto& c : p.coefficients()) g = boost::multiprecision::gcd(g, abs(num(c) * (l / den(c))));
  return Rational(l, g) * p;
}

inline int sign_of(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace detail

// Number of distinct real roots of p in the open interval (a, b).
// Requires p(a) != 0 and p(b) != 0.
inline int sturm_count_open(const QPolynomial& p, const Rational& a, const Rational& b) {
  if (p.is_zero()) throw SemanticError("sturm count of zero polynomial");
  if (p.eval(a) == 0 || p.eval(b) == 0)
    throw SemanticError("sturm_count_open: endpoint is a root");
  std::vector<QPolynomial> chain;
  chain.push_back(detail::primitive_scale(p));
  QPolynomial d = p.derivative();
  if (!d.is_zero()) chain.push_back(detail::primitive_scale(d));
  while (chain.size() >= 2 && chain.back().degree() >= 0) {
    QPolynomial r = divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(detail::primitive_scale(Rational(-1) * r));
  }
  auto variations = [&](const Rational& x) {
    int v = 0, prev = 0;
    for (const auto& q : chain) {
      const int s = detail::sign_of(q.eval(x));
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++v;
      prev = s;
    }
    return v;
  };
  return variations(a) - variations(b);
}

struct CircleRootCount {
  long on_circle = 0;
  bool all_on_circle = false;
};

namespace detail {

// Distinct roots of a squarefree polynomial on the unit circle.  Roots at
// +-1 are divided out first; the remaining reciprocal part g = gcd(f, f*)
// is palindromic of even degree 2m and substituting u = x + 1/x turns its
// circle roots (conjugate pairs) into the roots of a degree-m polynomial in
// the open interval (-2, 2), counted by Sturm sequences.
inline long distinct_circle_roots(QPolynomial f) {
  long count = 0;
  const QPolynomial x_minus_1({-1, 1}), x_plus_1({1, 1});
  if (f.eval(1) == 0) {
    ++count;
    f = divmod(f, x_minus_1).first;
  }
  if (f.eval(-1) == 0) {
    ++count;
    f = divmod(f, x_plus_1).first;
  }
  QPolynomial g = gcd_poly(f, reciprocal(f));
  if (g.degree() <= 0) return count;
  const int d = g.degree();
  if (d % 2 != 0) throw SemanticError("internal: reciprocal factor of odd degree");
  const int m = d / 2;
  for (int k = 0; k <= d; ++k)
    if (g.coeff(k) != g.coeff(d - k))
      throw SemanticError("internal: reciprocal factor not palindromic");
  // q(u) = g_m + sum_k g_{m+k} P_k(u), with x^k + x^-k = P_k(x + 1/x).
  QPolynomial q = QPolynomial::constant(g.coeff(m));
  QPolynomial p_prev = QPolynomial::constant(2), p_cur = QPolynomial::x();
  for (int k = 1; k <= m; ++k) {
    q = q + g.coeff(m + k) * p_cur;
    QPolynomial p_next = QPolynomial::x() * p_cur - p_prev;
    p_prev = std::move(p_cur);
    p_cur = std::move(p_next);
  }
  count += 2 * sturm_count_open(q, -2, 2);
  return count;
}

}  // namespace detail

// Roots of modulus exactly one, with multiplicity, decided exactly.
inline CircleRootCount count_unit_circle_roots(const QPolynomial& p) {
  if (p.is_zero()) throw SemanticError("count_unit_circle_roots of zero polynomial");
  CircleRootCount out;
  if (p.degree() == 0) {
    out.all_on_circle = true;  // vacuous
    return out;
  }
  for (const auto& [factor, mult] : squarefree_decomposition(p))
    out.on_circle += mult * detail::distinct_circle_roots(factor);
  out.all_on_circle = (out.on_circle == p.degree());
  return out;
}

inline unsigned long euler_phi(unsigned long k) {
  unsigned long result = k;
  for (unsigned long p = 2; p * p <= k; ++p) {
    if (k % p) continue;
    while (k % p == 0) k /= p;
    result -= result / p;
  }
  if (k > 1) result -= result / k;
  return result;
}

// Phi_k via the divisor recursion x^k - 1 = prod_{d | k} Phi_d.
inline QPolynomial cyclotomic(unsigned long k) {
  if (k == 0) throw SemanticError("cyclotomic index must be positive");
  std::vector<unsigned long> divisors;
  for (unsigned long d = 1; d <= k; ++d)
    if (k % d == 0) divisors.push_back(d);
  std::vector<QPolynomial> phi(divisors.size());
  for (std::size_t i = 0; i < divisors.size(); ++i) {
    QPolynomial num = QPolynomial::x_pow_minus_one(static_cast<unsigned>(divisors[i]));
    for (std::size_t j = 0; j < i; ++j)
      if (divisors[i] % divisors[j] == 0) num = divmod(num, phi[j]).first;
    phi[i] = std::move(num);
  }
  return phi.back();
}

// k with p == Phi_k, if any.  phi(k) >= sqrt(k/2) bounds the search.
inline std::optional<unsigned long> cyclotomic_index(const QPolynomial& p) {
  if (p.is_zero()) throw SemanticError("cyclotomic_index of zero polynomial");
  if (p.degree() < 1 || !p.is_monic() || !p.has_integer_coefficients()) return std::nullopt;
  const unsigned long d = static_cast<unsigned long>(p.degree());
  const unsigned long kmax = 2 * d * d + 1;
  for (unsigned long k = 1; k <= kmax; ++k)
    if (euler_phi(k) == d && cyclotomic(k) == p) return k;
  return std::nullopt;
}

// Least-degree monic p with p(A) = 0, by detecting the first linear
// dependency among the flattened powers I, A, A^2, ...
inline QPolynomial minimal_polynomial(const QMatrix& a) {
  if (!a.is_square()) throw SemanticError("minimal_polynomial: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0) return QPolynomial({1});
  auto flatten = [n](const QMatrix& m) {
    QVector v(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[i * n + j] = m(i, j);
    return v;
  };
  std::vector<QVector> powers{flatten(QMatrix::identity(n))};
  QMatrix cur = QMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    cur = cur * a;
    QVector target = flatten(cur);
    // Solve sum_i c_i A^i = A^k over the previous powers.
    QMatrix cols(n * n, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n * n; ++j) cols(j, i) = powers[i][j];
    if (auto c = solve(cols, target)) {
      std::vector<Rational> coeffs(k + 1);
      for (std::size_t i = 0; i < k; ++i) coeffs[i] = -(*c)[i];
      coeffs[k] = 1;
      return QPolynomial(std::move(coeffs));
    }
    powers.push_back(std::move(target));
  }
  throw SemanticError("internal: no minimal polynomial within Cayley-Hamilton bound");
}

}  // namespace polycomm
