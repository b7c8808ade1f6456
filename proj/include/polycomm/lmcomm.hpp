#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "polycomm/lattice.hpp"
#include "polycomm/polyfun.hpp"
#include "polycomm/polynomial.hpp"

namespace polycomm {

// An abstract-commensurator class of Z^n, represented by the rational
// matrix of the germ v -> A v.
struct CommElement {
  QMatrix matrix;

  explicit CommElement(QMatrix m) : matrix(std::move(m)) {
    if (!matrix.is_square()) throw SemanticError("commensurator element must be square");
    if (det(matrix) == 0) throw SemanticError("commensurator element must be invertible");
  }
};

inline CommElement comm_compose(const CommElement& g, const CommElement& h) {
  if (g.matrix.rows() != h.matrix.rows())
    throw SemanticError("comm_compose: dimension mismatch");
  return CommElement(g.matrix * h.matrix);
}

inline CommElement comm_invert(const CommElement& g) { return CommElement(*inverse(g.matrix)); }

// The germ acts as the identity on a finite-index subgroup iff the matrix
// is the identity.
inline bool centralizes_finite_index(const CommElement& g) {
  return g.matrix == QMatrix::identity(g.matrix.rows());
}

// The lattice Z^n intersect A^-1(Z^n) and its index in Z^n.  A^-1(Z^n) is
// spanned by the rows of A^-T; both lattices are scaled by the common
// denominator and intersected exactly.
inline std::pair<Lattice, Int> domain_lattice(const QMatrix& a) {
  if (!a.is_square()) throw SemanticError("domain_lattice: matrix not square");
  const std::size_t n = a.rows();
  auto ainv = inverse(a);
  if (!ainv) throw SemanticError("domain_lattice: singular matrix");
  const QMatrix ainv_t = ainv->transpose();
  Int d = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d = lcm_int(d, den(ainv_t(i, j)));
  std::vector<QVector> scaled_rows;
  for (std::size_t i = 0; i < n; ++i) scaled_rows.push_back(Rational(d) * ainv_t.row(i));
  const Lattice scaled = lattice_intersect(scaled_lattice(n, d), hnf(scaled_rows, n));
  Lattice result;
  result.ambient_dim = n;
  for (const auto& row : scaled.basis) result.basis.push_back(Rational(1, d) * row);
  auto index = lattice_index(result, standard_lattice(n));
  if (!index) throw SemanticError("internal: domain lattice has infinite index");
  return {std::move(result), *index};
}

struct OrderCertificate {
  QPolynomial minimal_poly;
  bool squarefree = false;
  std::vector<unsigned long> cyclotomic_indices;  // the Phi_k dividing the minimal polynomial
  QPolynomial non_cyclotomic_rest;                // trivial iff the order is finite
};

// Finite order iff the minimal polynomial is squarefree and a product of
// cyclotomics; the order is then the lcm of their indices.  No numerics:
// candidate indices k are bounded by phi(k) <= deg and tried by exact
// division.
inline std::optional<Int> matrix_order(const QMatrix& a, OrderCertificate* cert = nullptr) {
  if (!a.is_square()) throw SemanticError("matrix_order: matrix not square");
  if (det(a) == 0) throw SemanticError("matrix_order: singular matrix");
  const QPolynomial p = minimal_polynomial(a);
  OrderCertificate local;
  local.minimal_poly = p;
  local.squarefree = is_squarefree(p);
  local.non_cyclotomic_rest = p;
  std::optional<Int> order;
  if (local.squarefree && p.has_integer_coefficients()) {
    QPolynomial rest = p;
    const unsigned long d = static_cast<unsigned long>(p.degree());
    for (unsigned long k = 1; k <= 2 * d * d + 1 && rest.degree() > 0; ++k) {
      if (euler_phi(k) > d) continue;
      const QPolynomial phi = cyclotomic(k);
      if (phi.degree() > rest.degree()) continue;
      auto [q, r] = divmod(rest, phi);
      if (!r.is_zero()) continue;
      local.cyclotomic_indices.push_back(k);
      rest = std::move(q);
    }
    local.non_cyclotomic_rest = rest;
    if (rest.degree() == 0) {
      Int l = 1;
      for (unsigned long k : local.cyclotomic_indices) l = lcm_int(l, Int(k));
      order = l;
    }
  }
  if (cert) *cert = std::move(local);
  return order;
}

struct CircleCertificate {
  QPolynomial minimal_poly;
  bool squarefree = false;
  long roots_on_circle = 0;
};

// Conjugate in GL_n(R) to an orthogonal matrix iff diagonalizable over C
// with every eigenvalue of modulus one: minimal polynomial squarefree and
// all of its roots on the unit circle.
inline bool is_orthogonalizable(const QMatrix& a, CircleCertificate* cert = nullptr) {
  if (!a.is_square()) throw SemanticError("is_orthogonalizable: matrix not square");
  if (det(a) == 0) throw SemanticError("is_orthogonalizable: singular matrix");
  CircleCertificate local;
  local.minimal_poly = minimal_polynomial(a);
  local.squarefree = is_squarefree(local.minimal_poly);
  const auto circle = count_unit_circle_roots(local.minimal_poly);
  local.roots_on_circle = circle.on_circle;
  const bool result = local.squarefree && circle.all_on_circle;
  if (cert) *cert = std::move(local);
  return result;
}

// The HNN-extension datum: A in GL_n(Q) together with a finite-index
// sublattice L of Z^n intersect A^-1(Z^n).
struct LMGroup {
  QMatrix a;
  Lattice l;
  std::size_t n = 0;
};

inline LMGroup make_lm_group(QMatrix a, std::optional<Lattice> l = std::nullopt) {
  if (!a.is_square()) throw SemanticError("LM group: matrix must be square");
  const std::size_t n = a.rows();
  if (n == 0) throw SemanticError("LM group: empty matrix");
  if (det(a) == 0) throw SemanticError("LM group: matrix must be invertible");
  auto [domain, domain_index] = domain_lattice(a);
  (void)domain_index;
  Lattice lat = l ? std::move(*l) : domain;
  if (lat.ambient_dim != n) throw SemanticError("LM group: lattice dimension mismatch");
  if (lat.rank() != n) throw SemanticError("LM group: L must have finite index in Z^n");
  for (const auto& row : lat.basis) {
    if (!lattice_contains(domain, row))
      throw SemanticError("LM group: L is not contained in Z^n intersect A^-1(Z^n)");
    if (!is_integer_vector(a * row))
      throw SemanticError("LM group: A L is not contained in Z^n");
  }
  return {std::move(a), std::move(lat), n};
}

struct Classification {
  std::optional<Int> order;  // nullopt = infinite
  bool cat0 = false;
  bool biautomatic = false;
  bool embeddable = false;
  Int l_index = 0;
  OrderCertificate order_certificate;
  CircleCertificate circle_certificate;
};

// Decides CAT(0), biautomaticity and embeddability into a biautomatic
// group for G(A, L).  All three depend only on A; the lattice is validated
// and its index reported.
inline Classification classify(const LMGroup& g) {
  Classification out;
  out.order = matrix_order(g.a, &out.order_certificate);
  out.cat0 = is_orthogonalizable(g.a, &out.circle_certificate);
  out.biautomatic = out.order.has_value();
  out.embeddable = out.biautomatic;
  auto idx = lattice_index(g.l, standard_lattice(g.n));
  out.l_index = idx ? *idx : Int(0);
  return out;
}

// Finite bound for the image of a commensurating action preserving
// f-lengths on the sublattice spanned by the columns of B, in
// B-coordinates: the symmetry group of the restricted function.
inline std::vector<QMatrix> comm_image_bound(const PolyFun& f, const QMatrix& b) {
  if (b.rows() != f.dim()) throw SemanticError("comm_image_bound: dimension mismatch");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (!is_integer(b(i, j)))
        throw SemanticError("comm_image_bound: basis matrix must be integral");
  PolyFun g = restrict(f, b);
  return symmetry_group(g);
}

}  // namespace polycomm
