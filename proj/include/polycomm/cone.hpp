#pragma once

#include <memory>
#include <set>
#include <vector>

#include "polycomm/linalg.hpp"

namespace polycomm {

namespace detail {

// Incremental double description.  A cone is kept as a lineality basis plus
// extreme rays of the pointed quotient; halfspaces are inserted one at a
// time.  All processed normals are orthogonal to the current lineality.
//
// Insertion of a normal w:
//   * if some lineality vector b has <b,w> != 0, the lineality drops by one
//     dimension (b is traded for a ray) and every ray is shifted into the
//     hyperplane of w;
//   * otherwise the classic step applies: rays are split by the sign of
//     <.,w>, and each (+,-) pair contributes a candidate combination kept
//     exactly when its tight normals have rank dim - lineality - 1.
struct DoubleDescription {
  std::size_t dim;
  std::vector<QVector> lin;
  std::vector<QVector> rays;
  std::vector<QVector> normals;

  explicit DoubleDescription(std::size_t n) : dim(n) {
    for (std::size_t i = 0; i < n; ++i) {
      QVector e(n);
      e[i] = 1;
      lin.push_back(std::move(e));
    }
  }

  void insert(const QVector& w) {
    if (w.dim() != dim) throw SemanticError("halfspace normal dimension mismatch");
    if (w.is_zero()) return;
    std::size_t pivot = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dot(lin[i], w) != 0) {
        pivot = i;
        break;
      }
    if (pivot != lin.size()) {
      QVector b = lin[pivot];
      Rational bw = dot(b, w);
      if (bw < 0) {
        b = -b;
        bw = -bw;
      }
      std::vector<QVector> new_lin;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (i == pivot) continue;
        new_lin.push_back(lin[i] - (dot(lin[i], w) / bw) * b);
      }
      lin = std::move(new_lin);
      for (auto& r : rays) r -= (dot(r, w) / bw) * b;
      rays.push_back(std::move(b));
      normals.push_back(w);
      return;
    }

    std::vector<QVector> plus, zero, minus;
    for (auto& r : rays) {
      const Rational s = dot(r, w);
      if (s > 0) plus.push_back(std::move(r));
      else if (s < 0) minus.push_back(std::move(r));
      else zero.push_back(std::move(r));
    }
    normals.push_back(w);
    std::vector<QVector> next = plus;
    next.insert(next.end(), zero.begin(), zero.end());
    std::set<QVector> seen;
    for (const auto& r : next) seen.insert(primitive(r));
    for (const auto& p : plus)
      for (const auto& m : minus) {
        QVector c = dot(p, w) * m - dot(m, w) * p;
        if (c.is_zero()) continue;
        c = primitive(c);
        if (seen.count(c)) continue;
        if (!is_extreme(c)) continue;
        seen.insert(c);
        next.push_back(std::move(c));
      }
    rays = std::move(next);
  }

  // A ray of the current cone is extreme iff its tight normals have rank
  // dim - lineality - 1 (the minimal face containing it is one-dimensional
  // modulo the lineality space).
  bool is_extreme(const QVector& r) const {
    std::vector<QVector> tight;
    for (const auto& w : normals)
      if (dot(r, w) == 0) tight.push_back(w);
    return rank(tight) + lin.size() + 1 == dim;
  }
};

// r minus its orthogonal projection onto span(basis).
inline QVector project_off(const QVector& r, const std::vector<QVector>& basis) {
  if (basis.empty()) return r;
  const QMatrix b = QMatrix::from_rows(basis);
  const QMatrix gram = b * b.transpose();
  auto coeff = solve(gram, b * r);
  if (!coeff) throw SemanticError("internal: singular Gram matrix");
  QVector proj(r.dim());
  for (std::size_t i = 0; i < basis.size(); ++i) proj += (*coeff)[i] * basis[i];
  return r - proj;
}

// Canonical basis of a rational subspace: RREF rows scaled to primitive
// integer vectors with positive leading entry.
inline std::vector<QVector> canonical_subspace_basis(const std::vector<QVector>& spanning) {
  if (spanning.empty()) return {};
  QMatrix m = QMatrix::from_rows(spanning);
  auto pivots = rref(m);
  std::vector<QVector> out;
  for (std::size_t i = 0; i < pivots.size(); ++i) out.push_back(primitive(m.row(i)));
  return out;
}

struct ConeGenerators {
  std::vector<QVector> lineality;  // canonical basis, emitted as +- pairs
  std::vector<QVector> rays;       // extreme rays mod lineality, canonical

  std::vector<QVector> combined() const {
    std::vector<QVector> all;
    for (const auto& b : lineality) {
      all.push_back(b);
      all.push_back(-b);
    }
    all.insert(all.end(), rays.begin(), rays.end());
    std::sort(all.begin(), all.end());
    return all;
  }
};

inline ConeGenerators dd_generators(const std::vector<QVector>& normals, std::size_t dim) {
  DoubleDescription dd(dim);
  for (const auto& w : normals) dd.insert(w);
  ConeGenerators out;
  out.lineality = canonical_subspace_basis(dd.lin);
  std::set<QVector> rays;
  for (const auto& r : dd.rays) {
    QVector perp = project_off(r, dd.lin);
    if (perp.is_zero()) throw SemanticError("internal: ray inside lineality space");
    rays.insert(primitive(perp));
  }
  out.rays.assign(rays.begin(), rays.end());
  return out;
}

}  // namespace detail

// Extreme-ray generators of the cone cut out by the given halfspaces
// (<v,w> >= 0 for every listed normal w).  The lineality space, if any,
// appears as +- pairs of a canonical basis.  Output is primitive-integer
// scaled, deduplicated and sorted.
inline std::vector<QVector> h_to_v(const std::vector<QVector>& normals, std::size_t dim) {
  return detail::dd_generators(normals, dim).combined();
}

// Halfspace description of the cone generated by the given vectors.  By
// duality these are exactly the generators of the dual cone, so the same
// double description run answers both conversions.  A cone that is not
// full-dimensional gets opposite-pair normals cutting its spanning
// subspace.
inline std::vector<QVector> v_to_h(const std::vector<QVector>& generators, std::size_t dim) {
  std::vector<QVector> nonzero;
  for (const auto& g : generators) {
    if (g.dim() != dim) throw SemanticError("generator dimension mismatch");
    if (!g.is_zero()) nonzero.push_back(g);
  }
  return detail::dd_generators(nonzero, dim).combined();
}

class Cone {
 public:
  Cone() = default;

  static Cone from_generators(std::size_t dim, std::vector<QVector> gens) {
    std::vector<QVector> kept;
    for (auto& g : gens) {
      if (g.dim() != dim) throw SemanticError("generator dimension mismatch");
      if (!g.is_zero()) kept.push_back(std::move(g));
    }
    Cone c;
    c.dim_ = dim;
    c.gens_ = std::make_shared<const std::vector<QVector>>(std::move(kept));
    return c;
  }

  static Cone from_halfspaces(std::size_t dim, std::vector<QVector> normals) {
    std::vector<QVector> kept;
    for (auto& w : normals) {
      if (w.dim() != dim) throw SemanticError("halfspace normal dimension mismatch");
      if (!w.is_zero()) kept.push_back(std::move(w));
    }
    Cone c;
    c.dim_ = dim;
    c.half_ = std::make_shared<const std::vector<QVector>>(std::move(kept));
    return c;
  }

  // Both representations supplied; checks that they describe the same set.
  static Cone from_both(std::size_t dim, std::vector<QVector> gens, std::vector<QVector> normals);

  Cone(const Cone& o) : dim_(o.dim_) {
    gens_ = std::atomic_load(&o.gens_);
    half_ = std::atomic_load(&o.half_);
  }
  Cone& operator=(const Cone& o) {
    if (this != &o) {
      dim_ = o.dim_;
      std::atomic_store(&gens_, std::atomic_load(&o.gens_));
      std::atomic_store(&half_, std::atomic_load(&o.half_));
    }
    return *this;
  }
  Cone(Cone&&) = default;
  Cone& operator=(Cone&&) = default;

  std::size_t dim_ambient() const { return dim_; }

  bool has_generators() const { return std::atomic_load(&gens_) != nullptr; }
  bool has_halfspaces() const { return std::atomic_load(&half_) != nullptr; }

  // Lazily computed and published once; a racing duplicate computation is
  // discarded in favour of the first published value.
  const std::vector<QVector>& generators() const {
    auto g = std::atomic_load(&gens_);
    if (!g) {
      auto h = std::atomic_load(&half_);
      auto computed = std::make_shared<const std::vector<QVector>>(h_to_v(*h, dim_));
      std::shared_ptr<const std::vector<QVector>> expected;
      std::atomic_compare_exchange_strong(&gens_, &expected, computed);
      g = std::atomic_load(&gens_);
    }
    return *g;
  }

  const std::vector<QVector>& halfspaces() const {
    auto h = std::atomic_load(&half_);
    if (!h) {
      auto g = std::atomic_load(&gens_);
      auto computed = std::make_shared<const std::vector<QVector>>(v_to_h(*g, dim_));
      std::shared_ptr<const std::vector<QVector>> expected;
      std::atomic_compare_exchange_strong(&half_, &expected, computed);
      h = std::atomic_load(&half_);
    }
    return *h;
  }

 private:
  std::size_t dim_ = 0;
  mutable std::shared_ptr<const std::vector<QVector>> gens_;
  mutable std::shared_ptr<const std::vector<QVector>> half_;
};

inline bool contains(const Cone& c, const QVector& v) {
  if (v.dim() != c.dim_ambient()) throw SemanticError("contains: dimension mismatch");
  for (const auto& w : c.halfspaces())
    if (dot(v, w) < 0) return false;
  return true;
}

inline Cone Cone::from_both(std::size_t dim, std::vector<QVector> gens,
                            std::vector<QVector> normals) {
  Cone byg = Cone::from_generators(dim, std::move(gens));
  Cone byh = Cone::from_halfspaces(dim, std::move(normals));
  for (const auto& g : byg.generators())
    for (const auto& w : byh.halfspaces())
      if (dot(g, w) < 0)
        throw SemanticError("cone representations disagree: generator violates halfspace");
  for (const auto& ray : byh.generators())
    if (!contains(byg, ray))
      throw SemanticError("cone representations disagree: extreme ray outside generated cone");
  for (const auto& g : byg.generators())
    if (!contains(byh, g))
      throw SemanticError("cone representations disagree: generator outside halfspace cone");
  Cone c;
  c.dim_ = dim;
  c.gens_ = std::make_shared<const std::vector<QVector>>(byg.generators());
  c.half_ = std::make_shared<const std::vector<QVector>>(byh.halfspaces());
  return c;
}

inline Cone intersect(const Cone& a, const Cone& b) {
  if (a.dim_ambient() != b.dim_ambient()) throw SemanticError("intersect: dimension mismatch");
  std::set<QVector> merged;
  for (const auto& w : a.halfspaces()) merged.insert(primitive(w));
  for (const auto& w : b.halfspaces()) merged.insert(primitive(w));
  return Cone::from_halfspaces(a.dim_ambient(), {merged.begin(), merged.end()});
}

inline std::size_t cone_dim(const Cone& c) { return rank(c.generators()); }

// {v : B v in C} for an N x n matrix B of full column rank; each halfspace
// normal w of C pulls back to B^T w.
inline Cone pullback(const Cone& c, const QMatrix& b) {
  if (b.rows() != c.dim_ambient()) throw SemanticError("pullback: dimension mismatch");
  if (rank(b) != b.cols()) throw SemanticError("pullback: matrix not of full column rank");
  const QMatrix bt = b.transpose();
  std::vector<QVector> pulled;
  for (const auto& w : c.halfspaces()) {
    QVector u = bt * w;
    if (!u.is_zero()) pulled.push_back(std::move(u));
  }
  return Cone::from_halfspaces(b.cols(), std::move(pulled));
}

// Canonical minimal V-representation, for structural comparisons.
inline std::vector<QVector> canonical_generators(const Cone& c) {
  return h_to_v(c.halfspaces(), c.dim_ambient());
}

}  // namespace polycomm
