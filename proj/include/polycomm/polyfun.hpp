#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polycomm/cone.hpp"

namespace polycomm {

// One max-branch of a piecewise linear positively homogeneous function:
// the linear form <., form> supported on `cone`, zero outside.
struct Piece {
  Cone cone;
  QVector form;
};

enum class Validity { Unchecked, Valid, Invalid };

struct ValidationViolation {
  std::string kind;  // "structure" | "positivity" | "compatibility" | "cover"
  std::vector<std::size_t> pieces;
  std::optional<QVector> witness;
  std::string detail;
};

struct ValidationReport {
  bool positivity_ok = true;
  bool compatibility_ok = true;
  bool cover_ok = true;
  std::vector<ValidationViolation> violations;
  bool valid() const { return positivity_ok && compatibility_ok && cover_ok; }
};

class PolyFun {
 public:
  PolyFun() = default;
  PolyFun(std::size_t dim, std::vector<Piece> pieces) : dim_(dim), pieces_(std::move(pieces)) {
    for (const auto& p : pieces_) {
      if (p.cone.dim_ambient() != dim_ || p.form.dim() != dim_)
        throw SemanticError("piece dimension mismatch");
    }
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  Validity validity() const { return validity_; }
  const ValidationReport* report() const { return report_.get(); }

  void set_validation(std::shared_ptr<const ValidationReport> r) {
    report_ = std::move(r);
    validity_ = report_->valid() ? Validity::Valid : Validity::Invalid;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Piece> pieces_;
  Validity validity_ = Validity::Unchecked;
  std::shared_ptr<const ValidationReport> report_;
};

inline Rational eval(const PolyFun& f, const QVector& v) {
  if (v.dim() != f.dim()) throw SemanticError("eval: dimension mismatch");
  Rational best = 0;
  for (const auto& p : f.pieces()) {
    if (!contains(p.cone, v)) continue;
    const Rational value = dot(v, p.form);
    if (value > best) best = value;
  }
  return best;
}

namespace detail {

inline std::vector<std::size_t> full_dim_indices(const PolyFun& f) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < f.pieces().size(); ++j)
    if (cone_dim(f.pieces()[j].cone) == f.dim()) out.push_back(j);
  return out;
}

inline bool member_of_any_piece(const PolyFun& f, const QVector& v) {
  for (const auto& p : f.pieces())
    if (contains(p.cone, v)) return true;
  return false;
}

// Membership of the symbolically perturbed point p - eps*w (eps an
// infinitesimal > 0): each halfspace value is linear in eps and its sign
// is read off at 0+.
inline bool contains_perturbed(const Cone& c, const QVector& p, const QVector& w) {
  for (const auto& u : c.halfspaces()) {
    const Rational a = dot(p, u), b = dot(w, u);
    if (a > 0) continue;
    if (a == 0 && b <= 0) continue;
    return false;
  }
  return true;
}

// A concrete uncovered point once the symbolic test failed: pick one
// violated constraint per piece and stay below every sign-change threshold.
inline QVector concrete_uncovered_witness(const PolyFun& f, const QVector& p, const QVector& w) {
  Rational eps = 1;
  for (const auto& piece : f.pieces()) {
    for (const auto& u : piece.cone.halfspaces()) {
      const Rational a = dot(p, u), b = dot(w, u);
      if (a > 0 || (a == 0 && b <= 0)) continue;
      if (a < 0 && b < 0) eps = std::min(eps, Rational(a / b));
      break;
    }
  }
  return p - (eps / 2) * w;
}

// Moment-curve search for a point outside every piece; terminates because
// each escape condition fails on at most finitely many parameters.
inline QVector uncovered_point_on_curve(const PolyFun& f, const std::vector<QVector>& dirs) {
  for (Int t = 1;; ++t) {
    QVector v(f.dim());
    Rational scale = 1;
    for (const auto& d : dirs) {
      v += scale * d;
      scale *= Rational(t);
    }
    if (!v.is_zero() && !member_of_any_piece(f, v)) return v;
  }
}

inline void check_positivity(const PolyFun& f, ValidationReport& rep) {
  for (std::size_t j = 0; j < f.pieces().size(); ++j) {
    const auto& piece = f.pieces()[j];
    if (cone_dim(piece.cone) == 0) {
      rep.positivity_ok = false;
      rep.violations.push_back({"structure", {j}, std::nullopt, "zero cone is not a valid piece"});
      continue;
    }
    for (const auto& z : piece.cone.generators()) {
      if (dot(z, piece.form) <= 0) {
        rep.positivity_ok = false;
        rep.violations.push_back(
            {"positivity", {j}, z, "generator with non-positive value against the piece form"});
      }
    }
  }
}

inline void check_compatibility(const PolyFun& f, ValidationReport& rep) {
  const auto& pieces = f.pieces();
  for (std::size_t j = 0; j < pieces.size(); ++j)
    for (std::size_t k = j + 1; k < pieces.size(); ++k) {
      const Cone inter = intersect(pieces[j].cone, pieces[k].cone);
      for (const auto& g : inter.generators()) {
        if (dot(g, pieces[j].form) != dot(g, pieces[k].form)) {
          rep.compatibility_ok = false;
          rep.violations.push_back(
              {"compatibility", {j, k}, g, "forms disagree on the intersection"});
        }
      }
    }
}

// Exact cover certification.  The facet-perturbation test is sound in any
// dimension and decisive for dim <= 2; for dim >= 3 a passing run is
// confirmed by chamber enumeration over the arrangement of all facet
// hyperplanes of the full-dimensional pieces.
inline void check_cover(const PolyFun& f, ValidationReport& rep) {
  const auto full = full_dim_indices(f);
  if (f.dim() == 0) return;  // R^0 = {0} is covered vacuously
  if (full.empty()) {
    std::vector<QVector> dirs;
    for (std::size_t i = 0; i < f.dim(); ++i) {
      QVector e(f.dim());
      e[i] = 1;
      dirs.push_back(std::move(e));
    }
    rep.cover_ok = false;
    rep.violations.push_back({"cover",
                              {},
                              uncovered_point_on_curve(f, dirs),
                              "no full-dimensional piece"});
    return;
  }
  for (std::size_t j : full) {
    const auto& piece = f.pieces()[j];
    const auto& gens = piece.cone.generators();
    for (const auto& w : piece.cone.halfspaces()) {
      QVector p(f.dim());
      for (const auto& g : gens)
        if (dot(g, w) == 0) p += g;
      bool covered = false;
      for (const auto& other : f.pieces())
        if (contains_perturbed(other.cone, p, w)) {
          covered = true;
          break;
        }
      if (!covered) {
        rep.cover_ok = false;
        rep.violations.push_back({"cover",
                                  {j},
                                  concrete_uncovered_witness(f, p, w),
                                  "point just outside a facet lies in no piece"});
      }
    }
  }
  if (!rep.cover_ok || f.dim() <= 2) return;

  // Chamber fallback: every full-dimensional chamber of the facet
  // arrangement must lie inside some full-dimensional piece.
  std::set<QVector> hyperplanes;
  for (std::size_t j : full)
    for (const auto& w : f.pieces()[j].cone.halfspaces()) {
      QVector h = primitive(w);
      std::size_t lead = 0;
      while (lead < h.dim() && h[lead] == 0) ++lead;
      if (lead < h.dim() && h[lead] < 0) h = -h;
      hyperplanes.insert(std::move(h));
    }
  const std::vector<QVector> hyps(hyperplanes.begin(), hyperplanes.end());
  std::vector<QVector> signed_normals;
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (!rep.cover_ok) return;
    Cone chamber = Cone::from_halfspaces(f.dim(), signed_normals);
    if (cone_dim(chamber) < f.dim()) return;
    if (i == hyps.size()) {
      const auto chamber_gens = chamber.generators();
      for (std::size_t j : full) {
        bool inside = true;
        for (const auto& g : chamber_gens)
          if (!contains(f.pieces()[j].cone, g)) {
            inside = false;
            break;
          }
        if (inside) return;
      }
      rep.cover_ok = false;
      std::vector<QVector> dirs(chamber_gens.begin(), chamber_gens.end());
      rep.violations.push_back({"cover",
                                {},
                                uncovered_point_on_curve(f, dirs),
                                "uncovered chamber of the facet arrangement"});
      return;
    }
    for (int sign : {+1, -1}) {
      signed_normals.push_back(sign > 0 ? hyps[i] : -hyps[i]);
      self(self, i + 1);
      signed_normals.pop_back();
    }
  };
  recurse(recurse, 0);
}

}  // namespace detail

inline ValidationReport validate_report(const PolyFun& f) {
  ValidationReport rep;
  detail::check_positivity(f, rep);
  detail::check_compatibility(f, rep);
  detail::check_cover(f, rep);
  return rep;
}

// Runs all three certificates and caches the report on the function.
inline const ValidationReport& validate(PolyFun& f) {
  if (f.validity() == Validity::Unchecked)
    f.set_validation(std::make_shared<const ValidationReport>(validate_report(f)));
  return *f.report();
}

namespace detail {

inline void ensure_valid(const PolyFun& f, const char* op) {
  switch (f.validity()) {
    case Validity::Valid:
      return;
    case Validity::Invalid:
      throw SemanticError(std::string(op) + ": polyhedral function is invalid");
    case Validity::Unchecked:
      if (!validate_report(f).valid())
        throw SemanticError(std::string(op) + ": polyhedral function is invalid");
      return;
  }
}

}  // namespace detail

// Restriction along a full-column-rank matrix: pieces pull back, forms map
// by the transpose.  Pieces collapsing to the zero cone are dropped, and so
// are exact duplicates (distinct pieces may pull back to the same cone and
// form).  The result satisfies eval(restrict(f,B), v) == eval(f, B v) and
// is returned already validated.
inline PolyFun restrict(const PolyFun& f, const QMatrix& b) {
  if (b.rows() != f.dim()) throw SemanticError("restrict: dimension mismatch");
  if (rank(b) != b.cols()) throw SemanticError("restrict: matrix not of full column rank");
  const QMatrix bt = b.transpose();
  std::vector<Piece> pieces;
  std::set<std::pair<std::vector<QVector>, QVector>> seen;
  for (const auto& p : f.pieces()) {
    Cone pulled = pullback(p.cone, b);
    if (cone_dim(pulled) == 0) continue;
    QVector form = bt * p.form;
    if (!seen.insert({canonical_generators(pulled), form}).second) continue;
    pieces.push_back({std::move(pulled), std::move(form)});
  }
  PolyFun g(b.cols(), std::move(pieces));
  validate(g);
  return g;
}

// The forms of the full-dimensional pieces; each normal y encodes the
// affine hyperplane <v,y> = 1 met by the level set f^-1(1).
struct HyperplaneSet {
  std::vector<QVector> normals;
};

inline HyperplaneSet invariant_hyperplanes(const PolyFun& f) {
  detail::ensure_valid(f, "invariant_hyperplanes");
  std::set<QVector> seen;
  for (std::size_t j : detail::full_dim_indices(f)) seen.insert(f.pieces()[j].form);
  HyperplaneSet out{{seen.begin(), seen.end()}};
  if (rank(out.normals) != f.dim())
    throw SemanticError("invariant_hyperplanes: normals do not span the space");
  return out;
}

// Decides f(Av) == f(v) for all v, by refining over ordered pairs of
// full-dimensional pieces: wherever C_j and A^-1(C_k) overlap with full
// dimension the two linear forms must agree, i.e. A^T y_k == y_j.  The
// full-dimensional refinement cells are dense, so this is exact.
inline bool is_invariant(const PolyFun& f, const QMatrix& a) {
  detail::ensure_valid(f, "is_invariant");
  if (!a.is_square() || a.rows() != f.dim()) throw SemanticError("is_invariant: bad matrix shape");
  if (det(a) == 0) throw SemanticError("is_invariant: singular matrix");
  const QMatrix at = a.transpose();
  const auto full = detail::full_dim_indices(f);
  std::vector<std::pair<std::size_t, Cone>> pulled;
  for (std::size_t k : full) pulled.emplace_back(k, pullback(f.pieces()[k].cone, a));
  for (std::size_t j : full)
    for (const auto& [k, pk] : pulled) {
      if (at * f.pieces()[k].form == f.pieces()[j].form) continue;
      if (cone_dim(intersect(f.pieces()[j].cone, pk)) == f.dim()) return false;
    }
  return true;
}

// The full finite group {A : f o A == f}.  Any symmetry permutes the
// invariant hyperplanes with A^-T y_j = y_sigma(j), and since the normals
// span, the matrix is determined by the images of a basis; candidates are
// enumerated over those images and filtered by is_invariant.
inline std::vector<QMatrix> symmetry_group(const PolyFun& f) {
  detail::ensure_valid(f, "symmetry_group");
  const std::size_t n = f.dim();
  const auto normals = invariant_hyperplanes(f).normals;
  const std::size_t s = normals.size();

  std::vector<std::size_t> base;
  std::vector<QVector> base_vecs;
  for (std::size_t j = 0; j < s && base.size() < n; ++j) {
    base_vecs.push_back(normals[j]);
    if (rank(base_vecs) == base.size() + 1) base.push_back(j);
    else base_vecs.pop_back();
  }
  QMatrix yb(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r) yb(r, i) = normals[base[i]][r];
  const QMatrix yb_inv = *inverse(yb);

  std::map<QVector, std::size_t> index;
  for (std::size_t j = 0; j < s; ++j) index[normals[j]] = j;

  std::set<QMatrix> group;
  std::vector<std::size_t> image(n);
  auto try_assignment = [&]() {
    QMatrix yt(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t r = 0; r < n; ++r) yt(r, i) = normals[image[i]][r];
    const QMatrix w = yt * yb_inv;  // candidate A^-T
    auto w_inv = inverse(w);
    if (!w_inv) return;
    std::vector<bool> used(s, false);
    for (std::size_t j = 0; j < s; ++j) {
      auto it = index.find(w * normals[j]);
      if (it == index.end() || used[it->second]) return;
      used[it->second] = true;
    }
    const QMatrix a = w_inv->transpose();
    if (is_invariant(f, a)) group.insert(a);
  };
  auto enumerate = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      try_assignment();
      return;
    }
    for (std::size_t t = 0; t < s; ++t) {
      bool dup = false;
      for (std::size_t r = 0; r < i; ++r)
        if (image[r] == t) dup = true;
      if (dup) continue;
      image[i] = t;
      self(self, i + 1);
    }
  };
  enumerate(enumerate, 0);
  return {group.begin(), group.end()};
}

// Vertices of the closed polygon f^-1(c) in dimension 2, ordered
// counterclockwise starting from the positive x-axis.
inline std::vector<QVector> level_set_polyline(const PolyFun& f, const Rational& c) {
  detail::ensure_valid(f, "level_set_polyline");
  if (f.dim() != 2) throw SemanticError("level_set_polyline: only dimension 2 is supported");
  if (c <= 0) throw SemanticError("level_set_polyline: level must be positive");
  std::set<QVector> vertices;
  for (std::size_t j : detail::full_dim_indices(f)) {
    const auto& piece = f.pieces()[j];
    for (const auto& z : canonical_generators(piece.cone)) {
      const Rational t = dot(z, piece.form);
      if (t <= 0) throw SemanticError("level_set_polyline: non-positive boundary value");
      vertices.insert((c / t) * z);
    }
  }
  std::vector<QVector> out(vertices.begin(), vertices.end());
  auto angle_class = [](const QVector& v) {
    return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1;
  };
  std::sort(out.begin(), out.end(), [&](const QVector& a, const QVector& b) {
    const int ha = angle_class(a), hb = angle_class(b);
    if (ha != hb) return ha < hb;
    return a[0] * b[1] - a[1] * b[0] > 0;
  });
  return out;
}

}  // namespace polycomm
