#pragma once

#include "json.hpp"  // vendored nlohmann/json

#include <string>
#include <vector>

#include "polycomm/lmcomm.hpp"
#include "polycomm/starlang.hpp"

namespace polycomm {

using json = nlohmann::json;

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(Int(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ParseError("expected a rational as integer or \"p/q\" string, got " + j.dump());
}

inline json rational_to_json(const Rational& r) { return json(to_string(r)); }

inline json int_to_json(const Int& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return json(static_cast<long long>(v));
  return json(v.str());
}

inline QVector qvector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals, got " + j.dump());
  std::vector<Rational> entries;
  entries.reserve(j.size());
  for (const auto& x : j) entries.push_back(rational_from_json(x));
  return QVector(std::move(entries));
}

inline json qvector_to_json(const QVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(rational_to_json(x));
  return out;
}

inline std::vector<QVector> qvector_list_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of vectors, got " + j.dump());
  std::vector<QVector> out;
  out.reserve(j.size());
  for (const auto& row : j) out.push_back(qvector_from_json(row));
  return out;
}

inline json qvector_list_to_json(const std::vector<QVector>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(qvector_to_json(v));
  return out;
}

inline QMatrix qmatrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows"))
    throw ParseError("expected a matrix object {\"rows\": [[...]]}");
  return QMatrix::from_rows(qvector_list_from_json(j.at("rows")));
}

inline json qmatrix_to_json(const QMatrix& m) {
  return json{{"rows", qvector_list_to_json(m.row_vectors())}};
}

inline Lattice lattice_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("basis"))
    throw ParseError("expected a lattice object {\"ambient_dim\": n, \"basis\": [[...]]}");
  const std::size_t n = j.at("ambient_dim").get<std::size_t>();
  return hnf(qvector_list_from_json(j.at("basis")), n);
}

inline json lattice_to_json(const Lattice& l) {
  return json{{"ambient_dim", l.ambient_dim}, {"basis", qvector_list_to_json(l.basis)}};
}

inline Cone cone_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("generators"))
    throw ParseError("expected a cone object {\"dim\": n, \"generators\": [[...]]}");
  const std::size_t n = j.at("dim").get<std::size_t>();
  auto gens = qvector_list_from_json(j.at("generators"));
  if (j.contains("halfspaces"))
    return Cone::from_both(n, std::move(gens), qvector_list_from_json(j.at("halfspaces")));
  return Cone::from_generators(n, std::move(gens));
}

inline json cone_to_json(const Cone& c) {
  json out{{"dim", c.dim_ambient()}, {"generators", qvector_list_to_json(c.generators())}};
  if (c.has_halfspaces()) out["halfspaces"] = qvector_list_to_json(c.halfspaces());
  return out;
}

inline PolyFun polyfun_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("pieces"))
    throw ParseError("expected a polyhedral function {\"dim\": n, \"pieces\": [...]}");
  const std::size_t n = j.at("dim").get<std::size_t>();
  std::vector<Piece> pieces;
  for (const auto& pj : j.at("pieces")) {
    if (!pj.contains("generators") || !pj.contains("y"))
      throw ParseError("piece needs \"generators\" and \"y\"");
    pieces.push_back({Cone::from_generators(n, qvector_list_from_json(pj.at("generators"))),
                      qvector_from_json(pj.at("y"))});
  }
  return PolyFun(n, std::move(pieces));
}

inline json polyfun_to_json(const PolyFun& f) {
  json pieces = json::array();
  for (const auto& p : f.pieces())
    pieces.push_back(
        {{"generators", qvector_list_to_json(p.cone.generators())}, {"y", qvector_to_json(p.form)}});
  return json{{"dim", f.dim()}, {"pieces", std::move(pieces)}};
}

inline json validation_report_to_json(const ValidationReport& rep) {
  json violations = json::array();
  for (const auto& v : rep.violations) {
    json item{{"kind", v.kind}, {"pieces", v.pieces}, {"detail", v.detail}};
    if (v.witness) item["witness"] = qvector_to_json(*v.witness);
    violations.push_back(std::move(item));
  }
  return json{{"valid", rep.valid()},
              {"positivity_ok", rep.positivity_ok},
              {"compatibility_ok", rep.compatibility_ok},
              {"cover_ok", rep.cover_ok},
              {"violations", std::move(violations)}};
}

inline StarredLanguage language_from_json(const json& j) {
  if (!j.is_object() || !j.contains("N") || !j.contains("alphabet") || !j.contains("branches"))
    throw ParseError("expected a language {\"N\": n, \"alphabet\": [...], \"branches\": [...]}");
  const std::size_t n = j.at("N").get<std::size_t>();
  std::vector<Letter> letters;
  for (const auto& lj : j.at("alphabet")) {
    if (!lj.contains("name") || !lj.contains("image"))
      throw ParseError("letter needs \"name\" and \"image\"");
    letters.push_back({lj.at("name").get<std::string>(), qvector_from_json(lj.at("image"))});
  }
  Alphabet alphabet(n, std::move(letters));
  auto read_word = [&](const json& wj) {
    if (!wj.is_array()) throw ParseError("a word is an array of letter names");
    std::vector<std::string> names;
    for (const auto& s : wj) names.push_back(s.get<std::string>());
    return make_word(alphabet, names);
  };
  std::vector<StarredBranch> branches;
  for (const auto& bj : j.at("branches")) {
    if (!bj.contains("u") || !bj.contains("v")) throw ParseError("branch needs \"u\" and \"v\"");
    StarredBranch br;
    for (const auto& wj : bj.at("u")) br.u_segments.push_back(read_word(wj));
    for (const auto& wj : bj.at("v")) br.v_segments.push_back(read_word(wj));
    branches.push_back(std::move(br));
  }
  return StarredLanguage(std::move(alphabet), std::move(branches));
}

inline json language_to_json(const StarredLanguage& lang) {
  json alphabet = json::array();
  for (const auto& l : lang.alphabet.letters())
    alphabet.push_back({{"name", l.name}, {"image", qvector_to_json(l.image)}});
  json branches = json::array();
  for (const auto& br : lang.branches) {
    json u = json::array(), v = json::array();
    for (const auto& w : br.u_segments) u.push_back(word_names(lang.alphabet, w));
    for (const auto& w : br.v_segments) v.push_back(word_names(lang.alphabet, w));
    branches.push_back({{"u", std::move(u)}, {"v", std::move(v)}});
  }
  return json{{"N", lang.alphabet.rank()}, {"alphabet", std::move(alphabet)},
              {"branches", std::move(branches)}};
}

inline json xi_certificate_to_json(const XiCertificate& c) {
  return json{{"delta", int_to_json(c.delta)},
              {"eta_sq", rational_to_json(c.eta_sq)},
              {"zeta_sq", rational_to_json(c.zeta_sq)},
              {"xi", rational_to_json(c.xi)}};
}

inline json polynomial_to_json(const QPolynomial& p) {
  json coeffs = json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(rational_to_json(c));
  return coeffs;
}

inline json classification_to_json(const Classification& c) {
  json order = c.order ? int_to_json(*c.order) : json("infinite");
  json certificates{
      {"minimal_polynomial", polynomial_to_json(c.order_certificate.minimal_poly)},
      {"minimal_polynomial_pretty", c.order_certificate.minimal_poly.str()},
      {"squarefree", c.order_certificate.squarefree},
      {"cyclotomic_indices", c.order_certificate.cyclotomic_indices},
      {"roots_on_unit_circle", c.circle_certificate.roots_on_circle},
      {"minimal_polynomial_degree", c.order_certificate.minimal_poly.degree()},
      {"classification_depends_only_on_A", true}};
  return json{{"order", std::move(order)},
              {"cat0", c.cat0},
              {"biautomatic", c.biautomatic},
              {"embeddable", c.embeddable},
              {"l_index", int_to_json(c.l_index)},
              {"certificates", std::move(certificates)}};
}

inline json word_to_json(const Alphabet& a, const Word& w) {
  json out = json::array();
  for (const auto& name : word_names(a, w)) out.push_back(name);
  return out;
}

inline json finite_to_one_report_to_json(const StarredLanguage& lang, const FiniteToOneReport& r) {
  json branches = json::array();
  for (const auto& b : r.branches) {
    json zj = json::array();
    for (const auto& z : b.report.z_vectors) zj.push_back(qvector_to_json(z));
    branches.push_back({{"branch", b.branch},
                        {"independent", b.report.independent},
                        {"z_vectors", std::move(zj)},
                        {"zero_image_stars", b.report.zero_image_stars},
                        {"nonnegative_dependency", b.nonneg_dependency}});
  }
  json out{{"branches", std::move(branches)},
           {"all_independent", r.all_independent},
           {"certified_not_finite_to_one", r.certified_not_finite_to_one},
           {"all_starless", r.all_starless},
           {"empirical", json{{"max_fiber", r.max_fiber}, {"distinct_words", r.distinct_words},
                              {"heuristic", true}}}};
  if (r.witness_branch) out["witness_branch"] = *r.witness_branch;
  if (r.max_fiber_image) out["empirical"]["max_fiber_image"] = qvector_to_json(*r.max_fiber_image);
  (void)lang;
  return out;
}

inline json fellow_traveller_report_to_json(const FellowTravellerReport& r) {
  return json{{"max_len", r.max_len},
              {"lambda_observed", r.lambda_observed},
              {"kappa_observed", r.kappa_observed},
              {"pairs_checked", r.pairs_checked},
              {"norms_resolved", r.norms_resolved},
              {"heuristic", true}};
}

inline json length_bound_report_to_json(const StarredLanguage& lang, const LengthBoundReport& r) {
  json out{{"ok", r.ok},
           {"worst_slack", rational_to_json(r.worst_slack)},
           {"words_checked", r.words_checked}};
  if (r.violation) {
    out["violation"] = json{{"word", word_to_json(lang.alphabet, r.violation->word)},
                            {"branch", r.violation->branch},
                            {"exponents", r.violation->exponents}};
  }
  return out;
}

}  // namespace polycomm
