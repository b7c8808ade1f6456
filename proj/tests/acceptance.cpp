// Acceptance suite: reproduces the library's golden examples and property
// guarantees end to end, one line of output per criterion.  Exits nonzero
// if any criterion fails.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <vector>

#include "fixtures.hpp"

using namespace polycomm;
using fixtures::q;
using fixtures::vec2;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << number << ": " << name;
  if (!detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << std::endl;
  if (!ok) ++failures;
}

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

const std::string kData = POLYCOMM_DATA_DIR;

// ---------------------------------------------------------------------------
// 1. The bundled language builds exactly the six published pieces.
void criterion_1() {
  const StarredLanguage lang = language_from_json(load(kData + "/example44.json"));
  const BuildResult built = build_polyfun(lang);
  const PolyFun expected = fixtures::example_polyfun();
  bool ok = built.fun.validity() == Validity::Valid && built.fun.pieces().size() == 6;
  if (ok)
    for (std::size_t j = 0; j < 6; ++j) {
      ok = ok && built.fun.pieces()[j].cone.generators() == expected.pieces()[j].cone.generators();
      ok = ok && built.fun.pieces()[j].form == expected.pieces()[j].form;
    }
  report(1, "language reconstruction yields the six published pieces exactly", ok);
}

// ---------------------------------------------------------------------------
// 2. The level set at 6 is the published pentagon (as a cyclic polygon).
bool cyclic_equal(const std::vector<QVector>& a, std::vector<QVector> b) {
  if (a.size() != b.size() || a.empty()) return a.size() == b.size();
  for (int orientation = 0; orientation < 2; ++orientation) {
    for (std::size_t shift = 0; shift < b.size(); ++shift) {
      bool match = true;
      for (std::size_t i = 0; i < a.size() && match; ++i)
        match = a[i] == b[(shift + i) % b.size()];
      if (match) return true;
    }
    std::reverse(b.begin(), b.end());
  }
  return false;
}

void criterion_2() {
  PolyFun f = polyfun_from_json(load(kData + "/example27.json"));
  validate(f);
  const auto polygon = level_set_polyline(f, q(6));
  const std::vector<QVector> published{vec2(q(0), q(3)), vec2(q(3, 2), q(3)),
                                       vec2(q(3, 2), q(0)), vec2(q(0), q(-3)),
                                       vec2(q(-3), q(0))};
  report(2, "level set at 6 matches the published pentagon exactly",
         cyclic_equal(polygon, published));
}

// ---------------------------------------------------------------------------
// 3. The length bound holds exhaustively for words of length <= 30.
void criterion_3() {
  const StarredLanguage lang = language_from_json(load(kData + "/example44.json"));
  const BuildResult built = build_polyfun(lang);
  const bool xi_small = built.certificate.xi <= q(11, 2);
  const auto rep = verify_length_bound(lang, built.fun, built.certificate.xi, 30);
  report(3, "two-sided length bound holds for all words of length <= 30",
         xi_small && rep.ok,
         "xi = " + to_string(built.certificate.xi) + ", worst slack = " +
             to_string(rep.worst_slack) + ", words = " + std::to_string(rep.words_checked));
}

// ---------------------------------------------------------------------------
// 4. Restriction to the diagonal gives 4|v|; symmetry groups have orders 1, 2.
void criterion_4() {
  PolyFun f = polyfun_from_json(load(kData + "/example27.json"));
  validate(f);
  QMatrix diag(2, 1);
  diag(0, 0) = 1;
  diag(1, 0) = 1;
  const PolyFun g = restrict(f, diag);
  std::set<std::pair<std::vector<QVector>, QVector>> got, want;
  for (const auto& p : g.pieces()) got.insert({canonical_generators(p.cone), p.form});
  want.insert({{QVector{q(1)}}, QVector{q(4)}});
  want.insert({{QVector{q(-1)}}, QVector{q(-4)}});
  bool ok = g.validity() == Validity::Valid && got == want;
  ok = ok && eval(g, QVector{q(1)}) == q(4) && eval(g, QVector{q(-5, 3)}) == q(20, 3);

  const auto sym_f = symmetry_group(f);
  ok = ok && sym_f == std::vector<QMatrix>{QMatrix::identity(2)};
  const auto sym_g = symmetry_group(g);
  ok = ok && std::set<QMatrix>(sym_g.begin(), sym_g.end()) ==
                 std::set<QMatrix>{QMatrix{{q(1)}}, QMatrix{{q(-1)}}};
  report(4, "diagonal restriction is 4|v|; symmetry groups have orders 1 and 2", ok);
}

// ---------------------------------------------------------------------------
// 5. Classifier dichotomy on the named groups plus 1000 random matrices.
void criterion_5() {
  const json bs = load(kData + "/bs23.json");
  const Classification cb =
      classify(make_lm_group(qmatrix_from_json(bs.at("A")), lattice_from_json(bs.at("L"))));
  bool ok = !cb.cat0 && !cb.biautomatic && !cb.embeddable;

  const json rotj = load(kData + "/lm_rotation.json");
  const Classification cr = classify(make_lm_group(qmatrix_from_json(rotj.at("A"))));
  ok = ok && cr.cat0 && !cr.biautomatic && !cr.embeddable && cr.l_index == 5;

  const Classification cs = classify(make_lm_group(QMatrix{{q(0), q(1)}, {q(1), q(0)}}));
  ok = ok && cs.cat0 && cs.biautomatic && cs.embeddable && cs.order == Int(2);

  std::mt19937 rng(101);
  for (int t = 0; t < 1000 && ok; ++t) {
    const Classification c = classify(make_lm_group(fixtures::random_invertible(rng, 2)));
    ok = c.biautomatic == c.embeddable;
  }
  report(5, "classifier reproduces the named groups; biautomatic == embeddable on 1000 randoms",
         ok);
}

// ---------------------------------------------------------------------------
// 6. Cone duality round trips on 500 random cones; membership matches the
//    Caratheodory oracle in dims <= 3.
void criterion_6() {
  std::mt19937 rng(103);
  bool ok = true;
  int oracle_checks = 0;
  for (int t = 0; t < 500 && ok; ++t) {
    const std::size_t dim = 2 + t % 3;
    std::uniform_int_distribution<int> count(1, 6);
    std::vector<QVector> gens;
    for (int i = count(rng); i > 0; --i) {
      QVector g = fixtures::random_integer_vector(rng, dim, 4);
      if (!g.is_zero()) gens.push_back(std::move(g));
    }
    const auto normals = v_to_h(gens, dim);
    const auto recovered = h_to_v(normals, dim);
    Cone original = Cone::from_generators(dim, gens);
    Cone rebuilt = Cone::from_generators(dim, recovered);
    for (const auto& r : recovered) ok = ok && contains(original, r);
    for (const auto& g : gens) ok = ok && contains(rebuilt, g);
    if (dim <= 3 && t % 5 == 0) {
      for (int s = 0; s < 4 && ok; ++s) {
        const QVector v = fixtures::random_integer_vector(rng, dim, 5);
        ok = contains(original, v) == fixtures::cone_member_oracle(gens, v, dim);
        ++oracle_checks;
      }
    }
  }
  report(6, "dual conversion round trips on 500 random cones (dims 2-4)", ok,
         "LP-oracle membership checks: " + std::to_string(oracle_checks));
}

// ---------------------------------------------------------------------------
// 7. Symmetry groups of 50 random valid planar functions are groups, and
//    is_invariant rejects 100 random non-members each.
void criterion_7() {
  std::mt19937 rng(107);
  bool ok = true;
  for (int t = 0; t < 50 && ok; ++t) {
    PolyFun f = fixtures::random_valid_polyfun(rng, 3);
    validate(f);
    ok = f.validity() == Validity::Valid;
    if (!ok) break;
    const auto group = symmetry_group(f);
    const std::set<QMatrix> members(group.begin(), group.end());
    ok = members.count(QMatrix::identity(2)) == 1;
    for (const auto& a : group) {
      ok = ok && is_invariant(f, a) && members.count(*inverse(a)) == 1;
      for (const auto& b : group) ok = ok && members.count(a * b) == 1;
    }
    for (int s = 0; s < 100 && ok; ++s) {
      const QMatrix m = fixtures::random_invertible(rng, 2, 3, 2);
      if (members.count(m)) continue;
      ok = !is_invariant(f, m);
    }
  }
  report(7, "symmetry groups of 50 random valid functions close; non-members rejected", ok);
}

// ---------------------------------------------------------------------------
// 8. Order / orthogonalizability cross-checks on random 2x2 and 3x3
//    matrices, with constructed finite-order samples mixed in.
void criterion_8() {
  std::mt19937 rng(109);
  bool ok = true;
  int finite_seen = 0;
  const std::vector<QMatrix> seeds2{QMatrix{{q(0), q(-1)}, {q(1), q(0)}},
                                    QMatrix{{q(0), q(1)}, {q(1), q(0)}},
                                    QMatrix{{q(0), q(-1)}, {q(1), q(-1)}}};
  const std::vector<QMatrix> seeds3{
      QMatrix{{q(0), q(1), q(0)}, {q(0), q(0), q(1)}, {q(1), q(0), q(0)}},
      QMatrix{{q(-1), q(0), q(0)}, {q(0), q(0), q(-1)}, {q(0), q(1), q(0)}}};
  for (int t = 0; t < 2000 && ok; ++t) {
    const std::size_t n = (t < 1000) ? 2 : 3;
    QMatrix a(n, n);
    if (t % 20 == 0) {
      const QMatrix u = fixtures::random_unimodular(rng, n);
      const auto& seeds = (n == 2) ? seeds2 : seeds3;
      a = u * seeds[t % seeds.size()] * *inverse(u);
    } else {
      a = fixtures::random_invertible(rng, n, 5, 4);
    }
    const auto order = matrix_order(a);
    if (order) {
      ++finite_seen;
      ok = ok && matrix_power(a, order->convert_to<unsigned long>()) == QMatrix::identity(n);
      ok = ok && is_orthogonalizable(a);
    }
    if (abs(det(a)) != 1) ok = ok && !order;
  }
  report(8, "finite order implies A^k = I and orthogonalizability; |det| != 1 implies infinite",
         ok && finite_seen >= 100, "finite-order samples: " + std::to_string(finite_seen));
}

// ---------------------------------------------------------------------------
// 9. domain_lattice index equals brute-force residue enumeration for 200
//    random matrices with denominators <= 6.
void criterion_9() {
  std::mt19937 rng(113);
  bool ok = true;
  for (int t = 0; t < 200 && ok; ++t) {
    const QMatrix a = fixtures::random_invertible(rng, 2, 6, 6);
    auto [lat, idx] = domain_lattice(a);
    Int qq = 1;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) qq = lcm_int(qq, den(a(i, j)));
    const long long m = qq.convert_to<long long>();
    long long b[2][2];
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        b[i][j] = (num(a(i, j)) * (qq / den(a(i, j)))).convert_to<long long>();
    long long solutions = 0;
    for (long long x = 0; x < m; ++x)
      for (long long y = 0; y < m; ++y)
        if ((b[0][0] * x + b[0][1] * y) % m == 0 && (b[1][0] * x + b[1][1] * y) % m == 0)
          ++solutions;
    ok = Int(m) * Int(m) == idx * Int(solutions);
    for (const auto& row : lat.basis) ok = ok && is_integer_vector(a * row);
  }
  report(9, "domain lattice index matches residue enumeration on 200 random matrices", ok);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
  } catch (const std::exception& e) {
    std::cout << "FAIL  unexpected exception: " << e.what() << std::endl;
    ++failures;
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << " ("
            << ms << " ms)" << std::endl;
  return failures == 0 ? 0 : 1;
}
