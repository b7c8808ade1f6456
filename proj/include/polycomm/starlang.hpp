#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polycomm/polyfun.hpp"

namespace polycomm {

struct Letter {
  std::string name;
  QVector image;  // integer vector
};

// Finite symmetric generating set of Z^N carrying an identity letter.
class Alphabet {
 public:
  Alphabet(std::size_t rank, std::vector<Letter> letters)
      : rank_(rank), letters_(std::move(letters)) {
    bool has_identity = false;
    std::set<QVector> images;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      const auto& l = letters_[i];
      if (l.image.dim() != rank_) throw SemanticError("letter image dimension mismatch");
      if (!is_integer_vector(l.image)) throw SemanticError("letter image must be integral");
      if (!by_name_.emplace(l.name, static_cast<int>(i)).second)
        throw SemanticError("duplicate letter name: " + l.name);
      if (l.image.is_zero()) has_identity = true;
      images.insert(l.image);
    }
    if (!has_identity) throw SemanticError("alphabet has no identity letter");
    for (const auto& img : images)
      if (!images.count(-img))
        throw SemanticError("alphabet is not symmetric: missing inverse of " + img.str());
  }

  std::size_t rank() const { return rank_; }
  std::size_t size() const { return letters_.size(); }
  const std::vector<Letter>& letters() const { return letters_; }
  const Letter& letter(int i) const { return letters_.at(static_cast<std::size_t>(i)); }

  int index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw SemanticError("unknown letter name: " + name);
    return it->second;
  }

 private:
  std::size_t rank_;
  std::vector<Letter> letters_;
  std::map<std::string, int> by_name_;
};

// A word is stored as letter indices into its alphabet.
struct Word {
  std::vector<int> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  friend bool operator==(const Word&, const Word&) = default;
  friend bool operator<(const Word& a, const Word& b) { return a.letters < b.letters; }
};

inline Word make_word(const Alphabet& a, const std::vector<std::string>& names) {
  Word w;
  w.letters.reserve(names.size());
  for (const auto& n : names) w.letters.push_back(a.index_of(n));
  return w;
}

inline std::vector<std::string> word_names(const Alphabet& a, const Word& w) {
  std::vector<std::string> out;
  out.reserve(w.size());
  for (int i : w.letters) out.push_back(a.letter(i).name);
  return out;
}

inline QVector word_image(const Alphabet& a, const Word& w) {
  QVector img(a.rank());
  for (int i : w.letters) img += a.letter(i).image;
  return img;
}

// U_0 V_1* U_1 ... V_alpha* U_alpha
struct StarredBranch {
  std::vector<Word> u_segments;  // alpha + 1 words
  std::vector<Word> v_segments;  // alpha nonempty words

  std::size_t stars() const { return v_segments.size(); }
};

struct StarredLanguage {
  Alphabet alphabet;
  std::vector<StarredBranch> branches;

  StarredLanguage(Alphabet a, std::vector<StarredBranch> b)
      : alphabet(std::move(a)), branches(std::move(b)) {
    if (branches.empty()) throw SemanticError("starred language needs at least one branch");
    for (const auto& br : branches) {
      if (br.u_segments.size() != br.v_segments.size() + 1)
        throw SemanticError("branch must have one more u-segment than v-segments");
      for (const auto& v : br.v_segments)
        if (v.empty()) throw SemanticError("v-segments must be nonempty");
      for (const auto& seg : br.u_segments) check_word(seg);
      for (const auto& seg : br.v_segments) check_word(seg);
    }
  }

 private:
  void check_word(const Word& w) const {
    for (int i : w.letters)
      if (i < 0 || static_cast<std::size_t>(i) >= alphabet.size())
        throw SemanticError("word refers to a letter outside the alphabet");
  }
};

struct EnumeratedWord {
  Word word;
  std::size_t branch = 0;
  std::vector<long long> exponents;
};

// All words of the language of length <= max_len, with their branch and
// star exponents.  A word produced by several branches is emitted once per
// (branch, exponent vector).
inline std::vector<EnumeratedWord> enumerate_words(const StarredLanguage& lang, long max_len) {
  if (max_len < 0) throw SemanticError("enumerate_words: negative length bound");
  std::vector<EnumeratedWord> out;
  for (std::size_t j = 0; j < lang.branches.size(); ++j) {
    const auto& br = lang.branches[j];
    long base = 0;
    for (const auto& u : br.u_segments) base += static_cast<long>(u.size());
    if (base > max_len) continue;
    std::vector<long long> exps(br.stars(), 0);
    auto emit = [&]() {
      EnumeratedWord e;
      e.branch = j;
      e.exponents = exps;
      for (std::size_t k = 0; k < br.stars(); ++k) {
        e.word.letters.insert(e.word.letters.end(), br.u_segments[k].letters.begin(),
                              br.u_segments[k].letters.end());
        for (long long b = 0; b < exps[k]; ++b)
          e.word.letters.insert(e.word.letters.end(), br.v_segments[k].letters.begin(),
                                br.v_segments[k].letters.end());
      }
      e.word.letters.insert(e.word.letters.end(), br.u_segments.back().letters.begin(),
                            br.u_segments.back().letters.end());
      out.push_back(std::move(e));
    };
    auto recurse = [&](auto&& self, std::size_t k, long budget) -> void {
      if (k == br.stars()) {
        emit();
        return;
      }
      const long step = static_cast<long>(br.v_segments[k].size());
      for (long long b = 0; b * step <= budget; ++b) {
        exps[k] = b;
        self(self, k + 1, budget - static_cast<long>(b) * step);
      }
    };
    recurse(recurse, 0, max_len - base);
  }
  return out;
}

struct IndependenceReport {
  std::vector<QVector> z_vectors;             // per star, in order
  std::vector<std::size_t> zero_image_stars;  // stars whose image is 0
  bool independent = false;                   // after deleting repetitions
};

// z_k = image(V_k) / |V_k|; the branch is certified when the distinct z's
// are linearly independent.
inline IndependenceReport independence_certificate(const Alphabet& a, const StarredBranch& br) {
  IndependenceReport rep;
  for (std::size_t k = 0; k < br.stars(); ++k) {
    const auto& v = br.v_segments[k];
    if (v.empty()) throw SemanticError("independence certificate: empty v-segment");
    QVector z = Rational(1, Int(v.size())) * word_image(a, v);
    if (z.is_zero()) rep.zero_image_stars.push_back(k);
    rep.z_vectors.push_back(std::move(z));
  }
  std::set<QVector> distinct(rep.z_vectors.begin(), rep.z_vectors.end());
  std::vector<QVector> rows(distinct.begin(), distinct.end());
  rep.independent = !rows.empty() || br.stars() == 0;
  if (!rows.empty()) rep.independent = (rank(rows) == rows.size());
  return rep;
}

namespace detail {

// A failed certificate with a *nonnegative* dependency (a zero z or a
// lineality direction in the cone over the z's) pumps infinitely many
// representatives of one element.
inline bool has_nonnegative_dependency(const std::vector<QVector>& zs, std::size_t rank_n) {
  std::vector<QVector> nonzero;
  for (const auto& z : zs) {
    if (z.is_zero()) return true;
    nonzero.push_back(z);
  }
  if (nonzero.empty()) return false;
  // The cone over the z's contains a line iff its halfspace normals do not
  // span; a line v, -v in the cone is exactly a nonnegative dependency.
  return rank(v_to_h(nonzero, rank_n)) < rank_n;
}

}  // namespace detail

struct BranchCertificate {
  std::size_t branch = 0;
  IndependenceReport report;
  bool nonneg_dependency = false;
};

struct FiniteToOneReport {
  std::vector<BranchCertificate> branches;
  bool all_independent = true;
  bool certified_not_finite_to_one = false;  // proof, not heuristic
  std::optional<std::size_t> witness_branch;
  bool all_starless = true;  // trivially finite-to-one
  // Empirical tabulation over words of length <= max_len; heuristic only.
  long long max_fiber = 0;
  std::optional<QVector> max_fiber_image;
  long long distinct_words = 0;
};

inline FiniteToOneReport finite_to_one_check(const StarredLanguage& lang, long max_len) {
  FiniteToOneReport rep;
  for (std::size_t j = 0; j < lang.branches.size(); ++j) {
    BranchCertificate c;
    c.branch = j;
    c.report = independence_certificate(lang.alphabet, lang.branches[j]);
    if (lang.branches[j].stars() > 0) rep.all_starless = false;
    if (!c.report.independent) {
      rep.all_independent = false;
      c.nonneg_dependency =
          detail::has_nonnegative_dependency(c.report.z_vectors, lang.alphabet.rank());
      if (c.nonneg_dependency && !rep.certified_not_finite_to_one) {
        rep.certified_not_finite_to_one = true;
        rep.witness_branch = j;
      }
    }
    rep.branches.push_back(std::move(c));
  }
  std::set<Word> distinct;
  for (auto& e : enumerate_words(lang, max_len)) distinct.insert(std::move(e.word));
  std::map<QVector, long long> fibers;
  for (const auto& w : distinct) {
    auto& n = fibers[word_image(lang.alphabet, w)];
    ++n;
    if (n > rep.max_fiber) {
      rep.max_fiber = n;
      rep.max_fiber_image = word_image(lang.alphabet, w);
    }
  }
  rep.distinct_words = static_cast<long long>(distinct.size());
  return rep;
}

// Word metric on Z^N with respect to the letter images, via breadth-first
// ball tables expanded on demand.
class WordMetric {
 public:
  explicit WordMetric(const Alphabet& a) {
    std::set<QVector> steps;
    for (const auto& l : a.letters())
      if (!l.image.is_zero()) steps.insert(l.image);
    steps_.assign(steps.begin(), steps.end());
    QVector zero(a.rank());
    dist_[zero] = 0;
    frontier_.push_back(std::move(zero));
  }

  std::optional<int> norm(const QVector& v, int cap = 64) {
    auto it = dist_.find(v);
    while (it == dist_.end() && radius_ < cap && !frontier_.empty()) {
      expand();
      it = dist_.find(v);
    }
    if (it == dist_.end()) return std::nullopt;
    return it->second;
  }

 private:
  void expand() {
    ++radius_;
    std::vector<QVector> next;
    for (const auto& p : frontier_)
      for (const auto& s : steps_) {
        QVector q = p + s;
        if (dist_.emplace(q, radius_).second) next.push_back(std::move(q));
      }
    frontier_ = std::move(next);
  }

  std::vector<QVector> steps_;
  std::map<QVector, int> dist_;
  std::vector<QVector> frontier_;
  int radius_ = 0;
};

struct FellowTravellerReport {
  long max_len = 0;
  int lambda_observed = 0;
  int kappa_observed = 0;
  long long pairs_checked = 0;
  bool norms_resolved = true;  // false if some distance exceeded the BFS cap
};

// Bounded-scale check of the two-sided fellow traveller property: for every
// pair of words U, V of the language with images differing by the sum of
// two letters x, y, tabulates max_t |x + V(t) - U(t)|_X and the length gap.
inline FellowTravellerReport fellow_traveller_check(const StarredLanguage& lang, long max_len,
                                                    int norm_cap = 64) {
  if (max_len < 1) throw SemanticError("fellow_traveller_check: max_len must be >= 1");
  FellowTravellerReport rep;
  rep.max_len = max_len;

  std::set<Word> distinct;
  for (auto& e : enumerate_words(lang, max_len)) distinct.insert(std::move(e.word));
  struct Entry {
    Word word;
    std::vector<QVector> prefix;  // prefix images, size |word|+1
  };
  std::vector<Entry> words;
  std::map<QVector, std::vector<std::size_t>> by_image;
  for (const auto& w : distinct) {
    Entry e;
    e.word = w;
    e.prefix.reserve(w.size() + 1);
    QVector acc(lang.alphabet.rank());
    e.prefix.push_back(acc);
    for (int i : w.letters) {
      acc += lang.alphabet.letter(i).image;
      e.prefix.push_back(acc);
    }
    by_image[acc].push_back(words.size());
    words.push_back(std::move(e));
  }

  WordMetric metric(lang.alphabet);
  std::set<QVector> letter_images;
  for (const auto& l : lang.alphabet.letters()) letter_images.insert(l.image);

  for (const auto& u : words) {
    const QVector& img_u = u.prefix.back();
    for (const auto& x : letter_images)
      for (const auto& y : letter_images) {
        auto it = by_image.find(img_u - x - y);
        if (it == by_image.end()) continue;
        for (std::size_t vi : it->second) {
          const auto& v = words[vi];
          ++rep.pairs_checked;
          rep.kappa_observed =
              std::max(rep.kappa_observed,
                       static_cast<int>(std::max(u.word.size(), v.word.size()) -
                                        std::min(u.word.size(), v.word.size())));
          const std::size_t horizon = std::max(u.word.size(), v.word.size());
          for (std::size_t t = 0; t <= horizon; ++t) {
            const QVector& ut = u.prefix[std::min(t, u.word.size())];
            const QVector& vt = v.prefix[std::min(t, v.word.size())];
            auto d = metric.norm(x + vt - ut, norm_cap);
            if (!d) {
              rep.norms_resolved = false;
              continue;
            }
            rep.lambda_observed = std::max(rep.lambda_observed, *d);
          }
        }
      }
  }
  return rep;
}

struct XiCertificate {
  Int delta = 0;        // max over branches of the total u-segment length
  Rational eta_sq = 0;  // max squared letter image norm
  Rational zeta_sq = 0; // max squared piece form norm
  Rational xi = 0;      // rational upper bound for zeta*eta*delta + delta
};

struct BuildResult {
  PolyFun fun;
  XiCertificate certificate;
};

// The polyhedral function associated to a starred language: one piece per
// starred branch, the cone spanned by the z's and the form y solving
// <z_k, y> = 1 for every k.  For alpha < N the minimum-norm solution
// y = Z^T (Z Z^T)^-1 1 is taken, which is basis-independent and minimizes
// the zeta constant.  The result is returned validated; a validation
// failure is evidence that the input is not a finite-to-one biautomatic
// structure.
inline BuildResult build_polyfun(const StarredLanguage& lang) {
  const std::size_t n = lang.alphabet.rank();
  std::vector<Piece> pieces;
  Rational zeta_sq = 0;
  for (std::size_t j = 0; j < lang.branches.size(); ++j) {
    const auto& br = lang.branches[j];
    if (br.stars() == 0) continue;
    const auto cert = independence_certificate(lang.alphabet, br);
    if (!cert.independent)
      throw CertificateError("branch " + std::to_string(j + 1) +
                             " fails the independence certificate");
    std::vector<QVector> zs;
    for (const auto& z : cert.z_vectors)
      if (std::find(zs.begin(), zs.end(), z) == zs.end()) zs.push_back(z);
    const QMatrix z = QMatrix::from_rows(zs);
    const auto gram_inv = inverse(z * z.transpose());
    if (!gram_inv) throw SemanticError("internal: inconsistent hyperplane system");
    QVector ones(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) ones[i] = 1;
    const QVector y = z.transpose() * (*gram_inv * ones);
    zeta_sq = std::max(zeta_sq, norm_sq(y));
    pieces.push_back({Cone::from_generators(n, zs), y});
  }

  XiCertificate cert;
  cert.zeta_sq = zeta_sq;
  for (const auto& br : lang.branches) {
    Int total = 0;
    for (const auto& u : br.u_segments) total += Int(u.size());
    cert.delta = std::max(cert.delta, total);
  }
  for (const auto& l : lang.alphabet.letters())
    cert.eta_sq = std::max(cert.eta_sq, norm_sq(l.image));
  const Rational delta_q(cert.delta);
  cert.xi = sqrt_upper_bound(cert.zeta_sq * cert.eta_sq) * delta_q + delta_q;

  PolyFun fun(n, std::move(pieces));
  validate(fun);

  // Starless branches contribute no piece; the certificate absorbs their
  // finitely many words instead.
  for (const auto& br : lang.branches) {
    if (br.stars() != 0) continue;
    const Word& w = br.u_segments.front();
    const Rational slack =
        abs(eval(fun, word_image(lang.alphabet, w)) - Rational(Int(w.size())));
    cert.xi = std::max(cert.xi, slack);
  }
  return {std::move(fun), std::move(cert)};
}

struct LengthBoundReport {
  bool ok = true;
  Rational worst_slack = 0;
  long long words_checked = 0;
  std::optional<EnumeratedWord> violation;
};

// Exhaustively checks f(image(U)) - xi <= |U| <= f(image(U)) + xi over all
// words of length <= max_len.
inline LengthBoundReport verify_length_bound(const StarredLanguage& lang, const PolyFun& f,
                                             const Rational& xi, long max_len) {
  LengthBoundReport rep;
  for (auto& e : enumerate_words(lang, max_len)) {
    const Rational value = eval(f, word_image(lang.alphabet, e.word));
    const Rational slack = abs(value - Rational(Int(e.word.size())));
    ++rep.words_checked;
    if (slack > rep.worst_slack) rep.worst_slack = slack;
    if (slack > xi && !rep.violation) {
      rep.ok = false;
      rep.violation = std::move(e);
    }
  }
  return rep;
}

}  // namespace polycomm
