#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace polycomm {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Error categories used across the library.  ParseError covers malformed
// textual input, SemanticError covers structurally well-formed input that
// violates a contract (singular matrix where invertible is required, a
// lattice that is not a sublattice, ...), CertificateError covers inputs
// whose mathematical certificates fail (e.g. a dependent starred branch).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SemanticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CertificateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

inline Int to_int(const Rational& r) {
  if (!is_integer(r)) throw SemanticError("expected an integer, got " + r.str());
  return num(r);
}

// Accepts "p" or "p/q" with optional leading '-' on either part.
inline Rational parse_rational(const std::string& s) {
  auto bad = [&] { return ParseError("cannot parse rational: '" + s + "'"); };
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw bad();
  try {
    auto slash = t.find('/');
    if (slash == std::string::npos) return Rational(Int(t));
    Int p(t.substr(0, slash));
    Int q(t.substr(slash + 1));
    if (q == 0) throw bad();
    return Rational(p, q);
  } catch (const std::exception&) {
    throw bad();
  }
}

inline std::string to_string(const Rational& r) { return r.str(); }

// Smallest s >= 0 with s*s >= x.
inline Int isqrt_ceil(const Int& x) {
  if (x <= 0) return 0;
  Int s = boost::multiprecision::sqrt(x);  // floor
  if (s * s < x) ++s;
  return s;
}

// A rational upper bound for sqrt(x), tight to within 1/scale.
// sqrt(p/q) = sqrt(p*q)/q <= ceil(sqrt(p*q*scale^2)) / (q*scale).
inline Rational sqrt_upper_bound(const Rational& x, const Int& scale = 64) {
  if (x < 0) throw SemanticError("sqrt_upper_bound of negative value");
  const Int p = num(x), q = den(x);
  return Rational(isqrt_ceil(p * q * scale * scale), q * scale);
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;  // truncates toward zero
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int lcm_int(const Int& a, const Int& b) {
  using boost::multiprecision::gcd;
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

}  // namespace polycomm
