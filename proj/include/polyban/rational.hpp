#ifndef POLYBAN_RATIONAL_HPP
#define POLYBAN_RATIONAL_HPP

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace polyban {

/// Exact rational scalar. GMP keeps values in lowest terms with a
/// positive denominator, which is exactly the canonical form all
/// serialized artifacts use.
using Rational = boost::multiprecision::mpq_rational;

using Mat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RowVec = Eigen::Matrix<Rational, 1, Eigen::Dynamic>;

/// "p/q" (or "p" when q = 1). The only textual form rationals ever take
/// in files and on the wire; host floating point is never involved.
inline std::string to_string(const Rational& r) { return r.str(); }

/// Parses "p/q" or "p". Throws std::invalid_argument on malformed input
/// or zero denominator.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  try {
    Rational r(s);
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational literal: '" + s + "'");
  }
}

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational rational_max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational rational_min(const Rational& a, const Rational& b) { return a < b ? a : b; }

/// Scalar product of a functional row and a coordinate column. Spelled out
/// so the exact scalar never hides behind a 1x1 expression type.
inline Rational inner(const RowVec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: arity mismatch");
  Rational s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

/// Lexicographic order on coordinate vectors; used wherever a canonical,
/// seed-independent ordering of generators is needed.
inline bool lex_less(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

}  // namespace polyban

#endif  // POLYBAN_RATIONAL_HPP
