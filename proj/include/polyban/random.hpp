#ifndef POLYBAN_RANDOM_HPP
#define POLYBAN_RANDOM_HPP

#include <polyban/rational.hpp>

#include <cstdint>
#include <random>

namespace polyban {

/// Deterministic rational source. All draws reduce the raw mt19937_64
/// stream (whose output is fixed by the standard) so replays are
/// bit-identical across platforms and stdlib versions.
class RationalRng {
 public:
  explicit RationalRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  /// Integer in [lo, hi].
  long long int_in(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Small rational p/q with |p| <= max_num, 1 <= q <= max_den.
  Rational small_rational(long long max_num = 3, long long max_den = 3) {
    const long long p = int_in(-max_num, max_num);
    const long long q = int_in(1, max_den);
    return Rational(p, q);
  }

  /// Small nonzero rational.
  Rational small_nonzero(long long max_num = 3, long long max_den = 3) {
    for (;;) {
      Rational r = small_rational(max_num, max_den);
      if (r != 0) return r;
    }
  }

  /// Rational strictly between 0 and 1.
  Rational unit_open() {
    const long long q = int_in(2, 8);
    const long long p = int_in(1, q - 1);
    return Rational(p, q);
  }

  Vec vector(Eigen::Index dim, long long max_num = 3, long long max_den = 3) {
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = small_rational(max_num, max_den);
    return v;
  }

  Mat matrix(Eigen::Index rows, Eigen::Index cols, long long max_num = 3,
             long long max_den = 3) {
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = small_rational(max_num, max_den);
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace polyban

#endif  // POLYBAN_RANDOM_HPP
