// Test-only brute-force oracles. Everything here is deliberately naive and
// independent of the library's algorithms; expected values in the test
// suites are frozen against these.
#ifndef POLYBAN_TESTS_ORACLES_HPP
#define POLYBAN_TESTS_ORACLES_HPP

#include <polyban/geometry.hpp>
#include <polyban/linalg.hpp>

#include <algorithm>
#include <functional>
#include <vector>

namespace polyban::oracles {

// All vertices of {x : |phi(x)| <= 1} by solving every d-subset of the
// one-sided constraint system and keeping feasible, unique solutions.
inline std::vector<Vec> brute_force_vertices(const HRep& h) {
  const int d = h.dim;
  std::vector<RowVec> sides;
  for (const auto& f : h.functionals) {
    sides.push_back(f);
    sides.push_back(-f);
  }
  const int m = static_cast<int>(sides.size());
  std::vector<Vec> out;
  std::vector<int> idx(static_cast<size_t>(d));
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == d) {
      Mat a(d, d);
      Vec b = Vec::Ones(d);
      for (int r = 0; r < d; ++r) a.row(r) = sides[static_cast<size_t>(idx[static_cast<size_t>(r)])];
      if (rank_of(a) != d) return;
      Vec x = inverse_of(a) * b;
      if (hrep_contains(h, x)) out.push_back(x);
      return;
    }
    for (int i = start; i < m; ++i) {
      idx[static_cast<size_t>(k)] = i;
      rec(i + 1, k + 1);
    }
  };
  if (d == 0) return out;
  rec(0, 0);
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Facets of conv(points) in dimension 2 by brute force over point pairs:
// a segment supports a facet iff all points lie weakly on one side and
// the segment is not through the origin-degenerate.
inline std::vector<RowVec> brute_force_facets_2d(const std::vector<Vec>& pts) {
  std::vector<RowVec> facets;
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const Vec& p = pts[i];
      const Vec& q = pts[j];
      RowVec n(2);
      n(0) = q(1) - p(1);
      n(1) = p(0) - q(0);
      const Rational c = inner(n, p);
      if (c == 0) continue;  // line through origin cannot support a symmetric ball facet
      RowVec f = n / c;      // f.x = 1 on the segment
      bool support = true;
      for (const auto& r : pts) {
        if (inner(f, r) > 1) {
          support = false;
          break;
        }
      }
      if (support) {
        // canonical sign: first nonzero positive
        RowVec g = f;
        for (Eigen::Index t = 0; t < g.size(); ++t) {
          if (g(t) != 0) {
            if (g(t) < 0) g = -g;
            break;
          }
        }
        facets.push_back(g);
      }
    }
  }
  std::sort(facets.begin(), facets.end(), [](const RowVec& a, const RowVec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a(i) != b(i)) return a(i) < b(i);
    return false;
  });
  facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
  return facets;
}

// Exact minimum over t of sum_k max_i |a_i[k] + b_i[k] t| (each block a
// polyhedral norm of an affine path). Convex piecewise linear in t, so the
// minimum sits at a crossing of two of the affine pieces; brute-force all
// candidate crossings and evaluate.
struct AffineBlock {
  std::vector<Rational> a;
  std::vector<Rational> b;
  Rational weight = 1;
};

inline Rational pl_min_1d(const std::vector<AffineBlock>& blocks) {
  auto eval = [&](const Rational& t) {
    Rational total = 0;
    for (const auto& blk : blocks) {
      Rational m = 0;
      for (size_t i = 0; i < blk.a.size(); ++i) {
        Rational v = blk.a[i] + blk.b[i] * t;
        if (v < 0) v = -v;
        if (v > m) m = v;
      }
      total += blk.weight * m;
    }
    return total;
  };
  // Candidate t's: crossings of every signed pair of affine pieces.
  std::vector<std::pair<Rational, Rational>> pieces;  // (a, b) with both signs
  for (const auto& blk : blocks) {
    for (size_t i = 0; i < blk.a.size(); ++i) {
      pieces.emplace_back(blk.a[i], blk.b[i]);
      pieces.emplace_back(-blk.a[i], -blk.b[i]);
    }
  }
  std::vector<Rational> cands{Rational(0)};
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].second != 0) cands.push_back(-pieces[i].first / pieces[i].second);
    for (size_t j = i + 1; j < pieces.size(); ++j) {
      const Rational db = pieces[i].second - pieces[j].second;
      if (db == 0) continue;
      cands.push_back((pieces[j].first - pieces[i].first) / db);
    }
  }
  Rational best = eval(cands.front());
  for (const auto& t : cands) {
    const Rational v = eval(t);
    if (v < best) best = v;
  }
  return best;
}

}  // namespace polyban::oracles

#endif  // POLYBAN_TESTS_ORACLES_HPP
