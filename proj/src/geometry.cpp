#include <polyban/geometry.hpp>

#include <algorithm>
#include <atomic>
#include <map>

namespace polyban {

namespace {

std::atomic<int> g_dim_cap{8};

// Sign-canonical form: first nonzero entry positive. Zero stays zero.
template <typename V>
V sign_canonical(const V& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0) return v(i) > 0 ? V(v) : V(-v);
  }
  return v;
}

bool row_lex_less(const RowVec& a, const RowVec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return false;
}

Mat rows_to_matrix(const std::vector<RowVec>& rows, Eigen::Index dim) {
  Mat m(static_cast<Eigen::Index>(rows.size()), dim);
  for (Eigen::Index r = 0; r < m.rows(); ++r) m.row(r) = rows[static_cast<size_t>(r)];
  return m;
}

}  // namespace

int default_dim_cap() { return g_dim_cap.load(); }
void set_default_dim_cap(int cap) {
  if (cap < 1) throw std::invalid_argument("dimension cap must be positive");
  g_dim_cap.store(cap);
}

HRep make_hrep(int dim, std::vector<RowVec> functionals) {
  if (dim < 0) throw std::invalid_argument("negative dimension");
  std::vector<RowVec> canon;
  for (auto& f : functionals) {
    if (f.size() != dim) throw DimensionMismatchError("functional arity != dim");
    if (f.isZero()) continue;  // |0(x)| <= 1 is vacuous
    canon.push_back(sign_canonical(f));
  }
  std::sort(canon.begin(), canon.end(), row_lex_less);
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
  return HRep{dim, std::move(canon)};
}

VRep make_vrep(int dim, std::vector<Vec> points, bool filter_extreme) {
  if (dim < 0) throw std::invalid_argument("negative dimension");
  std::vector<Vec> full;
  for (auto& p : points) {
    if (p.size() != dim) throw DimensionMismatchError("vertex arity != dim");
    if (p.isZero()) continue;  // the origin is never extreme in a symmetric ball
    full.push_back(p);
    full.push_back(-p);
  }
  std::sort(full.begin(), full.end(), lex_less);
  full.erase(std::unique(full.begin(), full.end()), full.end());
  if (filter_extreme) full = extreme_points(dim, full);
  std::sort(full.begin(), full.end(), lex_less);
  return VRep{dim, std::move(full)};
}

bool hrep_bounded(const HRep& h) {
  if (h.dim == 0) return true;
  return rank_of(rows_to_matrix(h.functionals, h.dim)) == h.dim;
}

LpMaxResult lp_max(const RowVec& objective, const HRep& h) {
  if (objective.size() != h.dim) throw DimensionMismatchError("lp_max: objective arity");
  if (!hrep_bounded(h)) throw UnboundedRegionError();
  if (h.dim == 0) return {Rational(0), Vec::Zero(0)};
  LinearProgram lp(h.dim);
  lp.objective = objective.transpose();
  for (const auto& f : h.functionals) {
    lp.add_row(f, Rel::Le, 1);
    lp.add_row(-f, Rel::Le, 1);
  }
  LpResult r = solve_lp(lp);
  if (r.status != LpStatus::Optimal)
    throw UnboundedRegionError("lp_max: solver reported non-optimal on a bounded region");
  return {r.value, r.point};
}

LpMaxResult lp_max_over_vrep(const RowVec& objective, const VRep& v) {
  if (objective.size() != v.dim) throw DimensionMismatchError("lp_max_over_vrep: arity");
  if (v.dim == 0 || v.vertices.empty()) return {Rational(0), Vec::Zero(v.dim)};
  LpMaxResult best{objective * v.vertices.front(), v.vertices.front()};
  for (const auto& p : v.vertices) {
    const Rational val = inner(objective, p);
    if (val > best.value) best = {val, p};
  }
  if (best.value < 0) best = {Rational(0), Vec::Zero(v.dim)};  // 0 is in the hull
  return best;
}

Rational vrep_gauge(const VRep& v, const Vec& x) {
  if (x.size() != v.dim) throw DimensionMismatchError("vrep_gauge: arity");
  if (x.isZero()) return 0;
  if (v.vertices.empty()) throw DegenerateHullError("gauge of a nonzero point in a trivial hull");
  // minimize sum(mu) s.t. V mu = x, mu >= 0; value is the gauge because the
  // vertex set is closed under negation.
  const Eigen::Index k = static_cast<Eigen::Index>(v.vertices.size());
  LinearProgram lp(k);
  lp.nonneg.assign(static_cast<size_t>(k), true);
  lp.objective = -Vec::Ones(k);  // maximize -sum
  for (Eigen::Index r = 0; r < v.dim; ++r) {
    RowVec row(k);
    for (Eigen::Index j = 0; j < k; ++j) row(j) = v.vertices[static_cast<size_t>(j)](r);
    lp.add_row(row, Rel::Eq, x(r));
  }
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw DegenerateHullError("gauge: point outside the span of the vertices");
  return -res.value;
}

bool hrep_contains(const HRep& h, const Vec& x) {
  if (x.size() != h.dim) throw DimensionMismatchError("hrep_contains: arity");
  for (const auto& f : h.functionals) {
    const Rational v = inner(f, x);
    if (v > 1 || v < -1) return false;
  }
  return true;
}

bool vrep_contains(const VRep& v, const Vec& x) {
  if (x.size() != v.dim) throw DimensionMismatchError("vrep_contains: arity");
  if (x.isZero()) return true;
  return in_convex_hull(v.vertices, x, v.dim);
}

bool in_convex_hull(const std::vector<Vec>& points, const Vec& p, int dim) {
  if (points.empty()) return p.isZero();
  const Eigen::Index k = static_cast<Eigen::Index>(points.size());
  LinearProgram lp(k);
  lp.nonneg.assign(static_cast<size_t>(k), true);
  for (Eigen::Index r = 0; r < dim; ++r) {
    RowVec row(k);
    for (Eigen::Index j = 0; j < k; ++j) row(j) = points[static_cast<size_t>(j)](r);
    lp.add_row(row, Rel::Eq, p(r));
  }
  lp.add_row(RowVec::Ones(k), Rel::Eq, 1);
  return lp_feasible_point(lp).has_value();
}

std::vector<Vec> extreme_points(int dim, const std::vector<Vec>& points) {
  std::vector<Vec> dedup = points;
  std::sort(dedup.begin(), dedup.end(), lex_less);
  dedup.erase(std::unique(dedup.begin(), dedup.end()), dedup.end());
  std::vector<Vec> keep;
  for (size_t i = 0; i < dedup.size(); ++i) {
    std::vector<Vec> others;
    others.reserve(dedup.size() - 1);
    for (size_t j = 0; j < dedup.size(); ++j)
      if (j != i) others.push_back(dedup[j]);
    if (!in_convex_hull(others, dedup[i], dim)) keep.push_back(dedup[i]);
  }
  return keep;
}

namespace {

// Incremental clipping state for the double description run.
struct DdState {
  int dim;
  std::vector<RowVec> processed;  // one-sided constraints a.x <= 1 already cut
  std::vector<Vec> verts;

  bool active(const RowVec& a, const Vec& v) const { return inner(a, v) == 1; }

  // u, v are adjacent iff their common active constraints pin a line.
  bool adjacent(const Vec& u, const Vec& v) const {
    std::vector<RowVec> common;
    for (const auto& a : processed)
      if (active(a, u) && active(a, v)) common.push_back(a);
    if (static_cast<int>(common.size()) < dim - 1) return false;
    return rank_of(rows_to_matrix(common, dim)) == dim - 1;
  }

  void clip(const RowVec& a) {
    std::vector<Rational> slack(verts.size());
    bool any_out = false;
    for (size_t i = 0; i < verts.size(); ++i) {
      slack[i] = inner(a, verts[i]);
      if (slack[i] > 1) any_out = true;
    }
    if (!any_out) {
      processed.push_back(a);
      return;
    }
    std::vector<Vec> keep, news;
    std::vector<size_t> kept_idx, drop_idx;
    for (size_t i = 0; i < verts.size(); ++i) {
      if (slack[i] <= 1) {
        keep.push_back(verts[i]);
        kept_idx.push_back(i);
      } else {
        drop_idx.push_back(i);
      }
    }
    for (size_t du : drop_idx) {
      for (size_t kv : kept_idx) {
        if (!adjacent(verts[du], verts[kv])) continue;
        const Rational t = (Rational(1) - slack[kv]) / (slack[du] - slack[kv]);
        news.push_back((verts[kv] + t * (verts[du] - verts[kv])).eval());
      }
    }
    std::sort(news.begin(), news.end(), lex_less);
    news.erase(std::unique(news.begin(), news.end()), news.end());
    keep.insert(keep.end(), news.begin(), news.end());
    verts = std::move(keep);
    processed.push_back(a);
  }
};

}  // namespace

VRep hrep_to_vrep(const HRep& h, int dim_cap) {
  if (h.dim > dim_cap) throw DimensionCapError("hrep_to_vrep: dim exceeds cap");
  if (!hrep_bounded(h)) throw UnboundedRegionError();
  if (h.dim == 0) return VRep{0, {}};

  // Seed with d independent functionals: their +/-1 level sets bound a
  // parallelotope whose 2^d corners are the initial vertex set.
  const Mat all = rows_to_matrix(h.functionals, h.dim);
  const std::vector<int> seed = row_basis_indices(all);
  Mat b(h.dim, h.dim);
  for (int r = 0; r < h.dim; ++r) b.row(r) = h.functionals[static_cast<size_t>(seed[static_cast<size_t>(r)])];
  const Mat binv = inverse_of(b);

  DdState st;
  st.dim = h.dim;
  for (int r = 0; r < h.dim; ++r) {
    st.processed.push_back(h.functionals[static_cast<size_t>(seed[static_cast<size_t>(r)])]);
    st.processed.push_back(-h.functionals[static_cast<size_t>(seed[static_cast<size_t>(r)])]);
  }
  const int corners = 1 << h.dim;
  for (int mask = 0; mask < corners; ++mask) {
    Vec s(h.dim);
    for (int r = 0; r < h.dim; ++r) s(r) = (mask >> r) & 1 ? 1 : -1;
    st.verts.push_back(binv * s);
  }

  for (size_t i = 0; i < h.functionals.size(); ++i) {
    if (std::find(seed.begin(), seed.end(), static_cast<int>(i)) != seed.end()) continue;
    st.clip(h.functionals[i]);
    st.clip(-h.functionals[i]);
  }
  return make_vrep(h.dim, std::move(st.verts), /*filter_extreme=*/false);
}

HRep vrep_to_hrep(const VRep& v, int dim_cap) {
  if (v.dim > dim_cap) throw DimensionCapError("vrep_to_hrep: dim exceeds cap");
  if (v.dim == 0) return HRep{0, {}};
  std::vector<RowVec> polar_rows;
  polar_rows.reserve(v.vertices.size());
  for (const auto& p : v.vertices) polar_rows.push_back(p.transpose());
  const HRep polar = make_hrep(v.dim, std::move(polar_rows));
  if (!hrep_bounded(polar)) throw DegenerateHullError();
  const VRep polar_verts = hrep_to_vrep(polar, dim_cap);
  std::vector<RowVec> facets;
  facets.reserve(polar_verts.vertices.size());
  for (const auto& u : polar_verts.vertices) facets.push_back(u.transpose());
  return make_hrep(v.dim, std::move(facets));
}

std::pair<VRep, HRep> polytope_from_oracle(int dim, const SupportOracle& oracle, int dim_cap) {
  if (dim > dim_cap) throw DimensionCapError("polytope_from_oracle: dim exceeds cap");
  if (dim == 0) return {VRep{0, {}}, HRep{0, {}}};

  std::vector<Vec> pts;
  auto shoot = [&](const RowVec& sigma) {
    LpMaxResult r = oracle(sigma);
    pts.push_back(r.witness);
    pts.push_back(-r.witness);  // K symmetric
  };
  for (int j = 0; j < dim; ++j) shoot(RowVec::Unit(dim, j));

  // Boost to full rank: any hyperplane containing all witnesses yields a
  // fresh probing direction, and K full-dimensional guarantees progress.
  for (;;) {
    Mat m(static_cast<Eigen::Index>(pts.size()), dim);
    for (size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    if (rank_of(m) == dim) break;
    Mat normal = kernel_of(m);
    if (normal.cols() == 0)
      throw DegenerateHullError("oracle polytope not full-dimensional");
    shoot(normal.col(0).transpose());
    Mat m2(static_cast<Eigen::Index>(pts.size()), dim);
    for (size_t i = 0; i < pts.size(); ++i) m2.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    if (rank_of(m2) <= rank_of(m))
      throw DegenerateHullError("oracle polytope not full-dimensional");
  }

  // Grow the inner hull until every facet is confirmed by the oracle.
  for (;;) {
    const VRep inner = make_vrep(dim, pts, /*filter_extreme=*/true);
    const HRep faces = vrep_to_hrep(inner, dim_cap);
    bool grew = false;
    for (const auto& f : faces.functionals) {
      LpMaxResult r = oracle(f);
      if (r.value > 1) {
        pts.push_back(r.witness);
        pts.push_back(-r.witness);
        grew = true;
      }
    }
    if (!grew) return {inner, faces};
  }
}

}  // namespace polyban
