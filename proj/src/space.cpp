#include <polyban/space.hpp>

#include <polyban/hash.hpp>
#include <polyban/random.hpp>

#include <sstream>

namespace polyban {

namespace {

std::string describe(const HRep& h) {
  std::ostringstream os;
  os << "H" << h.dim << ":";
  for (const auto& f : h.functionals) {
    for (Eigen::Index i = 0; i < f.size(); ++i) os << f(i) << ",";
    os << ";";
  }
  return os.str();
}

std::string describe(const VRep& v) {
  std::ostringstream os;
  os << "V" << v.dim << ":";
  for (const auto& p : v.vertices) {
    for (Eigen::Index i = 0; i < p.size(); ++i) os << p(i) << ",";
    os << ";";
  }
  return os.str();
}

std::string auto_id(const std::string& stem, const std::string& content) {
  return stem + "-" + fnv1a64_hex(content).substr(0, 12);
}

Mat pad_rows_left(const std::vector<RowVec>& rows, int left_dim, int right_dim, bool on_left) {
  Mat m(static_cast<Eigen::Index>(rows.size()), left_dim + right_dim);
  m.setZero();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const RowVec& f = rows[static_cast<size_t>(r)];
    if (on_left)
      m.block(r, 0, 1, left_dim) = f;
    else
      m.block(r, left_dim, 1, right_dim) = f;
  }
  return m;
}

}  // namespace

Space::Space(std::string id, int dim, std::optional<HRep> h, std::optional<VRep> v,
             std::vector<std::string> labels)
    : id_(std::move(id)), dim_(dim), labels_(std::move(labels)), h_(std::move(h)), v_(std::move(v)) {
  if (dim_ < 0) throw std::invalid_argument("negative dimension");
  if (!h_ && !v_) throw std::invalid_argument("space needs at least one ball representation");
  if (h_ && h_->dim != dim_) throw DimensionMismatchError("ball_h dim");
  if (v_ && v_->dim != dim_) throw DimensionMismatchError("ball_v dim");
}

bool Space::has_hrep() const {
  std::lock_guard lk(mu_);
  return h_.has_value();
}

bool Space::has_vrep() const {
  std::lock_guard lk(mu_);
  return v_.has_value();
}

const HRep* Space::hrep_if_present() const {
  std::lock_guard lk(mu_);
  return h_ ? &*h_ : nullptr;
}

const VRep* Space::vrep_if_present() const {
  std::lock_guard lk(mu_);
  return v_ ? &*v_ : nullptr;
}

const HRep& Space::hrep(int dim_cap) const {
  std::lock_guard lk(mu_);
  if (!h_) h_ = vrep_to_hrep(*v_, dim_cap);
  return *h_;
}

const VRep& Space::vrep(int dim_cap) const {
  std::lock_guard lk(mu_);
  if (!v_) v_ = hrep_to_vrep(*h_, dim_cap);
  return *v_;
}

LinMap make_map(SpacePtr domain, SpacePtr codomain, Mat matrix) {
  if (!domain || !codomain) throw std::invalid_argument("make_map: null space");
  if (matrix.rows() != codomain->dim() || matrix.cols() != domain->dim())
    throw DimensionMismatchError("map matrix shape");
  return LinMap{std::move(domain), std::move(codomain), std::move(matrix)};
}

LinMap identity_map(SpacePtr x) {
  Mat id = Mat::Identity(x->dim(), x->dim());
  return LinMap{x, x, std::move(id)};
}

LinMap zero_map(SpacePtr domain, SpacePtr codomain) {
  Mat z = Mat::Zero(codomain->dim(), domain->dim());
  return LinMap{std::move(domain), std::move(codomain), std::move(z)};
}

Vec apply(const LinMap& f, const Vec& x) {
  if (x.size() != f.domain->dim()) throw DimensionMismatchError("apply: vector arity");
  return f.matrix * x;
}

SpacePtr make_space(HRep ball, std::vector<std::string> labels, std::string id) {
  if (ball.dim > 0 && ball.functionals.empty()) throw EmptyFunctionalsError();
  if (!hrep_bounded(ball)) throw SeminormError();
  if (id.empty()) id = auto_id("sp", describe(ball));
  return std::make_shared<Space>(std::move(id), ball.dim, std::move(ball), std::nullopt,
                                 std::move(labels));
}

SpacePtr make_space_from_vertices(VRep ball, std::vector<std::string> labels, std::string id) {
  if (ball.dim > 0) {
    Mat m(static_cast<Eigen::Index>(ball.vertices.size()), ball.dim);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      m.row(r) = ball.vertices[static_cast<size_t>(r)].transpose();
    if (rank_of(m) != ball.dim)
      throw DegenerateHullError("vertices span a proper subspace: not a norm ball");
  }
  if (id.empty()) id = auto_id("sp", describe(ball));
  return std::make_shared<Space>(std::move(id), ball.dim, std::nullopt, std::move(ball),
                                 std::move(labels));
}

SpacePtr zero_space() {
  static const SpacePtr z =
      std::make_shared<Space>("zero", 0, HRep{0, {}}, VRep{0, {}}, std::vector<std::string>{});
  return z;
}

Rational norm_of(const Space& X, const Vec& x) {
  if (x.size() != X.dim()) throw DimensionMismatchError("norm_of: vector arity");
  if (X.dim() == 0) return 0;
  if (const HRep* h = X.hrep_if_present()) {
    Rational best = 0;
    for (const auto& f : h->functionals) best = rational_max(best, rational_abs(inner(f, x)));
    return best;
  }
  return vrep_gauge(*X.vrep_if_present(), x);
}

namespace {

// Computes the representations of a direct sum. l1 switches between the
// max-ball (product) and the l1-ball (convex hull of the embedded balls).
SpacePtr sum_space(const Space& x, const Space& y, bool l1, const std::string& stem) {
  const int dx = x.dim();
  const int dy = y.dim();
  const int d = dx + dy;

  std::optional<HRep> h;
  std::optional<VRep> v;

  const HRep* hx = x.hrep_if_present();
  const HRep* hy = y.hrep_if_present();
  const VRep* vx = x.vrep_if_present();
  const VRep* vy = y.vrep_if_present();

  // Fall back to conversions (cap-guarded) when neither family is complete.
  const bool h_ready = hx && hy;
  const bool v_ready = vx && vy;
  if (!h_ready && !v_ready) {
    hx = &x.hrep();
    hy = &y.hrep();
  }

  if ((hx && hy)) {
    std::vector<RowVec> rows;
    if (!l1) {
      for (const auto& f : hx->functionals) rows.push_back(pad_rows_left({f}, dx, dy, true).row(0));
      for (const auto& g : hy->functionals) rows.push_back(pad_rows_left({g}, dx, dy, false).row(0));
    } else {
      // Facets of the l1 ball: all signed pairs; max_{i,j,s} |phi_i(x) + s psi_j(y)|
      // equals ||x|| + ||y||.
      if (dx == 0) {
        for (const auto& g : hy->functionals) rows.push_back(pad_rows_left({g}, dx, dy, false).row(0));
      } else if (dy == 0) {
        for (const auto& f : hx->functionals) rows.push_back(pad_rows_left({f}, dx, dy, true).row(0));
      } else {
        for (const auto& f : hx->functionals) {
          for (const auto& g : hy->functionals) {
            RowVec row(d);
            row.head(dx) = f;
            row.tail(dy) = g;
            rows.push_back(row);
            row.tail(dy) = -g;
            rows.push_back(row);
          }
        }
      }
    }
    h = make_hrep(d, std::move(rows));
  }

  if (vx && vy) {
    std::vector<Vec> pts;
    if (!l1) {
      if (dx == 0) {
        for (const auto& q : vy->vertices) {
          Vec p = Vec::Zero(d);
          p.tail(dy) = q;
          pts.push_back(p);
        }
      } else if (dy == 0) {
        for (const auto& q : vx->vertices) {
          Vec p = Vec::Zero(d);
          p.head(dx) = q;
          pts.push_back(p);
        }
      } else {
        for (const auto& a : vx->vertices) {
          for (const auto& b : vy->vertices) {
            Vec p(d);
            p.head(dx) = a;
            p.tail(dy) = b;
            pts.push_back(p);
          }
        }
      }
    } else {
      for (const auto& a : vx->vertices) {
        Vec p = Vec::Zero(d);
        p.head(dx) = a;
        pts.push_back(p);
      }
      for (const auto& b : vy->vertices) {
        Vec p = Vec::Zero(d);
        p.tail(dy) = b;
        pts.push_back(p);
      }
    }
    // Product vertices are extreme already; l1 hull vertices stay extreme
    // because each summand ball is full-dimensional in its block.
    v = make_vrep(d, std::move(pts), /*filter_extreme=*/false);
  }

  std::vector<std::string> labels;
  if (static_cast<int>(x.labels().size()) == dx && static_cast<int>(y.labels().size()) == dy &&
      d > 0 && !x.labels().empty() && !y.labels().empty()) {
    labels = x.labels();
    labels.insert(labels.end(), y.labels().begin(), y.labels().end());
  }

  const std::string id =
      auto_id(stem, x.id() + "|" + y.id() + (h ? describe(*h) : std::string()) +
                        (v ? describe(*v) : std::string()));
  return std::make_shared<Space>(id, d, std::move(h), std::move(v), std::move(labels));
}

DirectSum build_sum(SpacePtr X, SpacePtr Y, bool l1) {
  if (Y->dim() == 0) {
    DirectSum out{X, identity_map(X), zero_map(Y, X), identity_map(X), zero_map(X, Y)};
    return out;
  }
  if (X->dim() == 0) {
    DirectSum out{Y, zero_map(X, Y), identity_map(Y), zero_map(Y, X), identity_map(Y)};
    return out;
  }
  SpacePtr Z = sum_space(*X, *Y, l1, l1 ? "sum1" : "summax");
  const int dx = X->dim();
  const int dy = Y->dim();
  Mat ex = Mat::Zero(dx + dy, dx);
  ex.topRows(dx) = Mat::Identity(dx, dx);
  Mat ey = Mat::Zero(dx + dy, dy);
  ey.bottomRows(dy) = Mat::Identity(dy, dy);
  Mat px = Mat::Zero(dx, dx + dy);
  px.leftCols(dx) = Mat::Identity(dx, dx);
  Mat py = Mat::Zero(dy, dx + dy);
  py.rightCols(dy) = Mat::Identity(dy, dy);
  return DirectSum{Z, make_map(X, Z, ex), make_map(Y, Z, ey), make_map(Z, X, px),
                   make_map(Z, Y, py)};
}

}  // namespace

DirectSum direct_sum_max(SpacePtr X, SpacePtr Y) { return build_sum(std::move(X), std::move(Y), false); }

DirectSum direct_sum_l1(SpacePtr X, SpacePtr Y) { return build_sum(std::move(X), std::move(Y), true); }

Quotient quotient_space(SpacePtr Z, const Mat& kernel_basis, std::string id) {
  const int d = Z->dim();
  if (kernel_basis.rows() != d) throw DimensionMismatchError("kernel basis arity");
  const Eigen::Index r = kernel_basis.cols();
  if (r > 0 && rank_of(kernel_basis) != r)
    throw std::invalid_argument("kernel basis not linearly independent");

  if (r == 0) {
    return Quotient{Z, identity_map(Z), Mat::Identity(d, d), false};
  }
  if (r == d) {
    SpacePtr q = zero_space();
    return Quotient{q, zero_map(Z, q), Mat::Zero(d, 0), true};
  }

  const Mat full = extend_to_basis(kernel_basis);  // [N | E]
  const Mat inv = inverse_of(full);
  const Eigen::Index k = d - r;
  const Mat proj = inv.bottomRows(k);      // quotient map matrix
  const Mat section = full.rightCols(k);   // proj * section = I

  const VRep& ball = Z->vrep();
  std::vector<Vec> pts;
  pts.reserve(ball.vertices.size());
  for (const auto& p : ball.vertices) pts.push_back(proj * p);
  VRep qball = make_vrep(static_cast<int>(k), std::move(pts), /*filter_extreme=*/true);

  std::optional<HRep> h;
  if (k <= default_dim_cap()) h = vrep_to_hrep(qball);
  if (id.empty()) id = auto_id("quot", Z->id() + describe(qball));
  auto space = std::make_shared<Space>(std::move(id), static_cast<int>(k), std::move(h),
                                       std::move(qball), std::vector<std::string>{});
  return Quotient{space, make_map(Z, space, proj), section, false};
}

Subspace subspace_space(SpacePtr ambient, const Mat& basis, std::string id) {
  const int d = ambient->dim();
  if (basis.rows() != d) throw DimensionMismatchError("subspace basis arity");
  const Eigen::Index k = basis.cols();
  if (k == 0) {
    SpacePtr z = zero_space();
    return Subspace{z, zero_map(z, ambient), Mat::Zero(0, d)};
  }
  if (rank_of(basis) != k) throw std::invalid_argument("subspace basis not independent");

  std::optional<HRep> h;
  std::optional<VRep> v;
  if (const HRep* ha = ambient->hrep_if_present()) {
    std::vector<RowVec> rows;
    rows.reserve(ha->functionals.size());
    for (const auto& f : ha->functionals) rows.push_back(f * basis);
    h = make_hrep(static_cast<int>(k), std::move(rows));
  } else {
    const VRep& va = *ambient->vrep_if_present();
    SupportOracle oracle = [&](const RowVec& sigma) {
      // max sigma.c subject to basis*c in conv(va): variables (c, mu).
      const Eigen::Index nv = static_cast<Eigen::Index>(va.vertices.size());
      LinearProgram lp(k + nv);
      lp.nonneg.assign(static_cast<size_t>(k + nv), true);
      for (Eigen::Index j = 0; j < k; ++j) lp.nonneg[static_cast<size_t>(j)] = false;
      lp.objective.head(k) = sigma.transpose();
      for (Eigen::Index rrow = 0; rrow < d; ++rrow) {
        RowVec row = RowVec::Zero(k + nv);
        row.head(k) = basis.row(rrow);
        for (Eigen::Index j = 0; j < nv; ++j) row(k + j) = -va.vertices[static_cast<size_t>(j)](rrow);
        lp.add_row(row, Rel::Eq, 0);
      }
      RowVec ones = RowVec::Zero(k + nv);
      ones.tail(nv).setOnes();
      lp.add_row(ones, Rel::Le, 1);
      LpResult res = solve_lp(lp);
      if (res.status != LpStatus::Optimal)
        throw DegenerateHullError("subspace oracle: unexpected LP status");
      return LpMaxResult{res.value, res.point.head(k)};
    };
    auto [vv, hh] = polytope_from_oracle(static_cast<int>(k), oracle);
    v = std::move(vv);
    h = std::move(hh);
  }

  std::ostringstream content;
  content << ambient->id() << "#";
  for (Eigen::Index c = 0; c < basis.cols(); ++c)
    for (Eigen::Index rr = 0; rr < basis.rows(); ++rr) content << basis(rr, c) << ",";
  if (id.empty()) id = auto_id("sub", content.str());
  auto space = std::make_shared<Space>(std::move(id), static_cast<int>(k), std::move(h),
                                       std::move(v), std::vector<std::string>{});
  return Subspace{space, make_map(space, ambient, basis), left_inverse_of(basis)};
}

BasisConstant basis_constant(SpacePtr X, const Mat& basis) {
  const int d = X->dim();
  if (d == 0) throw std::invalid_argument("basis_constant: zero-dimensional space");
  if (basis.rows() != d || basis.cols() != d)
    throw std::invalid_argument("basis_constant: A is not a basis (shape)");
  Mat inv;
  try {
    inv = inverse_of(basis);
  } catch (const SingularMatrixError&) {
    throw std::invalid_argument("basis_constant: A is not a basis (singular)");
  }
  const VRep& ball = X->vrep();
  Rational best = 0;
  Vec witness = Vec::Zero(d);
  for (const auto& p : ball.vertices) {
    const Vec coords = inv * p;
    for (Eigen::Index i = 0; i < coords.size(); ++i) {
      const Rational c = rational_abs(coords(i));
      if (c > best) {
        best = c;
        witness = p;
      }
    }
  }
  return BasisConstant{X, basis, best, witness};
}

Rational delta_for_eps(SpacePtr X, const Mat& basis, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("delta_for_eps: eps must be positive");
  const BasisConstant bc = basis_constant(std::move(X), basis);
  return eps / (bc.M * Rational(basis.cols()));
}

SpacePtr random_space(int dim, int facet_count, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_space: dim must be positive");
  if (facet_count < dim) throw std::invalid_argument("random_space: facet_count < dim");
  RationalRng rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<RowVec> rows;
    for (int i = 0; i < facet_count; ++i) {
      RowVec r(dim);
      for (int j = 0; j < dim; ++j) r(j) = rng.small_rational(3, 3);
      rows.push_back(r);
    }
    HRep h = make_hrep(dim, std::move(rows));
    if (static_cast<int>(h.functionals.size()) != facet_count || !hrep_bounded(h)) continue;
    std::ostringstream os;
    os << "rnd-" << seed << "-" << dim << "x" << facet_count;
    return make_space(std::move(h), {}, os.str());
  }
  throw std::runtime_error("random_space: could not generate a bounded ball");
}

}  // namespace polyban
