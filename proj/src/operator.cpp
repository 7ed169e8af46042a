#include <polyban/operator.hpp>

#include <polyban/random.hpp>

namespace polyban {

namespace {

// max phi(x) over {x : ||f x||_codomain <= 1}. With codomain facets this is
// plain lp_max over the pulled-back constraints; over a vertex-only codomain
// it is the extended LP with hull multipliers.
LpMaxResult max_over_preimage_ball(const RowVec& phi, const LinMap& f) {
  const int dx = f.domain->dim();
  if (const HRep* hy = f.codomain->hrep_if_present()) {
    std::vector<RowVec> rows;
    rows.reserve(hy->functionals.size());
    for (const auto& psi : hy->functionals) rows.push_back(psi * f.matrix);
    return lp_max(phi, make_hrep(dx, std::move(rows)));
  }
  const VRep& vy = *f.codomain->vrep_if_present();
  const Eigen::Index nv = static_cast<Eigen::Index>(vy.vertices.size());
  LinearProgram lp(dx + nv);
  lp.nonneg.assign(static_cast<size_t>(dx + nv), true);
  for (int j = 0; j < dx; ++j) lp.nonneg[static_cast<size_t>(j)] = false;
  lp.objective.head(dx) = phi.transpose();
  for (int r = 0; r < f.codomain->dim(); ++r) {
    RowVec row = RowVec::Zero(dx + nv);
    row.head(dx) = f.matrix.row(r);
    for (Eigen::Index j = 0; j < nv; ++j) row(dx + j) = -vy.vertices[static_cast<size_t>(j)](r);
    lp.add_row(row, Rel::Eq, 0);
  }
  RowVec ones = RowVec::Zero(dx + nv);
  ones.tail(nv).setOnes();
  lp.add_row(ones, Rel::Le, 1);
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw UnboundedRegionError("preimage ball unbounded: map not injective");
  return {res.value, res.point.head(dx)};
}

}  // namespace

OpNormResult op_norm_attained(const LinMap& t) {
  const int dx = t.domain->dim();
  if (dx == 0) return {Rational(0), Vec::Zero(0)};
  if (t.codomain->dim() == 0) return {Rational(0), Vec::Zero(dx)};

  // Vertex route whenever the domain ball vertices are on hand (or cheap).
  const VRep* dv = t.domain->vrep_if_present();
  const bool lp_route = !dv && t.domain->has_hrep() && t.codomain->has_hrep();
  if (!lp_route) {
    const VRep& ball = dv ? *dv : t.domain->vrep();
    OpNormResult best{Rational(0), Vec::Zero(dx)};
    for (const auto& v : ball.vertices) {
      const Rational n = norm_of(t.codomain, t.matrix * v);
      if (n > best.value) best = {n, v};
    }
    return best;
  }
  const HRep& hy = t.codomain->hrep();
  OpNormResult best{Rational(0), Vec::Zero(dx)};
  for (const auto& psi : hy.functionals) {
    const RowVec composed = psi * t.matrix;
    LpMaxResult r = lp_max(composed, t.domain->hrep());
    if (r.value > best.value) best = {r.value, r.witness};
  }
  return best;
}

Rational op_norm(const LinMap& t) { return op_norm_attained(t).value; }

Rational distance(const LinMap& f, const LinMap& g) {
  if (f.domain->id() != g.domain->id() || f.codomain->id() != g.codomain->id())
    throw DimensionMismatchError("distance: maps live between different spaces");
  LinMap diff{f.domain, f.codomain, f.matrix - g.matrix};
  return op_norm(diff);
}

LinMap compose(const LinMap& g, const LinMap& f) {
  if (f.codomain->id() != g.domain->id())
    throw DimensionMismatchError("compose: codomain of f is not the domain of g");
  return LinMap{f.domain, g.codomain, g.matrix * f.matrix};
}

LinMap restrict(const LinMap& f, const LinMap& sub) { return compose(f, sub); }

bool same_map(const LinMap& f, const LinMap& g) {
  return f.domain->id() == g.domain->id() && f.codomain->id() == g.codomain->id() &&
         f.matrix == g.matrix;
}

EmbeddingCheck certify_embedding(const LinMap& f, const Rational& eps) {
  if (eps < 0) throw std::invalid_argument("certify_embedding: eps must be >= 0");
  EmbeddingCheck out;
  const int dx = f.domain->dim();

  if (dx == 0) {
    out.cert = EmbeddingCert{eps, Rational(0), Vec::Zero(0), Rational(0), Vec::Zero(0), false};
    return out;
  }

  const OpNormResult upper = op_norm_attained(f);
  if (upper.value > 1 + eps) {
    out.refutation = EmbeddingRefutation{EmbeddingRefutation::Side::Upper, upper.arg,
                                         norm_of(f.domain, upper.arg),
                                         norm_of(f.codomain, f.matrix * upper.arg)};
    return out;
  }

  if (eps >= 1) {
    out.cert = EmbeddingCert{eps, upper.value, upper.arg, Rational(0), Vec::Zero(dx), true};
    return out;
  }

  const Mat ker = kernel_of(f.matrix);
  if (ker.cols() > 0) {
    Vec x = ker.col(0);
    out.refutation = EmbeddingRefutation{EmbeddingRefutation::Side::Lower, x,
                                         norm_of(f.domain, x), norm_of(f.codomain, f.matrix * x)};
    return out;
  }

  const Rational bound = Rational(1) / (Rational(1) - eps);
  const HRep& hx = f.domain->hrep();
  Rational gauge = 0;
  Vec gauge_arg = Vec::Zero(dx);
  for (const auto& phi : hx.functionals) {
    LpMaxResult r = max_over_preimage_ball(phi, f);
    if (r.value > bound) {
      out.refutation = EmbeddingRefutation{EmbeddingRefutation::Side::Lower, r.witness,
                                           norm_of(f.domain, r.witness),
                                           norm_of(f.codomain, f.matrix * r.witness)};
      return out;
    }
    if (r.value > gauge) {
      gauge = r.value;
      gauge_arg = r.witness;
    }
  }
  out.cert = EmbeddingCert{eps, upper.value, upper.arg, gauge, gauge_arg, false};
  return out;
}

bool reverify(const EmbeddingCert& cert, const LinMap& f) {
  if (f.domain->dim() == 0) return true;
  const OpNormResult upper = op_norm_attained(f);
  if (upper.value != cert.upper || upper.value > 1 + cert.eps) return false;
  if (norm_of(f.domain, cert.upper_arg) > 1) return false;
  if (norm_of(f.codomain, f.matrix * cert.upper_arg) != cert.upper) return false;
  if (cert.lower_vacuous) return cert.eps >= 1;
  const Rational bound = Rational(1) / (Rational(1) - cert.eps);
  Rational gauge = 0;
  for (const auto& phi : f.domain->hrep().functionals) {
    const Rational v = max_over_preimage_ball(phi, f).value;
    if (v > bound) return false;
    gauge = rational_max(gauge, v);
  }
  return gauge == cert.lower_gauge;
}

bool reverify(const EmbeddingRefutation& ref, const LinMap& f, const Rational& eps) {
  const Rational xn = norm_of(f.domain, ref.x);
  const Rational fxn = norm_of(f.codomain, f.matrix * ref.x);
  if (xn != ref.x_norm || fxn != ref.fx_norm) return false;
  if (ref.side == EmbeddingRefutation::Side::Upper) return fxn > (1 + eps) * xn;
  return fxn < (1 - eps) * xn;
}

LeftUniversalFactor factor_left_universal(const LinMap& t, const LinMap& e) {
  if (t.domain->id() != e.domain->id())
    throw DimensionMismatchError("factor_left_universal: T and e have different domains");
  const Rational tn = op_norm(t);
  if (tn > 1) {
    throw PreconditionError("factor_left_universal: T is not non-expansive",
                            op_norm_attained(t).arg);
  }
  EmbeddingCheck ec = certify_embedding(e, 0);
  if (!ec.ok())
    throw PreconditionError("factor_left_universal: e is not an isometric embedding",
                            ec.refutation ? std::optional<Vec>(ec.refutation->x) : std::nullopt);
  DirectSum sum = direct_sum_max(e.codomain, t.codomain);
  LinMap j{t.domain, sum.space,
           sum.emb_first.matrix * e.matrix + sum.emb_second.matrix * t.matrix};
  return LeftUniversalFactor{sum, std::move(j), sum.proj_second};
}

LinMap random_nonexpansive_map(SpacePtr domain, SpacePtr codomain, std::uint64_t seed) {
  RationalRng rng(seed);
  const int rows = codomain->dim();
  const int cols = domain->dim();
  if (rows == 0 || cols == 0) return zero_map(std::move(domain), std::move(codomain));
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mat m = rng.matrix(rows, cols, 2, 2);
    LinMap raw{domain, codomain, m};
    const Rational n = op_norm(raw);
    if (n == 0) continue;
    const Rational target = rng.unit_open();
    raw.matrix *= target / n;
    return raw;
  }
  return zero_map(std::move(domain), std::move(codomain));
}

}  // namespace polyban
