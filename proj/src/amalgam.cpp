#include <polyban/amalgam.hpp>

#include <polyban/hash.hpp>

#include <sstream>

namespace polyban {

namespace {

std::optional<EmbeddingCert> try_direct_certificate(const LinMap& m, const Rational& eps) {
  if (!m.domain->has_hrep() && m.domain->dim() > default_dim_cap()) return std::nullopt;
  try {
    EmbeddingCheck chk = certify_embedding(m, eps);
    if (!chk.ok())
      throw VerificationError("construction lost an embedding certificate",
                              chk.refutation ? std::optional<Vec>(chk.refutation->x)
                                             : std::nullopt);
    return chk.cert;
  } catch (const DimensionCapError&) {
    return std::nullopt;
  }
}

}  // namespace

AmalgamResult pushout_eps(const LinMap& f, const Rational& eps) {
  if (eps == 0)
    throw PreconditionError("pushout_eps: eps must be positive (use pushout_exact)");
  if (eps < 0) throw PreconditionError("pushout_eps: negative eps");
  EmbeddingCheck fc = certify_embedding(f, eps);
  if (!fc.ok())
    throw PreconditionError(
        "pushout_eps: f is not an eps-embedding",
        fc.refutation ? std::optional<Vec>(fc.refutation->x) : std::nullopt);

  SpacePtr X = f.domain;
  SpacePtr Y = f.codomain;
  const int dx = X->dim();
  const int dy = Y->dim();

  if (dx == 0) {
    // Nothing to glue: Z is Y itself.
    AmalgamResult out{Y, zero_map(X, Y), identity_map(Y), eps};
    out.f = f;
    out.i_cert = try_direct_certificate(out.i, 0);
    out.j_cert = try_direct_certificate(out.j, 0);
    return out;
  }

  const int d = dx + dy;
  std::vector<Vec> gens;
  for (const auto& v : X->vrep().vertices) {
    Vec p = Vec::Zero(d);
    p.head(dx) = v;
    gens.push_back(p);
    Vec q(d);
    q.head(dx) = v / eps;
    if (dy > 0) q.tail(dy) = -(f.matrix * v) / eps;
    gens.push_back(q);
  }
  if (dy > 0) {
    for (const auto& w : Y->vrep().vertices) {
      Vec p = Vec::Zero(d);
      p.tail(dy) = w;
      gens.push_back(p);
    }
  }
  VRep ball = make_vrep(d, std::move(gens), /*filter_extreme=*/true);
  std::optional<HRep> hball;
  if (d <= default_dim_cap()) hball = vrep_to_hrep(ball);

  std::ostringstream os;
  os << "po-eps(" << X->id() << "," << Y->id() << "," << eps << ")";
  const std::string id = "poeps-" + fnv1a64_hex(os.str()).substr(0, 12);
  SpacePtr Z = std::make_shared<Space>(id, d, std::move(hball), std::move(ball),
                                       std::vector<std::string>{});

  Mat mi = Mat::Zero(d, dx);
  mi.topRows(dx) = Mat::Identity(dx, dx);
  Mat mj = Mat::Zero(d, dy);
  mj.bottomRows(dy) = Mat::Identity(dy, dy);

  AmalgamResult out{Z, make_map(X, Z, mi), make_map(Y, Z, mj), eps};
  out.f = f;
  out.i_cert = try_direct_certificate(out.i, 0);
  out.j_cert = try_direct_certificate(out.j, 0);
  out.glue_defect = distance(compose(out.j, f), out.i);
  if (out.glue_defect > eps)
    throw VerificationError("pushout_eps: gluing defect exceeds eps");
  return out;
}

LinMap extend_operators(AmalgamResult& result, const LinMap& pi, const LinMap& rho) {
  if (!result.f)
    throw PreconditionError("extend_operators: result does not come from pushout_eps");
  const LinMap& f = *result.f;
  if (pi.domain->id() != f.domain->id() || rho.domain->id() != f.codomain->id() ||
      pi.codomain->id() != rho.codomain->id())
    throw DimensionMismatchError("extend_operators: operator shapes do not match the pushout");
  OpNormResult pn = op_norm_attained(pi);
  if (pn.value > 1) throw PreconditionError("extend_operators: pi is expansive", pn.arg);
  OpNormResult rn = op_norm_attained(rho);
  if (rn.value > 1) throw PreconditionError("extend_operators: rho is expansive", rn.arg);
  LinMap rho_f = compose(rho, f);
  LinMap diff{pi.domain, pi.codomain, rho_f.matrix - pi.matrix};
  OpNormResult dn = op_norm_attained(diff);
  if (dn.value > result.eps)
    throw PreconditionError("extend_operators: ||rho.f - pi|| exceeds eps", dn.arg);

  const int dx = pi.domain->dim();
  const int dy = rho.domain->dim();
  Mat tm(pi.codomain->dim(), dx + dy);
  tm.leftCols(dx) = pi.matrix;
  tm.rightCols(dy) = rho.matrix;
  LinMap t = make_map(result.Z, pi.codomain, std::move(tm));

  OpNormResult tn = op_norm_attained(t);
  if (tn.value > 1)
    throw VerificationError("extend_operators: induced operator is expansive", tn.arg);
  if (compose(t, result.i).matrix != pi.matrix || compose(t, result.j).matrix != rho.matrix)
    throw VerificationError("extend_operators: t does not restrict to pi / rho");
  result.t = t;
  return t;
}

AmalgamResult pushout_exact(const LinMap& g, const LinMap& h, std::string z_id) {
  if (g.domain->id() != h.domain->id())
    throw DimensionMismatchError("pushout_exact: legs have different domains");
  EmbeddingCheck gc = certify_embedding(g, 0);
  if (!gc.ok())
    throw PreconditionError(
        "pushout_exact: g is not an isometric embedding",
        gc.refutation ? std::optional<Vec>(gc.refutation->x) : std::nullopt);
  OpNormResult hn = op_norm_attained(h);
  if (hn.value > 1) throw PreconditionError("pushout_exact: h is expansive", hn.arg);

  SpacePtr X = g.codomain;
  SpacePtr Y = h.codomain;
  const int de = g.domain->dim();

  DirectSum sum = direct_sum_l1(X, Y);
  Mat n(X->dim() + Y->dim(), de);
  n.topRows(X->dim()) = g.matrix;
  n.bottomRows(Y->dim()) = -h.matrix;

  Quotient q = quotient_space(sum.space, n, std::move(z_id));

  AmalgamResult out{q.space, compose(q.map, sum.emb_first), compose(q.map, sum.emb_second),
                    Rational(0)};
  out.g = g;
  out.h = h;
  out.quotient = q.map;
  out.section = q.section;
  out.g_cert = gc.cert;
  out.h_norm = hn.value;
  out.h_cert = certify_embedding(h, 0).cert;  // present iff h is isometric

  if (compose(out.i, g).matrix != compose(out.j, h).matrix)
    throw VerificationError("pushout_exact: square does not commute");

  out.j_cert = try_direct_certificate(out.j, 0);
  OpNormResult in = op_norm_attained(out.i);
  if (in.value > 1)
    throw VerificationError("pushout_exact: i is expansive", in.arg);
  if (out.h_cert) out.i_cert = try_direct_certificate(out.i, 0);
  return out;
}

LinMap induce_operator(const AmalgamResult& result, const LinMap& a, const LinMap& b) {
  if (!result.g || !result.quotient)
    throw PreconditionError("induce_operator: result does not come from pushout_exact");
  if (a.codomain->id() != b.codomain->id())
    throw DimensionMismatchError("induce_operator: targets differ");
  if (compose(a, *result.g).matrix != compose(b, *result.h).matrix)
    throw PreconditionError("induce_operator: a.g != b.h");
  const int dx = a.domain->dim();
  const int dy = b.domain->dim();
  Mat w(a.codomain->dim(), dx + dy);
  w.leftCols(dx) = a.matrix;
  w.rightCols(dy) = b.matrix;
  LinMap t = make_map(result.Z, a.codomain, w * result.section);
  if (compose(t, result.i).matrix != a.matrix || compose(t, result.j).matrix != b.matrix)
    throw VerificationError("induce_operator: t does not restrict to a / b");
  return t;
}

CorrectionResult correct_to_exact(const CorrectionInput& in) {
  const LinMap& P = in.P;
  const LinMap& r = in.r;
  const LinMap& e = in.e;
  const LinMap& T = in.T;
  const LinMap& f = in.f;
  const LinMap& inc = in.inclusion;

  if (compose(P, r).matrix != Mat::Identity(P.codomain->dim(), P.codomain->dim()))
    throw PreconditionError("correct_to_exact: P.r is not the identity on S");
  OpNormResult rn = op_norm_attained(r);
  if (rn.value > 1) throw PreconditionError("correct_to_exact: r is expansive", rn.arg);
  EmbeddingCheck incc = certify_embedding(inc, 0);
  if (!incc.ok())
    throw PreconditionError("correct_to_exact: inclusion is not isometric");
  if (compose(P, e).matrix != compose(T, inc).matrix)
    throw PreconditionError("correct_to_exact: P.e != T on X0");

  const int dx = T.domain->dim();
  const int k0 = inc.domain->dim();
  if (in.complement.rows() != dx || in.complement.cols() != dx - k0)
    throw DimensionMismatchError("correct_to_exact: complement shape");
  Mat basis(dx, dx);
  if (k0 > 0) basis.leftCols(k0) = inc.matrix;
  if (dx - k0 > 0) basis.rightCols(dx - k0) = in.complement;
  Mat basis_inv;
  try {
    basis_inv = inverse_of(basis);
  } catch (const SingularMatrixError&) {
    throw PreconditionError("correct_to_exact: adapted basis is singular");
  }

  const Rational delta = delta_for_eps(T.domain, basis, in.eps);

  EmbeddingCheck fc = certify_embedding(f, delta);
  if (!fc.ok())
    throw PreconditionError(
        "correct_to_exact: f is not a delta-embedding at delta = " + to_string(delta),
        fc.refutation ? std::optional<Vec>(fc.refutation->x) : std::nullopt);
  if (k0 > 0) {
    const Rational d0 = distance(compose(f, inc), e);
    if (d0 > delta)
      throw PreconditionError("correct_to_exact: ||f|X0 - e|| = " + to_string(d0) +
                              " exceeds delta = " + to_string(delta));
  }
  {
    const Rational d1 = distance(compose(P, f), T);
    if (d1 > delta)
      throw PreconditionError("correct_to_exact: ||P.f - T|| = " + to_string(d1) +
                              " exceeds delta = " + to_string(delta));
  }

  // Column a of the corrected map: e on the X0 part of the basis,
  // f(a) - r(P(f(a)) - T(a)) on the rest.
  Mat cols(P.domain->dim(), dx);
  std::vector<Vec> corrections;
  corrections.reserve(static_cast<size_t>(dx));
  for (int c = 0; c < k0; ++c) {
    cols.col(c) = e.matrix.col(c);
    corrections.push_back(Vec::Zero(P.codomain->dim()));
  }
  for (int c = k0; c < dx; ++c) {
    const Vec a = basis.col(c);
    const Vec w = P.matrix * (f.matrix * a) - T.matrix * a;
    cols.col(c) = f.matrix * a - r.matrix * w;
    corrections.push_back(w);
  }
  LinMap fprime = make_map(T.domain, P.domain, cols * basis_inv);

  if (k0 > 0 && compose(fprime, inc).matrix != e.matrix)
    throw VerificationError("correct_to_exact: f'|X0 != e");
  if (compose(P, fprime).matrix != T.matrix)
    throw VerificationError("correct_to_exact: P.f' != T");

  EmbeddingCheck fpc = certify_embedding(fprime, in.eps);
  if (!fpc.ok())
    throw VerificationError(
        "correct_to_exact: corrected map fails the eps-embedding certificate "
        "(delta too coarse for this instance)",
        fpc.refutation ? std::optional<Vec>(fpc.refutation->x) : std::nullopt);
  return CorrectionResult{std::move(fprime), *fpc.cert, std::move(corrections), delta};
}

}  // namespace polyban
