#include <polyban/backforth.hpp>

#include <polyban/hash.hpp>

#include <sstream>

namespace polyban {

namespace {

// Greedily keeps columns that increase the rank; order is preserved so the
// result is deterministic.
Mat independent_columns(const Mat& cols) {
  Mat acc(cols.rows(), 0);
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    Mat trial(cols.rows(), acc.cols() + 1);
    trial.leftCols(acc.cols()) = acc;
    trial.col(acc.cols()) = cols.col(j);
    if (rank_of(trial) > rank_of(acc)) acc = std::move(trial);
  }
  return acc;
}

std::string describe_map(const LinMap& m) {
  std::ostringstream os;
  os << m.domain->id() << ">" << m.codomain->id() << ":";
  for (Eigen::Index r = 0; r < m.matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < m.matrix.cols(); ++c) os << m.matrix(r, c) << ",";
  return os.str();
}

}  // namespace

ClaimOutput claim_step(OperatorChain& a, OperatorChain& b, const Subspace& e0,
                       const LinMap& i0, const Rational& eps, const Vec& v,
                       const Vec& vprime, const Rational& eta,
                       std::optional<Rational> forced_delta) {
  if (a.kind != OperatorChain::Kind::Left || b.kind != OperatorChain::Kind::Left)
    throw PreconditionError("claim_step: both chains must be left operator chains");
  if (eps <= 0 || eps >= 1) throw PreconditionError("claim_step: need 0 < eps < 1");
  if (eta <= 0) throw PreconditionError("claim_step: eta must be positive");
  if (e0.embedding.codomain->id() != a.domain.top()->id())
    throw PreconditionError("claim_step: E0 is not a subspace of the top of A");
  if (i0.domain->id() != e0.space->id() || i0.codomain->id() != b.domain.top()->id())
    throw PreconditionError("claim_step: i0 must map E0 into the top of B");
  if (v.size() != a.domain.top()->dim() || vprime.size() != b.domain.top()->dim())
    throw PreconditionError("claim_step: target vectors live in the wrong spaces");

  // Common codomain stage for all operator comparisons.
  const int m = std::max(a.cod_stage.back(), b.cod_stage.back());
  if (a.codomain.stages[static_cast<size_t>(m)]->id() !=
      b.codomain.stages[static_cast<size_t>(m)]->id())
    throw PreconditionError("claim_step: the chains target different codomains");
  const LinMap pa = aligned_top_op(a, m);
  const LinMap pb = aligned_top_op(b, m);

  {
    EmbeddingCheck chk = certify_embedding(i0, eps);
    if (!chk.ok())
      throw PreconditionError("claim_step: i0 is not an eps-embedding",
                              chk.refutation ? std::optional<Vec>(chk.refutation->x)
                                             : std::nullopt);
  }
  const LinMap pi_e0 = compose(pa, e0.embedding);
  if (compose(pb, i0).matrix != pi_e0.matrix)
    throw PreconditionError("claim_step: pi' . i0 != pi on E0");

  // delta with (1+delta) delta ||v'|| < eta and 7 delta < eta.
  const Rational vpn = norm_of(b.domain.top(), vprime);
  Rational delta = forced_delta.value_or(
      rational_min(rational_min(eta / 8, eta / (4 * rational_max(Rational(1), vpn))),
                   Rational(1, 2)));
  if (delta <= 0 || (1 + delta) * delta * vpn >= eta || 7 * delta >= eta)
    throw PreconditionError("claim_step: delta too coarse for eta (need (1+d)d||v'|| < eta and 7d < eta)");

  // E0' = span(i0[E0], v') inside the top of B. The stage index is pinned
  // now: when a and b alias (homogeneity mode) the A-extension below moves
  // the shared top.
  const int b_anchor_stage = b.domain.top_index();
  Mat gen0p(b.domain.top()->dim(), i0.matrix.cols() + 1);
  gen0p.leftCols(i0.matrix.cols()) = i0.matrix;
  gen0p.col(i0.matrix.cols()) = vprime;
  Subspace e0p = subspace_space(b.domain.top(), independent_columns(gen0p));
  const LinMap i0_in = make_map(e0.space, e0p.space, e0p.coords * i0.matrix);
  const Vec vprime_coords = e0p.coords * vprime;
  const LinMap rho0 = compose(pb, e0p.embedding);

  // First gluing: W0 joins E0 to E0' with defect eps.
  AmalgamResult am1 = pushout_eps(i0_in, eps);
  const LinMap e1 = am1.i;
  const LinMap f1 = am1.j;
  const LinMap t0 = extend_operators(am1, pi_e0, rho0);

  // Realize W0 inside chain A over t0.
  const int a_top_before = a.domain.top_index();
  ExtensionOutcome outa = solve_extension_left(
      a, LeftExtensionProblem{e1, e0.embedding, a_top_before, t0, m});
  const LinMap g1 = outa.witness;
  const LinMap link_a = chain_link(a.domain, a_top_before, outa.result_stage);

  // E1 = span(E0, g1 f1 [E0'], v) inside the grown top of A.
  const int da = a.domain.top()->dim();
  Mat gen1(da, e0.embedding.matrix.cols() + e0p.space->dim() + 1);
  gen1.leftCols(e0.embedding.matrix.cols()) = link_a.matrix * e0.embedding.matrix;
  gen1.middleCols(e0.embedding.matrix.cols(), e0p.space->dim()) = g1.matrix * f1.matrix;
  gen1.col(gen1.cols() - 1) = link_a.matrix * v;
  Subspace e1sub = subspace_space(a.domain.top(), independent_columns(gen1));

  const LinMap e0_into_e1 =
      make_map(e0.space, e1sub.space, e1sub.coords * (link_a.matrix * e0.embedding.matrix));
  if (e1sub.embedding.matrix * e0_into_e1.matrix != link_a.matrix * e0.embedding.matrix)
    throw VerificationError("claim_step: E0 escaped the span of E1");
  const LinMap phi = make_map(e0p.space, e1sub.space, e1sub.coords * (g1.matrix * f1.matrix));
  if (e1sub.embedding.matrix * phi.matrix != g1.matrix * f1.matrix)
    throw VerificationError("claim_step: g1 f1 escaped the span of E1");
  {
    const Vec v_coords = e1sub.coords * (link_a.matrix * v);
    if (e1sub.embedding.matrix * v_coords != link_a.matrix * v)
      throw VerificationError("claim_step: v escaped the span of E1");
  }

  // Second gluing: W1 joins E0' to E1 along g1 f1 with defect delta.
  AmalgamResult am2 = pushout_eps(phi, delta);
  const LinMap f2 = am2.i;
  const LinMap e2 = am2.j;
  const LinMap pa_after = aligned_top_op(a, m);
  const LinMap t1 = extend_operators(am2, rho0, compose(pa_after, e1sub.embedding));

  // Realize W1 inside chain B over t1.
  ExtensionOutcome outb = solve_extension_left(
      b, LeftExtensionProblem{f2, e0p.embedding, b_anchor_stage, t1, m});
  const LinMap g2 = outb.witness;
  const LinMap link_b = chain_link(b.domain, b_anchor_stage, outb.result_stage);

  const LinMap i1 = compose(g2, e2);

  // Postconditions, all exact.
  {
    EmbeddingCheck chk = certify_embedding(i1, eta);
    if (!chk.ok()) throw VerificationError("claim_step: i1 fails its eta certificate");
  }
  const LinMap pb_after = aligned_top_op(b, m);
  if (compose(pb_after, i1).matrix != compose(pa_after, e1sub.embedding).matrix)
    throw VerificationError("claim_step: pi' . i1 != pi on E1");

  ClaimTrace trace;
  trace.eps = eps;
  trace.delta = delta;
  trace.eta = eta;
  trace.W0 = am1.Z;
  trace.W1 = am2.Z;
  trace.e1 = e1;
  trace.f1 = f1;
  trace.g1 = g1;
  trace.e2 = e2;
  trace.f2 = f2;
  trace.g2 = g2;
  trace.t0 = t0;
  trace.t1 = t1;

  trace.capture_preimage = phi.matrix * vprime_coords;
  {
    const Vec image = i1.matrix * trace.capture_preimage;
    const Vec target = link_b.matrix * vprime;
    trace.capture_defect = norm_of(b.domain.top(), (image - target).eval());
    if (trace.capture_defect > (1 + delta) * delta * vpn)
      throw VerificationError("claim_step: capture defect exceeds (1+d)d||v'||");
    if (trace.capture_defect >= eta)
      throw VerificationError("claim_step: capture defect reaches eta");
  }
  trace.restriction_distance = distance(compose(i1, e0_into_e1), compose(link_b, i0));
  if (trace.restriction_distance > eps + 7 * delta)
    throw VerificationError("claim_step: ||i1|E0 - i0|| exceeds eps + 7 delta");
  trace.intermediate_bound = distance(compose(e2, e0_into_e1), compose(f2, i0_in));
  if (trace.intermediate_bound > eps + 3 * delta)
    throw VerificationError("claim_step: intermediate estimate exceeds eps + 3 delta");

  return ClaimOutput{std::move(e1sub), i1, e0_into_e1, std::move(trace)};
}

BackForthResult build_almost_isometry(OperatorChain& a, OperatorChain& b, int steps,
                                      const BackForthOptions& opts) {
  if ((opts.seed_subspace.has_value()) != (opts.seed_map.has_value()))
    throw PreconditionError("build_almost_isometry: homogeneity mode needs both seed pieces");

  Subspace current = opts.seed_subspace
                         ? *opts.seed_subspace
                         : subspace_space(a.domain.top(), Mat(a.domain.top()->dim(), 0));
  LinMap i_cur = opts.seed_map ? *opts.seed_map : zero_map(current.space, b.domain.top());
  Rational eps_k = opts.seed_eps;
  if (eps_k <= 0 || eps_k >= 1)
    throw PreconditionError("build_almost_isometry: seed_eps must lie in (0,1)");

  // Seed basis and captured targets, tracked in current-top coordinates and
  // lifted along the links as the chains grow. The carrier of each step is
  // re-spanned from these, which keeps its dimension linear in the step
  // count (the full paper carrier doubles every step).
  Mat seed_in_top = current.embedding.matrix;
  std::vector<Vec> captured;

  BackForthResult out;
  for (int k = 0; k < steps; ++k) {
    const Rational eta_k = eps_k / 2;
    // Density targets alternate between stage generators of both sides.
    const Vec v = static_cast<size_t>(k) < opts.targets_a.size()
                      ? opts.targets_a[static_cast<size_t>(k)]
                      : Vec(Vec::Unit(a.domain.top()->dim(),
                                      k % std::max(1, a.domain.top()->dim())));
    const Vec vp = static_cast<size_t>(k) < opts.targets_b.size()
                       ? opts.targets_b[static_cast<size_t>(k)]
                       : Vec(Vec::Unit(b.domain.top()->dim(),
                                       k % std::max(1, b.domain.top()->dim())));

    const int a_pre = a.domain.top_index();
    ClaimOutput step = claim_step(a, b, current, i_cur, eps_k, v, vp, eta_k);
    const LinMap lift = chain_link(a.domain, a_pre, a.domain.top_index());

    LedgerRow row;
    row.step = k;
    row.eps_k = eps_k;
    row.eta_k = eta_k;
    row.delta_k = step.trace.delta;
    {
      EmbeddingCheck chk = certify_embedding(step.i1, eta_k);
      row.embedding_defect = chk.ok() ? rational_max(chk.cert->upper - 1, Rational(0)) : eta_k;
      out.verified = out.verified && chk.ok();
    }
    row.restriction_distance = step.trace.restriction_distance;
    row.restriction_bound = eps_k + eta_k;
    row.claim_bound = eps_k + 7 * step.trace.delta;
    row.intermediate_bound = step.trace.intermediate_bound;
    row.capture_defect = step.trace.capture_defect;
    out.verified = out.verified && row.restriction_distance <= row.claim_bound &&
                   row.restriction_distance <= row.restriction_bound &&
                   row.capture_defect < eta_k;
    row.trace_hash = fnv1a64_hex(describe_map(step.i1) + describe_map(step.trace.g1) +
                                 describe_map(step.trace.g2));
    out.ledger.push_back(std::move(row));

    seed_in_top = lift.matrix * seed_in_top;
    for (auto& t : captured) t = lift.matrix * t;
    captured.push_back(lift.matrix * v);

    if (k + 1 < steps) {
      // Prune the carrier: span(seed, captured targets) inside the new top.
      Mat gens(a.domain.top()->dim(), seed_in_top.cols() + static_cast<Eigen::Index>(captured.size()));
      gens.leftCols(seed_in_top.cols()) = seed_in_top;
      for (size_t j = 0; j < captured.size(); ++j)
        gens.col(seed_in_top.cols() + static_cast<Eigen::Index>(j)) = captured[j];
      Subspace pruned = subspace_space(a.domain.top(), independent_columns(gens));
      const Mat into_e1 = step.E1.coords * pruned.embedding.matrix;
      if (step.E1.embedding.matrix * into_e1 != pruned.embedding.matrix)
        throw VerificationError("build_almost_isometry: pruned carrier escaped E1");
      i_cur = make_map(pruned.space, b.domain.top(), step.i1.matrix * into_e1);
      current = std::move(pruned);
    } else {
      current = step.E1;
      i_cur = step.i1;
    }
    eps_k = eta_k;
  }
  out.domain = current;
  out.intertwiner = i_cur;
  out.seed_coords = make_map(
      opts.seed_subspace ? opts.seed_subspace->space : zero_space(), current.space,
      current.coords * seed_in_top);
  return out;
}

}  // namespace polyban
