#include <doctest.h>

#include <polyban/backforth.hpp>

#include "corpus.hpp"

using namespace polyban;

namespace {

// A small left-Gurarii chain over the reals whose schedule is parametrized
// by which coordinate of the sup plane the target projects to.
OperatorChain twin_chain(int flavor, const std::string& label) {
  auto R = corpus::reals();
  auto Sup = corpus::sup_plane();
  Mat incm(2, 1);
  incm << 1, 0;
  LinMap inc{R, Sup, incm};
  Mat tm(1, 2);
  if (flavor == 0)
    tm << 1, 0;
  else
    tm << 0, 1;
  std::vector<LeftCatalogEntry> catalog{{inc, LinMap{Sup, R, tm}, 0}};
  return build_left_gurarii_chain(R, catalog, 4, label);
}

}  // namespace

TEST_CASE("claim_step on twin chains") {
  OperatorChain a = twin_chain(0, "A");
  OperatorChain b = twin_chain(1, "B");
  REQUIRE(a.domain.stages.size() > 1);
  REQUIRE(b.domain.stages.size() > 1);

  // E0 = the canonical copy of S = reals inside the top of A (stage-0 links).
  const LinMap ra = chain_right_inverse(a);
  Subspace e0 = subspace_space(a.domain.top(), ra.matrix);
  // i0 = the same canonical copy inside B: exact and intertwining.
  const LinMap rb = chain_right_inverse(b);
  LinMap i0 = make_map(e0.space, b.domain.top(), rb.matrix * e0.coords * ra.matrix);

  const Rational eps(1, 4);
  const Rational eta(1, 8);
  Vec v = Vec::Unit(a.domain.top()->dim(), a.domain.top()->dim() - 1);
  Vec vp = Vec::Unit(b.domain.top()->dim(), b.domain.top()->dim() - 1);

  ClaimOutput out = claim_step(a, b, e0, i0, eps, v, vp, eta);

  // (1) v lands in E1 and v' is eta-captured.
  CHECK(out.trace.capture_defect < eta);
  // (2) the restriction ledger, exactly as estimated in the proof.
  CHECK(out.trace.restriction_distance <= eps + 7 * out.trace.delta);
  CHECK(out.trace.intermediate_bound <= eps + 3 * out.trace.delta);
  CHECK(out.trace.restriction_distance < eps + eta);
  // i1 is exact at chain level and intertwines exactly.
  CHECK(certify_embedding(out.i1, 0).ok());
  const int m = std::max(a.cod_stage.back(), b.cod_stage.back());
  CHECK(compose(aligned_top_op(b, m), out.i1).matrix ==
        compose(aligned_top_op(a, m), out.E1.embedding).matrix);
  // every piece of the proof diagram is recorded
  CHECK(out.trace.W0->dim() > 0);
  CHECK(out.trace.W1->dim() > 0);
  CHECK(op_norm(out.trace.t0) <= 1);
  CHECK(op_norm(out.trace.t1) <= 1);
}

TEST_CASE("claim_step surfaces a coarse forced delta") {
  OperatorChain a = twin_chain(0, "A2");
  OperatorChain b = twin_chain(1, "B2");
  Subspace e0 = subspace_space(a.domain.top(), chain_right_inverse(a).matrix);
  LinMap i0 = make_map(e0.space, b.domain.top(),
                       chain_right_inverse(b).matrix * e0.coords *
                           chain_right_inverse(a).matrix);
  Vec v = Vec::Zero(a.domain.top()->dim());
  Vec vp = Vec::Zero(b.domain.top()->dim());
  // 7 delta >= eta
  CHECK_THROWS_AS(
      claim_step(a, b, e0, i0, Rational(1, 4), v, vp, Rational(1, 8), Rational(1, 50)),
      PreconditionError);
}

TEST_CASE("claim_step rejects a non-intertwining seed") {
  OperatorChain a = twin_chain(0, "A3");
  OperatorChain b = twin_chain(1, "B3");
  Subspace e0 = subspace_space(a.domain.top(), chain_right_inverse(a).matrix);
  // i0 = 2 * canonical copy: not an eps-embedding and breaks pi' . i0 = pi
  LinMap i0 = make_map(e0.space, b.domain.top(),
                       (2 * chain_right_inverse(b).matrix * e0.coords *
                        chain_right_inverse(a).matrix)
                           .eval());
  Vec v = Vec::Zero(a.domain.top()->dim());
  Vec vp = Vec::Zero(b.domain.top()->dim());
  CHECK_THROWS_AS(claim_step(a, b, e0, i0, Rational(1, 4), v, vp, Rational(1, 8)),
                  PreconditionError);
}

TEST_CASE("build_almost_isometry on twin chains") {
  OperatorChain a = twin_chain(0, "A4");
  OperatorChain b = twin_chain(1, "B4");
  BackForthResult res = build_almost_isometry(a, b, 2, {});
  CHECK(res.verified);
  REQUIRE(res.ledger.size() == 2);
  for (const auto& row : res.ledger) {
    CHECK(row.embedding_defect == 0);  // chain-level steps are exact
    CHECK(row.restriction_distance <= row.claim_bound);
    CHECK(row.restriction_distance <= row.restriction_bound);
    CHECK(row.capture_defect < row.eta_k);
    CHECK(row.eps_k + row.eta_k == row.restriction_bound);
  }
  CHECK(res.ledger[1].eps_k == res.ledger[0].eta_k);
  // final intertwiner: exact embedding, exact operator identity
  CHECK(certify_embedding(res.intertwiner, 0).ok());
  const int m = std::max(a.cod_stage.back(), b.cod_stage.back());
  CHECK(compose(aligned_top_op(b, m), res.intertwiner).matrix ==
        compose(aligned_top_op(a, m), res.domain.embedding).matrix);
}

TEST_CASE("build_almost_isometry determinism") {
  OperatorChain a1 = twin_chain(0, "A5");
  OperatorChain b1 = twin_chain(1, "B5");
  BackForthResult r1 = build_almost_isometry(a1, b1, 2, {});
  OperatorChain a2 = twin_chain(0, "A5");
  OperatorChain b2 = twin_chain(1, "B5");
  BackForthResult r2 = build_almost_isometry(a2, b2, 2, {});
  REQUIRE(r1.ledger.size() == r2.ledger.size());
  for (size_t k = 0; k < r1.ledger.size(); ++k)
    CHECK(r1.ledger[k].trace_hash == r2.ledger[k].trace_hash);
  CHECK(r1.intertwiner.matrix == r2.intertwiner.matrix);
}

TEST_CASE("homogeneity mode steers toward a seed isometry") {
  auto R = corpus::reals();
  // Chain with a kernel copy of the line: P kills the glued summand.
  OperatorChain oc = make_left_chain(R, "H");
  LeftExtensionProblem grow{zero_map(zero_space(), R),
                            zero_map(zero_space(), oc.domain.top()), 0, zero_map(R, R), 0};
  ExtensionOutcome out = solve_extension_left(oc, grow);
  REQUIRE(out.grew);

  // X0 = the kernel copy; h = -id on it is an isometry with P . h = P|X0 = 0.
  Subspace x0 = subspace_space(oc.domain.top(), out.witness.matrix);
  LinMap h = make_map(x0.space, oc.domain.top(), (-out.witness.matrix).eval());
  REQUIRE(compose(oc.top_op(), h).matrix == compose(oc.top_op(), x0.embedding).matrix);

  const int seed_stage = oc.domain.top_index();
  BackForthOptions opts;
  opts.seed_subspace = x0;
  opts.seed_map = h;
  opts.seed_eps = Rational(1, 16);
  BackForthResult res = build_almost_isometry(oc, oc, 2, opts);
  CHECK(res.verified);

  // The approximant restricted to X0 stays within the summed ledger bound
  // of h, and that bound is below the requested tolerance 1/4.
  const LinMap approx = compose(res.intertwiner, res.seed_coords);
  const LinMap h_lifted = compose(chain_link(oc.domain, seed_stage, oc.domain.top_index()), h);
  Rational budget = 0;
  for (const auto& row : res.ledger) budget += row.restriction_distance;
  CHECK(distance(approx, h_lifted) <= budget);
  CHECK(budget < Rational(1, 4));
}
