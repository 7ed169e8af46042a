#ifndef POLYBAN_BACKFORTH_HPP
#define POLYBAN_BACKFORTH_HPP

#include <polyban/chain.hpp>

namespace polyban {

/// Everything the one-step construction produced, with every bound
/// measured exactly so a verifier can replay the estimates.
struct ClaimTrace {
  Rational eps, delta, eta;
  SpacePtr W0, W1;
  LinMap e1, f1, g1, e2, f2, g2, t0, t1;
  Rational restriction_distance;  // ||i1|E0 - link . i0||, <= eps + 7 delta
  Rational intermediate_bound;    // ||e2|E0 - f2 . i0||, <= eps + 3 delta
  Rational capture_defect;        // ||i1(candidate) - link(v')|| < eta
  Vec capture_preimage;           // candidate in E1 coordinates
};

struct ClaimOutput {
  Subspace E1;         // subspace of the grown A-top containing E0 and v
  LinMap i1;           // E1 -> grown B-top, eta-embedding (exact at chain level)
  LinMap e0_into_e1;   // E0 -> E1 in subspace coordinates
  ClaimTrace trace;
};

/// One step of the uniqueness argument: glue E0 to its image side, extend
/// chain A to realize the glued space, glue back, extend chain B, and read
/// off the improved partial isometry i1. The internal delta is chosen so
/// that (1+delta) delta ||v'|| < eta and 7 delta < eta; a caller-forced
/// delta violating either bound is rejected.
ClaimOutput claim_step(OperatorChain& a, OperatorChain& b, const Subspace& e0,
                       const LinMap& i0, const Rational& eps, const Vec& v,
                       const Vec& vprime, const Rational& eta,
                       std::optional<Rational> forced_delta = std::nullopt);

struct LedgerRow {
  int step = 0;
  Rational eps_k, eta_k, delta_k;
  Rational embedding_defect;      // certified defect of i_{k+1} (0 at chain level)
  Rational restriction_distance;  // measured ||i_{k+1}|E_k - i_k||
  Rational restriction_bound;     // eps_k + eta_k, the 2^-k + 2^-k-1 ledger bound
  Rational claim_bound;           // eps_k + 7 delta_k
  Rational intermediate_bound;    // measured, <= eps_k + 3 delta_k
  Rational capture_defect;
  std::string trace_hash;
};

struct BackForthOptions {
  std::optional<Subspace> seed_subspace;  // homogeneity mode: X0 inside A.top
  std::optional<LinMap> seed_map;         // h : X0 -> B.top
  Rational seed_eps{1, 2};                // bookkeeping defect of the seed
  std::vector<Vec> targets_a, targets_b;  // optional explicit density targets
};

struct BackForthResult {
  std::vector<LedgerRow> ledger;
  Subspace domain;      // E_n inside the final A top
  LinMap intertwiner;   // i_n : E_n -> final B top
  LinMap seed_coords;   // seed X0 -> E_n coordinates (identity-span in plain mode)
  bool verified = true;
};

/// Iterates claim_step with eps_{k+1} = eta_k = eps_k / 2, alternating
/// density targets drawn from the stage generators of both sides (or the
/// supplied target lists). With seed_subspace/seed_map it runs in
/// homogeneity mode, steering the intertwiner toward the given isometry h.
BackForthResult build_almost_isometry(OperatorChain& a, OperatorChain& b, int steps,
                                      const BackForthOptions& opts = {});

}  // namespace polyban

#endif  // POLYBAN_BACKFORTH_HPP
