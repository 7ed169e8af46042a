#ifndef POLYBAN_AMALGAM_HPP
#define POLYBAN_AMALGAM_HPP

#include <polyban/operator.hpp>

namespace polyban {

/// A glued space Z with its two canonical embeddings, the data needed to
/// re-verify the construction, and (once extended) the induced operator
/// into a common target.
struct AmalgamResult {
  SpacePtr Z;
  LinMap i;  // X -> Z
  LinMap j;  // Y -> Z
  Rational eps;  // gluing tolerance; 0 for the exact pushout

  std::optional<LinMap> f;         // eps mode: the eps-embedding X -> Y that was glued
  std::optional<LinMap> g, h;      // exact mode: the legs E -> X, E -> Y
  std::optional<LinMap> quotient;  // exact mode: X (+)_1 Y -> Z
  Mat section;                     // exact mode: quotient.matrix * section = I

  std::optional<LinMap> t;  // glued operator Z -> S, when extended

  // Certificates. Direct embedding certificates exist whenever the domain
  // facets are available; the exact-mode premises (g isometric, ||h|| <= 1)
  // are always certified on the small leg and justify the structural claim
  // in high dimension.
  std::optional<EmbeddingCert> i_cert, j_cert;
  std::optional<EmbeddingCert> g_cert, h_cert;
  Rational h_norm{0};
  Rational glue_defect{0};  // eps mode: distance(j . f, i), <= eps
};

/// The gluing norm on X (+) Y along an eps-embedding f: unit ball
/// conv( B_X x 0, 0 x B_Y, +-(1/eps) (v, -f(v)) ). Both canonical
/// embeddings are isometric and distance(j . f, i) <= eps. The sign
/// convention keeps those conclusions literally true for the inf-formula
/// ||(x,y)|| = inf{ ||x-w|| + ||y+f(w)|| + eps ||w|| }.
AmalgamResult pushout_eps(const LinMap& f, const Rational& eps);

/// Glues non-expansive pi: X -> S, rho: Y -> S with ||rho . f - pi|| <= eps
/// into t(x, y) = pi(x) + rho(y), certified non-expansive on Z, with
/// t . i = pi and t . j = rho exactly. Stores t in the result.
LinMap extend_operators(AmalgamResult& result, const LinMap& pi, const LinMap& rho);

/// The exact pushout (X (+)_1 Y) / {(g(e), -h(e))} for an isometric g and
/// non-expansive h. j is isometric; i is non-expansive, isometric when h
/// is; i . g = j . h exactly.
AmalgamResult pushout_exact(const LinMap& g, const LinMap& h, std::string z_id = "");

/// Induces the operator Z -> S from a: X -> S, b: Y -> S with
/// a . g = b . h exactly (exact mode only). The returned t satisfies
/// t . i = a, t . j = b and op_norm(t) = max(op_norm(a), op_norm(b)).
LinMap induce_operator(const AmalgamResult& result, const LinMap& a, const LinMap& b);

struct CorrectionInput {
  LinMap P;          // V -> S
  LinMap r;          // S -> V, right inverse: P . r = id, ||r|| <= 1
  LinMap e;          // X0 -> V, isometric, P . e = T . inclusion exactly
  LinMap T;          // X -> S
  LinMap f;          // X -> V, the delta-embedding to correct
  LinMap inclusion;  // X0 -> X, isometric
  Mat complement;    // dim X x (dim X - dim X0); [inclusion | complement] is the adapted basis
  Rational eps;
};

struct CorrectionResult {
  LinMap fprime;
  EmbeddingCert cert;           // eps-embedding certificate for fprime
  std::vector<Vec> corrections; // w_a = P(f(a)) - T(a) per adapted basis vector (zero on X0)
  Rational delta;               // the threshold eps / (M |A|) that was enforced
};

/// Turns an approximate witness into an exact one: pins f on X0 to e,
/// subtracts r(P(f(a)) - T(a)) on the remaining basis vectors, and returns
/// f' with f'|X0 = e and P . f' = T as exact identities, certified as an
/// eps-embedding. Preconditions are enforced with witnesses at the stated
/// threshold delta = eps / (M |A|).
CorrectionResult correct_to_exact(const CorrectionInput& in);

}  // namespace polyban

#endif  // POLYBAN_AMALGAM_HPP
