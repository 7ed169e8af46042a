#ifndef POLYBAN_CHAIN_HPP
#define POLYBAN_CHAIN_HPP

#include <polyban/amalgam.hpp>

#include <deque>

namespace polyban {

/// One satisfied extension request, with everything a verifier needs to
/// re-check the witness without trusting construction-time state.
struct ChainLogEntry {
  std::string kind;  // "space" | "left" | "two-sided"
  LinMap inclusion;  // X0 -> X
  LinMap anchor;     // X0 -> stages[anchor_stage]
  int anchor_stage = 0;
  LinMap witness;  // X -> stages[result_stage]
  int result_stage = 0;
  bool grew = false;

  // operator-mode extras
  std::optional<LinMap> target;  // T
  int target_stage = 0;
  std::optional<LinMap> cod_inclusion, cod_anchor, op_restriction, cod_witness;
  int cod_anchor_stage = 0, cod_result_stage = 0;
};

/// An increasing sequence of spaces glued by isometric links.
struct Chain {
  std::string label;
  std::vector<SpacePtr> stages;
  std::vector<LinMap> links;  // links[n] : stages[n] -> stages[n+1]
  std::vector<ChainLogEntry> log;

  const SpacePtr& top() const { return stages.back(); }
  int top_index() const { return static_cast<int>(stages.size()) - 1; }
};

Chain make_chain(SpacePtr g0, std::string label = "G");

/// Composed link stages[from] -> stages[to] (identity when from == to).
LinMap chain_link(const Chain& c, int from, int to);

struct SpaceExtensionProblem {
  LinMap inclusion;  // X0 -> X, isometric
  LinMap anchor;     // f0 : X0 -> stages[anchor_stage], isometric
  int anchor_stage = 0;
};

struct ExtensionOutcome {
  LinMap witness;  // X -> stages[result_stage], isometric, witness . inclusion = link . anchor
  int result_stage = 0;
  bool grew = false;
};

/// Realizes one instance of the extension property exactly: glues X onto
/// the top stage along the anchor by the exact pushout. No growth when
/// X0 = X.
ExtensionOutcome solve_extension_space(Chain& chain, const SpaceExtensionProblem& prob);

/// A chain of non-expansive operators P_n : V_n -> S_{m_n} (left mode) or
/// Omega_n : V_n -> W_n (two-sided mode) intertwining the links exactly.
struct OperatorChain {
  enum class Kind { Left, TwoSided };
  Kind kind = Kind::Left;
  Chain domain;
  Chain codomain;  // the fixed target chain (left) or the growing W side (two-sided)
  std::vector<LinMap> ops;        // ops[n] : domain.stages[n] -> codomain.stages[cod_stage[n]]
  std::vector<int> cod_stage;
  std::vector<ChainLogEntry> log;

  const LinMap& top_op() const { return ops.back(); }
};

/// Left chain seeded with V_0 = S_0 and P_0 = id; every later stage keeps a
/// canonical isometric right inverse of P over S_0 (the composed links).
OperatorChain make_left_chain(Chain s_chain, std::string label = "V");
OperatorChain make_left_chain(SpacePtr s, std::string label = "V");

OperatorChain make_two_sided_chain(SpacePtr v0, SpacePtr w0, Mat omega0,
                                   std::string label = "U");

/// P_top aligned to codomain stage m (composing with codomain links).
LinMap aligned_top_op(const OperatorChain& oc, int m);

/// Composed domain links from stage 0; for a left chain seeded with
/// P_0 = id over a fixed S this is an isometric right inverse of the top
/// operator.
LinMap chain_right_inverse(const OperatorChain& oc);

struct LeftExtensionProblem {
  LinMap inclusion;  // X0 -> X, isometric
  LinMap anchor;     // e : X0 -> V_n, isometric, P_n . e = T|X0 exactly
  int anchor_stage = 0;
  LinMap target;  // T : X -> S_m, non-expansive
  int target_stage = 0;
};

/// Exact left extension: V_{n+1} = pushout along the inclusion, the new
/// operator P_{n+1}(class(x, v)) = T(x) + P_n(v). The witness f satisfies
/// f|X0 = link . e and P_{n+1}. f = T exactly.
ExtensionOutcome solve_extension_left(OperatorChain& oc, const LeftExtensionProblem& prob);

struct TwoSidedExtensionProblem {
  LinMap dom_inclusion;    // X0 -> X
  LinMap cod_inclusion;    // Y0 -> Y
  LinMap op_restriction;   // T0 : X0 -> Y0 with T . dom_inclusion = cod_inclusion . T0
  LinMap target;           // T : X -> Y, non-expansive
  LinMap dom_anchor;       // i : X0 -> V_n
  int dom_anchor_stage = 0;
  LinMap cod_anchor;  // j : Y0 -> W_n
  int cod_anchor_stage = 0;
};

struct TwoSidedOutcome {
  LinMap dom_witness;  // i-hat : X -> V_new
  LinMap cod_witness;  // j-hat : Y -> W_new
  int dom_stage = 0, cod_stage = 0;
};

/// Exact two-sided extension: both sides grow by exact pushouts and the new
/// operator satisfies Omega . i-hat = j-hat . T exactly.
TwoSidedOutcome solve_extension_two_sided(OperatorChain& oc, const TwoSidedExtensionProblem& prob);

// ---- builders ------------------------------------------------------------

/// Round-robin scheduler over a catalog of inclusion problems. Anchors
/// bootstrap from the zero space and cascade: each solved request registers
/// its witness as an anchor for every entry expecting that space.
Chain build_gurarii_chain(SpacePtr g0, const std::vector<LinMap>& catalog, int steps,
                          std::string label = "G");

struct LeftCatalogEntry {
  LinMap inclusion;  // X0 -> X
  LinMap target;     // T : X -> S_m
  int target_stage = 0;
};

OperatorChain build_left_gurarii_chain(Chain s_chain, const std::vector<LeftCatalogEntry>& catalog,
                                       int steps, std::string label = "V");
OperatorChain build_left_gurarii_chain(SpacePtr s, const std::vector<LeftCatalogEntry>& catalog,
                                       int steps, std::string label = "V");

struct TwoSidedCatalogEntry {
  LinMap dom_inclusion;   // X0 -> X
  LinMap cod_inclusion;   // Y0 -> Y
  LinMap op_restriction;  // T0 : X0 -> Y0
  LinMap target;          // T : X -> Y
};

OperatorChain build_universal_chain(SpacePtr v0, SpacePtr w0, Mat omega0,
                                    const std::vector<TwoSidedCatalogEntry>& catalog, int steps,
                                    std::string label = "U");

// ---- verification ---------------------------------------------------------

struct ChainCheck {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(std::string why) {
    ok = false;
    failures.push_back(std::move(why));
  }
};

/// Re-verifies every link (non-expansive, norm-preserving on ball vertices,
/// premises of the gluing lemma re-certified) and every logged witness
/// (direct embedding certificate plus the exact restriction identity).
ChainCheck verify_chain(const Chain& c);

/// verify_chain on the domain plus exact intertwining and operator-norm
/// bounds for every stage operator, and the operator identities of every
/// logged request.
ChainCheck verify_operator_chain(const OperatorChain& oc);

struct BatteryVerdict {
  bool pass = false;
  int stage = -1;         // stage of the satisfying witness
  std::string note;
};

struct GurariiReport {
  std::vector<BatteryVerdict> verdicts;
  bool all_pass = true;
};

/// Tests extension-property instances against the log: a battery problem
/// passes when some logged witness solves it within eps (exact witnesses
/// pass every eps >= 0).
GurariiReport check_gurarii(const Chain& c, const std::vector<SpaceExtensionProblem>& battery,
                            const Rational& eps);
GurariiReport check_gurarii(const OperatorChain& oc,
                            const std::vector<LeftExtensionProblem>& battery,
                            const Rational& eps);

}  // namespace polyban

#endif  // POLYBAN_CHAIN_HPP
