#ifndef POLYBAN_OPERATOR_HPP
#define POLYBAN_OPERATOR_HPP

#include <polyban/space.hpp>

namespace polyban {

/// A stated precondition failed; carries a witness vector when the failure
/// has one (e.g. the vector on which a map is expansive).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what, std::optional<Vec> witness = std::nullopt)
      : std::runtime_error(what), witness(std::move(witness)) {}
  std::optional<Vec> witness;
};

/// A constructed object failed its own postcondition check. Always a bug or
/// a tampered artifact, never a user error.
class VerificationError : public std::runtime_error {
 public:
  explicit VerificationError(const std::string& what, std::optional<Vec> witness = std::nullopt)
      : std::runtime_error(what), witness(std::move(witness)) {}
  std::optional<Vec> witness;
};

struct OpNormResult {
  Rational value;
  Vec arg;  // unit-ball vector attaining the value (zero vector for the zero norm)
};

/// Exact operator norm sup{||Tx|| : ||x|| <= 1} with an attaining ball
/// vector. Uses the domain ball vertices when available and otherwise one
/// LP per codomain facet over the domain ball.
OpNormResult op_norm_attained(const LinMap& t);
Rational op_norm(const LinMap& t);

/// ||f - g|| for maps with identical domain and codomain.
Rational distance(const LinMap& f, const LinMap& g);

/// g after f.
LinMap compose(const LinMap& g, const LinMap& f);

/// f restricted along a subspace embedding: f . sub.
LinMap restrict(const LinMap& f, const LinMap& sub);

bool same_map(const LinMap& f, const LinMap& g);

struct EmbeddingCert {
  Rational eps;
  Rational upper;        // exact op norm, <= 1 + eps
  Vec upper_arg;         // ball vector attaining it
  Rational lower_gauge;  // max over domain facets of sup{phi(x) : ||f x|| <= 1}, <= 1/(1-eps)
  Vec lower_arg;
  bool lower_vacuous = false;  // eps >= 1: no lower bound to check
};

struct EmbeddingRefutation {
  enum class Side { Upper, Lower };
  Side side;
  Vec x;              // concrete violating vector
  Rational x_norm;
  Rational fx_norm;
};

struct EmbeddingCheck {
  std::optional<EmbeddingCert> cert;
  std::optional<EmbeddingRefutation> refutation;
  bool ok() const { return cert.has_value(); }
};

/// Decides (1-eps)||x|| <= ||f(x)|| <= (1+eps)||x|| for all x, exactly.
/// The upper bound is one operator norm; the lower bound is the polytope
/// containment {x : ||f x|| <= 1} within (1/(1-eps)) * ball, one LP per
/// domain facet. Returns a certificate or a refuting vector.
EmbeddingCheck certify_embedding(const LinMap& f, const Rational& eps);

/// Recomputes both certificate quantities; false if anything moved.
bool reverify(const EmbeddingCert& cert, const LinMap& f);

/// Checks that the witness vector really violates one of the two
/// inequalities at tolerance eps.
bool reverify(const EmbeddingRefutation& ref, const LinMap& f, const Rational& eps);

struct LeftUniversalFactor {
  DirectSum sum;  // V (+)max W
  LinMap j;       // x -> (e(x), T(x)), isometric
  LinMap pi;      // projection onto W; pi . j = T
};

/// The projection construction witnessing left universality: given
/// non-expansive T: X -> W and isometric e: X -> V, embeds X into the max
/// sum so that the canonical projection factors T through it.
LeftUniversalFactor factor_left_universal(const LinMap& t, const LinMap& e);

/// Deterministic non-expansive map with exactly known norm (scaled so
/// op_norm = target unless the raw draw is zero).
LinMap random_nonexpansive_map(SpacePtr domain, SpacePtr codomain, std::uint64_t seed);

}  // namespace polyban

#endif  // POLYBAN_OPERATOR_HPP
