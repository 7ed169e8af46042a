#ifndef POLYBAN_GEOMETRY_HPP
#define POLYBAN_GEOMETRY_HPP

#include <polyban/linalg.hpp>
#include <polyban/lp.hpp>

#include <functional>
#include <utility>
#include <vector>

namespace polyban {

class DimensionMismatchError : public std::runtime_error {
 public:
  explicit DimensionMismatchError(const std::string& what = "dimension mismatch")
      : std::runtime_error(what) {}
};

class UnboundedRegionError : public std::runtime_error {
 public:
  explicit UnboundedRegionError(const std::string& what =
                                    "functionals do not span the dual: region unbounded")
      : std::runtime_error(what) {}
};

class DegenerateHullError : public std::runtime_error {
 public:
  explicit DegenerateHullError(const std::string& what =
                                   "points span a proper subspace")
      : std::runtime_error(what) {}
};

class DimensionCapError : public std::runtime_error {
 public:
  explicit DimensionCapError(const std::string& what = "dimension cap exceeded")
      : std::runtime_error(what) {}
};

/// Process-wide default cap on the dimension of exact facet/vertex
/// enumeration. Conversions above the cap refuse instead of exploding.
int default_dim_cap();
void set_default_dim_cap(int cap);

/// Facet description of a symmetric polytope: each functional phi encodes
/// the two-sided constraint |phi(x)| <= 1. Stored deduplicated up to sign
/// and sorted, so equal polytope data compares equal.
struct HRep {
  int dim = 0;
  std::vector<RowVec> functionals;

  bool operator==(const HRep&) const = default;
};

/// Extreme points of a symmetric polytope, closed under negation, sorted.
struct VRep {
  int dim = 0;
  std::vector<Vec> vertices;

  bool operator==(const VRep&) const = default;
};

/// Canonicalizes (sign-dedup, drop zero rows, sort). Does not test
/// boundedness; see hrep_bounded.
HRep make_hrep(int dim, std::vector<RowVec> functionals);

/// Canonicalizes (dedup, negation closure, sort). With filter_extreme the
/// non-extreme points are removed, establishing the VRep invariant.
VRep make_vrep(int dim, std::vector<Vec> points, bool filter_extreme = true);

/// The described set is bounded iff the functionals span the dual.
bool hrep_bounded(const HRep& h);

struct LpMaxResult {
  Rational value;
  Vec witness;
};

/// Exact maximum of objective . x over {x : |phi(x)| <= 1 for all phi}.
/// Throws UnboundedRegionError / DimensionMismatchError.
LpMaxResult lp_max(const RowVec& objective, const HRep& h);

/// max objective . x over conv(vertices); solved as an LP in the hull
/// coefficients, no facet knowledge needed.
LpMaxResult lp_max_over_vrep(const RowVec& objective, const VRep& v);

/// Gauge (Minkowski functional) of conv(v.vertices) at x: the exact norm
/// value when the VRep is a unit ball. Throws if x is outside the span.
Rational vrep_gauge(const VRep& v, const Vec& x);

bool hrep_contains(const HRep& h, const Vec& x);
bool vrep_contains(const VRep& v, const Vec& x);

/// Is p in conv(points)? LP feasibility in the hull coefficients.
bool in_convex_hull(const std::vector<Vec>& points, const Vec& p, int dim);

/// Subset of the given points that are extreme in their convex hull.
std::vector<Vec> extreme_points(int dim, const std::vector<Vec>& points);

/// Exact vertex enumeration by the incremental double description method,
/// processing the symmetric constraint pairs one at a time from a seed
/// parallelotope. Requires boundedness and dim <= cap.
VRep hrep_to_vrep(const HRep& h, int dim_cap = default_dim_cap());

/// Exact facet enumeration via polarity: the facets of conv(V) are the
/// vertices of the polar body, which is handed back to hrep_to_vrep.
/// Throws DegenerateHullError when the points span a proper subspace.
HRep vrep_to_hrep(const VRep& v, int dim_cap = default_dim_cap());

/// Exact support-function oracle for a bounded symmetric full-dimensional
/// polytope K: returns max{sigma . x : x in K} together with a point of K
/// attaining it.
using SupportOracle = std::function<LpMaxResult(const RowVec& sigma)>;

/// Reconstructs K exactly from its support oracle: grows an inner hull of
/// oracle witnesses until every facet of the inner hull is confirmed as a
/// facet of K. Intended for sections of high-dimensional balls where K
/// itself lives in a small ambient dimension.
std::pair<VRep, HRep> polytope_from_oracle(int dim, const SupportOracle& oracle,
                                           int dim_cap = default_dim_cap());

}  // namespace polyban

#endif  // POLYBAN_GEOMETRY_HPP
