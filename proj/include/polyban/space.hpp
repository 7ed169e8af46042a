#ifndef POLYBAN_SPACE_HPP
#define POLYBAN_SPACE_HPP

#include <polyban/geometry.hpp>

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace polyban {

class SeminormError : public std::runtime_error {
 public:
  explicit SeminormError(const std::string& what =
                             "functionals span a proper subspace: the gauge is only a seminorm")
      : std::runtime_error(what) {}
};

class EmptyFunctionalsError : public std::runtime_error {
 public:
  explicit EmptyFunctionalsError()
      : std::runtime_error("no functionals given for a positive-dimensional space") {}
};

/// A finite-dimensional normed space with a polyhedral unit ball, carried
/// in facet and/or vertex form. At least one representation is always
/// present; the other is computed on demand (under the dimension cap) and
/// cached under a single-writer lock. Instances are immutable otherwise and
/// freely shared.
class Space {
 public:
  Space(std::string id, int dim, std::optional<HRep> h, std::optional<VRep> v,
        std::vector<std::string> labels = {});

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool has_hrep() const;
  bool has_vrep() const;
  const HRep* hrep_if_present() const;
  const VRep* vrep_if_present() const;

  /// Facet form; converts from vertices when needed (DimensionCapError past
  /// the cap).
  const HRep& hrep(int dim_cap = default_dim_cap()) const;
  /// Vertex form; converts from facets when needed.
  const VRep& vrep(int dim_cap = default_dim_cap()) const;

 private:
  std::string id_;
  int dim_;
  std::vector<std::string> labels_;
  mutable std::mutex mu_;
  mutable std::optional<HRep> h_;
  mutable std::optional<VRep> v_;
};

using SpacePtr = std::shared_ptr<const Space>;

/// An exact rational linear map between two spaces. matrix is
/// codomain.dim x domain.dim.
struct LinMap {
  SpacePtr domain;
  SpacePtr codomain;
  Mat matrix;
};

LinMap make_map(SpacePtr domain, SpacePtr codomain, Mat matrix);
LinMap identity_map(SpacePtr x);
LinMap zero_map(SpacePtr domain, SpacePtr codomain);
Vec apply(const LinMap& f, const Vec& x);

/// Validates boundedness and wraps the facet data in a Space. Throws
/// EmptyFunctionalsError / SeminormError.
SpacePtr make_space(HRep ball, std::vector<std::string> labels = {}, std::string id = "");

/// Space from a spanning symmetric vertex set (the natural form for balls
/// produced by gluing constructions).
SpacePtr make_space_from_vertices(VRep ball, std::vector<std::string> labels = {},
                                  std::string id = "");

/// The zero-dimensional space.
SpacePtr zero_space();

/// Exact norm: max |phi(x)| over facets when available, otherwise the gauge
/// LP over the vertex hull.
Rational norm_of(const Space& X, const Vec& x);
inline Rational norm_of(const SpacePtr& X, const Vec& x) { return norm_of(*X, x); }

struct DirectSum {
  SpacePtr space;
  LinMap emb_first, emb_second;   // isometric embeddings
  LinMap proj_first, proj_second; // non-expansive projections
};

/// X (+) Y with ||(x,y)|| = max(||x||, ||y||).
DirectSum direct_sum_max(SpacePtr X, SpacePtr Y);

/// X (+)_1 Y with ||(x,y)|| = ||x|| + ||y||.
DirectSum direct_sum_l1(SpacePtr X, SpacePtr Y);

struct Quotient {
  SpacePtr space;
  LinMap map;      // surjective, non-expansive
  Mat section;     // right inverse of map.matrix
  bool zero_quotient = false;  // kernel was the whole space
};

/// Z / span(kernel_basis) with the exact quotient norm, realized by
/// projecting the ball vertices. kernel_basis columns must be independent.
Quotient quotient_space(SpacePtr Z, const Mat& kernel_basis, std::string id = "");

struct Subspace {
  SpacePtr space;      // carries the inherited norm
  LinMap embedding;    // isometric by construction
  Mat coords;          // left inverse: coords * embedding.matrix = I
};

/// The subspace spanned by the (independent) columns of basis, with the
/// restricted norm. Facet-based ambients pull facets back exactly;
/// vertex-only ambients are reconstructed through the support oracle.
Subspace subspace_space(SpacePtr ambient, const Mat& basis, std::string id = "");

struct BasisConstant {
  SpacePtr space;
  Mat basis;       // columns
  Rational M;      // max coordinate magnitude over the unit ball
  Vec witness;     // ball vertex attaining it
};

/// Exact constant M with max_a |lambda_a(x)| <= M for all ||x|| <= 1,
/// attained at a ball vertex.
BasisConstant basis_constant(SpacePtr X, const Mat& basis);

/// eps / (M * |A|): the perturbation threshold that turns pointwise basis
/// closeness into operator-norm closeness.
Rational delta_for_eps(SpacePtr X, const Mat& basis, const Rational& eps);

/// Deterministic random space with a bounded symmetric facet description;
/// regenerates until the requested facet count survives canonicalization.
SpacePtr random_space(int dim, int facet_count, std::uint64_t seed);

}  // namespace polyban

#endif  // POLYBAN_SPACE_HPP
