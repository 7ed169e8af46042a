#include <doctest.h>

#include <polyban/geometry.hpp>
#include <polyban/random.hpp>

#include "oracles.hpp"

using namespace polyban;

namespace {

RowVec rv2(const Rational& a, const Rational& b) {
  RowVec r(2);
  r << a, b;
  return r;
}

Vec v2(const Rational& a, const Rational& b) {
  Vec r(2);
  r << a, b;
  return r;
}

HRep square_hrep() { return make_hrep(2, {rv2(1, 0), rv2(0, 1)}); }
HRep cross_hrep() { return make_hrep(2, {rv2(1, 1), rv2(1, -1)}); }

// Random symmetric bounded H-rep with small entries.
HRep random_bounded_hrep(int dim, int facets, RationalRng& rng) {
  for (;;) {
    std::vector<RowVec> rows;
    for (int i = 0; i < facets; ++i) {
      RowVec r(dim);
      for (int j = 0; j < dim; ++j) r(j) = rng.small_rational(2, 2);
      rows.push_back(r);
    }
    HRep h = make_hrep(dim, rows);
    if (hrep_bounded(h) && static_cast<int>(h.functionals.size()) >= dim) return h;
  }
}

}  // namespace

TEST_CASE("lp_max on the square") {
  const HRep sq = square_hrep();
  auto r = lp_max(rv2(1, 0), sq);
  CHECK(r.value == 1);
  CHECK(r.witness(0) == 1);

  auto c = lp_max(rv2(1, 1), sq);
  CHECK(c.value == 2);
  CHECK(c.witness == v2(1, 1));
}

TEST_CASE("lp_max on the cross-polytope matches vertex enumeration") {
  const HRep cr = cross_hrep();
  // Oracle: the four vertices by brute force.
  auto verts = oracles::brute_force_vertices(cr);
  REQUIRE(verts.size() == 4);
  Rational best = 0;
  RowVec obj = rv2(1, 1);
  for (const auto& v : verts) best = rational_max(best, inner(obj, v));
  CHECK(best == 1);

  auto r = lp_max(obj, cr);
  CHECK(r.value == 1);
  CHECK(hrep_contains(cr, r.witness));
  CHECK(inner(obj, r.witness) == r.value);
}

TEST_CASE("lp_max rejects unbounded regions and bad arity") {
  HRep line = make_hrep(2, {rv2(1, 0)});
  CHECK_THROWS_AS(lp_max(rv2(0, 1), line), UnboundedRegionError);
  RowVec bad(3);
  bad << 1, 2, 3;
  CHECK_THROWS_AS(lp_max(bad, square_hrep()), DimensionMismatchError);
}

TEST_CASE("hrep_to_vrep on the square and cross-polytope") {
  auto sq = hrep_to_vrep(square_hrep());
  REQUIRE(sq.vertices.size() == 4);
  CHECK(vrep_contains(sq, v2(1, 1)));
  CHECK(vrep_contains(sq, v2(-1, 1)));
  for (const auto& v : sq.vertices) CHECK(rational_abs(v(0)) == 1);

  auto cr = hrep_to_vrep(cross_hrep());
  REQUIRE(cr.vertices.size() == 4);
  std::vector<Vec> expect{v2(-1, 0), v2(0, -1), v2(0, 1), v2(1, 0)};
  CHECK(cr.vertices == expect);
}

TEST_CASE("vrep_to_hrep examples") {
  SUBCASE("square from corners") {
    VRep corners = make_vrep(2, {v2(1, 1), v2(1, -1)});
    HRep h = vrep_to_hrep(corners);
    CHECK(h == square_hrep());
  }
  SUBCASE("pushout ball facets match the 2d brute-force hull") {
    std::vector<Vec> pts{v2(1, 0), v2(0, 1), v2(2, -2), v2(-1, 0), v2(0, -1), v2(-2, 2)};
    HRep h = vrep_to_hrep(make_vrep(2, pts));
    auto facets = oracles::brute_force_facets_2d(pts);
    REQUIRE(h.functionals.size() == facets.size());
    for (size_t i = 0; i < facets.size(); ++i) CHECK(h.functionals[i] == facets[i]);
  }
  SUBCASE("single symmetric pair in dim 1") {
    Vec v(1);
    v << Rational(3, 2);
    HRep h = vrep_to_hrep(make_vrep(1, {v}));
    REQUIRE(h.functionals.size() == 1);
    CHECK(h.functionals[0](0) == Rational(2, 3));
  }
  SUBCASE("degenerate hull rejected") {
    VRep flat = make_vrep(2, {v2(1, 1)});
    CHECK_THROWS_AS(vrep_to_hrep(flat), DegenerateHullError);
  }
}

TEST_CASE("random 3-dim round trip against the brute-force vertex oracle") {
  RationalRng rng(20240311);
  for (int trial = 0; trial < 12; ++trial) {
    HRep h = random_bounded_hrep(3, 6, rng);
    auto dd = hrep_to_vrep(h);
    auto brute = oracles::brute_force_vertices(h);
    // Brute force yields every basic feasible point, i.e. exactly the
    // extreme points; both lists are sorted canonical forms.
    auto brute_canon = make_vrep(3, brute, /*filter_extreme=*/false);
    REQUIRE(dd.vertices.size() == brute_canon.vertices.size());
    CHECK(dd.vertices == brute_canon.vertices);

    // Round trip describes the same set: mutual membership.
    HRep back = vrep_to_hrep(dd);
    for (const auto& v : dd.vertices) CHECK(hrep_contains(back, v));
    for (int s = 0; s < 10; ++s) {
      Vec x = rng.vector(3, 2, 3);
      CHECK(hrep_contains(h, x) == hrep_contains(back, x));
    }
  }
}

TEST_CASE("lp_max equals vertex maximum on dim <= 4 instances") {
  RationalRng rng(7);
  for (int dim = 1; dim <= 4; ++dim) {
    for (int trial = 0; trial < 6; ++trial) {
      HRep h = random_bounded_hrep(dim, dim + 2, rng);
      VRep v = hrep_to_vrep(h);
      RowVec obj(dim);
      for (int j = 0; j < dim; ++j) obj(j) = rng.small_rational(3, 2);
      Rational best = 0;
      for (const auto& p : v.vertices) best = rational_max(best, inner(obj, p));
      auto r = lp_max(obj, h);
      CHECK(r.value == best);
      CHECK(hrep_contains(h, r.witness));
      CHECK(inner(obj, r.witness) == r.value);
    }
  }
}

TEST_CASE("gauge over a VRep matches facet evaluation") {
  RationalRng rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    HRep h = random_bounded_hrep(3, 5, rng);
    VRep v = hrep_to_vrep(h);
    Vec x = rng.vector(3, 2, 2);
    Rational facet_norm = 0;
    for (const auto& f : h.functionals) facet_norm = rational_max(facet_norm, rational_abs(inner(f, x)));
    HRep exact = vrep_to_hrep(v);  // irredundant facets describe the same set
    Rational exact_norm = 0;
    for (const auto& f : exact.functionals) exact_norm = rational_max(exact_norm, rational_abs(inner(f, x)));
    CHECK(exact_norm == facet_norm);
    CHECK(vrep_gauge(v, x) == facet_norm);
  }
}

TEST_CASE("polytope_from_oracle reconstructs a ball from its support function") {
  RationalRng rng(4242);
  for (int trial = 0; trial < 6; ++trial) {
    HRep h = random_bounded_hrep(3, 5, rng);
    VRep v = hrep_to_vrep(h);
    SupportOracle oracle = [&](const RowVec& sigma) { return lp_max(sigma, h); };
    auto [rv, rh] = polytope_from_oracle(3, oracle);
    CHECK(rv.vertices == v.vertices);
    CHECK(rh == vrep_to_hrep(v));
  }
}

TEST_CASE("dimension cap honored") {
  RationalRng rng(5);
  HRep h = random_bounded_hrep(3, 4, rng);
  CHECK_THROWS_AS(hrep_to_vrep(h, 2), DimensionCapError);
}
