#include <doctest.h>

#include <polyban/amalgam.hpp>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace polyban;

namespace {

Vec v1(const Rational& a) {
  Vec r(1);
  r << a;
  return r;
}

Vec v2(const Rational& a, const Rational& b) {
  Vec r(2);
  r << a, b;
  return r;
}

}  // namespace

TEST_CASE("pushout_eps of the identity on the reals at eps = 1/2") {
  auto R = corpus::reals();
  LinMap f = identity_map(R);
  AmalgamResult am = pushout_eps(f, Rational(1, 2));

  // oracle for ||(1,-1)||: minimize |1-w| + |-1+w| + |w|/2 over w
  const Rational o = oracles::pl_min_1d({{{Rational(1)}, {Rational(-1)}, 1},
                                         {{Rational(-1)}, {Rational(1)}, 1},
                                         {{Rational(0)}, {Rational(1)}, Rational(1, 2)}});
  CHECK(o == Rational(1, 2));
  CHECK(norm_of(am.Z, v2(1, -1)) == Rational(1, 2));
  CHECK(norm_of(am.Z, v2(1, 0)) == 1);
  CHECK(norm_of(am.Z, v2(0, 1)) == 1);
  CHECK(norm_of(am.Z, v2(1, 1)) == 2);

  // ball vertices conv{(+-1,0),(0,+-1),+-(2,-2)}
  const VRep& ball = am.Z->vrep();
  VRep expect = make_vrep(2, {v2(1, 0), v2(0, 1), v2(2, -2)});
  CHECK(ball == expect);

  CHECK(am.glue_defect == Rational(1, 2));
  REQUIRE(am.i_cert);
  REQUIRE(am.j_cert);
  CHECK(reverify(*am.i_cert, am.i));
  CHECK(reverify(*am.j_cert, am.j));
}

TEST_CASE("pushout_eps edge cases") {
  auto R = corpus::reals();
  SUBCASE("zero-dimensional X") {
    LinMap f = zero_map(zero_space(), R);
    AmalgamResult am = pushout_eps(f, Rational(1, 4));
    CHECK(am.Z->id() == R->id());
    CHECK(certify_embedding(am.j, 0).ok());
  }
  SUBCASE("zero map into the zero space rejected") {
    LinMap f = zero_map(R, zero_space());
    CHECK_THROWS_AS(pushout_eps(f, Rational(1, 2)), PreconditionError);
  }
  SUBCASE("eps = 0 rejected") {
    CHECK_THROWS_AS(pushout_eps(identity_map(R), 0), PreconditionError);
  }
}

TEST_CASE("pushout_eps glue distance and formula oracle on a random corpus") {
  RationalRng rng(808);
  const Rational epses[3] = {Rational(1, 8), Rational(1, 4), Rational(1, 2)};
  for (int trial = 0; trial < 6; ++trial) {
    const Rational eps = epses[trial % 3];
    SpacePtr X = random_space(1 + static_cast<int>(rng.below(2)), 3, rng.next_u64());
    SpacePtr filler = random_space(1, 2, rng.next_u64());
    auto emb = corpus::random_eps_embedding(X, filler, eps, rng.next_u64());
    AmalgamResult am = pushout_eps(emb.f, eps);

    CHECK(am.i_cert);
    CHECK(am.j_cert);
    CHECK(am.glue_defect <= eps);

    for (int s = 0; s < 5; ++s) {
      Vec x = rng.vector(X->dim(), 2, 2);
      Vec y = rng.vector(emb.target->dim(), 2, 2);
      Vec zx = Vec::Zero(am.Z->dim());
      zx.head(X->dim()) = x;
      zx.tail(emb.target->dim()) = y;
      CHECK(norm_of(am.Z, zx) == corpus::star_formula_lp(emb.f, eps, x, y));
    }
  }
}

TEST_CASE("extend_operators on the reals example") {
  auto R = corpus::reals();
  AmalgamResult am = pushout_eps(identity_map(R), Rational(1, 2));

  SUBCASE("zero operators give the zero extension") {
    LinMap z = zero_map(R, R);
    LinMap t = extend_operators(am, z, z);
    CHECK(t.matrix.isZero());
  }
  SUBCASE("identities glue to the sum of coordinates") {
    LinMap t = extend_operators(am, identity_map(R), identity_map(R));
    // |x + y| at the ball vertex (2,-2) is 0
    CHECK((t.matrix * v2(2, -2)).isZero());
    CHECK(op_norm(t) <= 1);
    CHECK(compose(t, am.i).matrix == identity_map(R).matrix);
    CHECK(compose(t, am.j).matrix == identity_map(R).matrix);
  }
  SUBCASE("incompatible operators rejected") {
    LinMap mi{R, R, -Mat::Identity(1, 1)};
    CHECK_THROWS_AS(extend_operators(am, mi, identity_map(R)), PreconditionError);
  }
}

TEST_CASE("pushout_exact examples") {
  auto R = corpus::reals();
  auto Sup = corpus::sup_plane();

  SUBCASE("zero-dimensional E gives the l1 sum") {
    LinMap g = zero_map(zero_space(), Sup);
    LinMap h = zero_map(zero_space(), R);
    AmalgamResult am = pushout_exact(g, h);
    CHECK(am.Z->dim() == 3);
    Vec p(3);
    p << 1, 1, 1;
    CHECK(norm_of(am.Z, p) == 2);  // sup-norm part + |1|
    CHECK(am.i_cert);
    CHECK(am.j_cert);
  }
  SUBCASE("E = X with g the identity collapses onto Y") {
    LinMap g = identity_map(R);
    LinMap h{R, Sup, Mat::Zero(2, 1)};
    Mat m(2, 1);
    m << 1, 0;  // h = isometric inclusion
    h.matrix = m;
    AmalgamResult am = pushout_exact(g, h);
    CHECK(am.Z->dim() == 2);
    // class of (x, 0) has norm ||h(x)||
    RationalRng rng(3);
    for (int s = 0; s < 4; ++s) {
      const Rational x = rng.small_rational(3, 2);
      CHECK(norm_of(am.Z, (am.i.matrix * v1(x)).eval()) ==
            norm_of(Sup, (h.matrix * v1(x)).eval()));
    }
    CHECK(am.i.matrix == compose(am.j, h).matrix);
  }
  SUBCASE("gluing the line into the sup plane along the first coordinate") {
    Mat gm(2, 1);
    gm << 1, 0;
    LinMap g{R, Sup, gm};  // E = reals -> X = sup plane
    LinMap h = identity_map(R);
    AmalgamResult am = pushout_exact(g, h);
    CHECK(am.Z->dim() == 2);
    // class of ((0,0),1): oracle minimizes max(|t|, 0) + |1 - t| = |t| + |1-t| over t
    oracles::AffineBlock b1{{Rational(0)}, {Rational(1)}, 1};
    oracles::AffineBlock b2{{Rational(1)}, {Rational(-1)}, 1};
    CHECK(oracles::pl_min_1d({b1, b2}) == 1);
    CHECK(norm_of(am.Z, (am.j.matrix * v1(1)).eval()) == 1);
    REQUIRE(am.j_cert);
    CHECK(reverify(*am.j_cert, am.j));
    REQUIRE(am.i_cert);  // h is isometric, so i is too
  }
  SUBCASE("non-isometric g rejected") {
    Mat gm(1, 1);
    gm << Rational(1, 2);
    CHECK_THROWS_AS(pushout_exact(LinMap{R, R, gm}, identity_map(R)), PreconditionError);
  }
}

TEST_CASE("pushout_exact with both legs isometric is a two-sided amalgam") {
  RationalRng rng(616);
  for (int trial = 0; trial < 5; ++trial) {
    SpacePtr E = random_space(1, 2, rng.next_u64());
    SpacePtr FX = random_space(1, 2, rng.next_u64());
    SpacePtr FY = random_space(1 + static_cast<int>(rng.below(2)), 3, rng.next_u64());
    // isometric legs: first-block embeddings into max sums
    DirectSum sx = direct_sum_max(E, FX);
    DirectSum sy = direct_sum_max(E, FY);
    AmalgamResult am = pushout_exact(sx.emb_first, sy.emb_first);
    REQUIRE(am.i_cert);
    REQUIRE(am.j_cert);
    CHECK(reverify(*am.i_cert, am.i));
    CHECK(reverify(*am.j_cert, am.j));
    CHECK(compose(am.i, sx.emb_first).matrix == compose(am.j, sy.emb_first).matrix);
  }
}

TEST_CASE("induce_operator on exact pushouts") {
  auto R = corpus::reals();
  auto Sup = corpus::sup_plane();
  Mat gm(2, 1);
  gm << 1, 0;
  LinMap g{R, Sup, gm};
  LinMap h = identity_map(R);
  AmalgamResult am = pushout_exact(g, h);
  // a = second coordinate on Sup, b = 0: a.g = 0 = b.h fails -> use a with a.g = b.h
  Mat arow(1, 2);
  arow << 0, 1;
  LinMap a{Sup, R, arow};
  LinMap b = zero_map(R, R);
  CHECK(inner(arow.row(0), gm.col(0)) == 0);  // compatibility a.g = 0 = b.h
  LinMap t = induce_operator(am, a, b);
  CHECK(compose(t, am.i).matrix == a.matrix);
  CHECK(compose(t, am.j).matrix == b.matrix);

  LinMap bad{R, R, Mat::Identity(1, 1)};
  CHECK_THROWS_AS(induce_operator(am, a, bad), PreconditionError);
}

TEST_CASE("correct_to_exact") {
  auto R = corpus::reals();
  auto Sup = corpus::sup_plane();

  // V = sup plane, S = reals, P = second coordinate, r(s) = (0, s)
  Mat pm(1, 2);
  pm << 0, 1;
  LinMap P{Sup, R, pm};
  Mat rm(2, 1);
  rm << 0, 1;
  LinMap r{R, Sup, rm};

  SUBCASE("already exact input is returned unchanged") {
    // X = reals, X0 = {0}, T = id, f(x) = (x, x)
    Mat fm(2, 1);
    fm << 1, 1;
    CorrectionInput in{P, r, zero_map(zero_space(), Sup), identity_map(R), LinMap{R, Sup, fm},
                       zero_map(zero_space(), R), Mat::Identity(1, 1), Rational(1, 4)};
    CorrectionResult out = correct_to_exact(in);
    CHECK(out.fprime.matrix == fm);
    for (const auto& w : out.corrections) CHECK(w.isZero());
  }
  SUBCASE("the slanted witness is straightened") {
    const Rational eps(1, 4);
    const Rational dhat(1, 8);  // delta for this instance is eps (M = 1, |A| = 1)
    Mat fm(2, 1);
    fm << 1, Rational(1) - dhat;  // f(x) = (x, (1 - dhat) x)
    CorrectionInput in{P, r, zero_map(zero_space(), Sup), identity_map(R), LinMap{R, Sup, fm},
                       zero_map(zero_space(), R), Mat::Identity(1, 1), eps};
    CorrectionResult out = correct_to_exact(in);
    CHECK(out.delta == eps);
    REQUIRE(out.corrections.size() == 1);
    CHECK(out.corrections[0](0) == -dhat);  // w_1 = P(f(1)) - T(1)
    Mat expect(2, 1);
    expect << 1, 1;  // f'(1) = (1, 1-dhat) - (0, -dhat)
    CHECK(out.fprime.matrix == expect);
    CHECK(compose(P, out.fprime).matrix == Mat::Identity(1, 1));
    CHECK(out.cert.upper == 1);  // f' is isometric here
  }
  SUBCASE("distance precondition enforced") {
    Mat fm(2, 1);
    fm << 1, Rational(1, 3);  // P.f - T has norm 2/3 > delta
    CorrectionInput in{P, r, zero_map(zero_space(), Sup), identity_map(R), LinMap{R, Sup, fm},
                       zero_map(zero_space(), R), Mat::Identity(1, 1), Rational(1, 4)};
    CHECK_THROWS_AS(correct_to_exact(in), PreconditionError);
  }
  SUBCASE("nontrivial X0 is pinned exactly") {
    // X = sup plane, X0 = first axis, V = sup plane, e = inclusion
    Mat incm(2, 1);
    incm << 1, 0;
    LinMap inc{R, Sup, incm};
    LinMap e{R, Sup, incm};
    LinMap T{Sup, R, pm};  // T = second coordinate
    // f perturbs the second basis vector slightly
    const Rational eta(1, 16);
    Mat fm(2, 2);
    fm << 1, eta, 0, 1;
    Mat comp(2, 1);
    comp << 0, 1;
    CorrectionInput in{P, r, e, T, LinMap{Sup, Sup, fm}, inc, comp, Rational(1, 2)};
    CorrectionResult out = correct_to_exact(in);
    CHECK(compose(out.fprime, inc).matrix == e.matrix);
    CHECK(compose(P, out.fprime).matrix == T.matrix);
    CHECK(reverify(out.cert, out.fprime));
  }
}
