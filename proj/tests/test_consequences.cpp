#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "symvp/catalog.hpp"
#include "symvp/consequences.hpp"
#include "symvp/sampling.hpp"

using namespace symvp;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

ConvexBody hexagon() {
  // Swap-invariant hexagon whose <(1,1), .> maximum sits on the edge between
  // (2,1) and (1,2), crossing the diagonal at (1.5, 1.5).
  return ConvexBody::hull(
      {vec2(2, 1), vec2(1, 2), vec2(-1, 1), vec2(1, -1), vec2(-2, -1), vec2(-1, -2)});
}

}  // namespace

TEST_CASE("palais-smale sequence shrinks gradients along eps = 1/n runs") {
  ScalarFunction f = catalogObjective("sumsq_plus_one", 3);
  GroupAction G = GroupAction::symmetric(3);
  PalaisSmaleResult r = palaisSmaleSequence(f, G, vec3(0.9, -0.4, 0.1), 12);
  REQUIRE(r.succeeded);
  REQUIRE(r.entries.size() == 12);
  double prev = kInf;
  for (const PalaisSmaleEntry& e : r.entries) {
    CHECK(e.gradDualNorm <= 1.0 / e.n + 1e-6);
    CHECK(e.cloudMargin >= -1e-8);
    CHECK(G.invarianceResidual(e.point) <= 1e-8);
    CHECK(e.value <= prev + 1e-9);
    prev = e.value;
  }
  CHECK(r.infimumEstimate == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("palais-smale needs a gradient to report stationarity") {
  ScalarFunction f = catalogObjective("max_coord", 2);
  CHECK_THROWS_AS(palaisSmaleSequence(f, GroupAction::symmetric(2), vec2(0, 0)),
                  std::invalid_argument);
}

TEST_CASE("dense range: quadratic growth recovers the target exactly") {
  ScalarFunction f = catalogObjective("half_sumsq", 2);
  GroupAction G = GroupAction::symmetric(2);
  DenseRangeProbe r = denseRangeProbe(f, G, vec2(0.6, 0.6), 1.0, -0.5);
  REQUIRE(r.succeeded);
  CHECK(r.growthMargin >= -1e-9);
  CHECK(r.residual <= 1e-6);
  // grad(half_sumsq) = x, so the preimage of the target is the target.
  CHECK((r.bestPoint - vec2(0.6, 0.6)).norm() <= 1e-4);
}

TEST_CASE("dense range: cosh gradients invert through asinh") {
  ScalarFunction f = catalogObjective("cosh_sum_centered", 2);
  GroupAction G = GroupAction::symmetric(2);
  DenseRangeProbe r = denseRangeProbe(f, G, vec2(0.3, 0.3), 1.0, -1.0);
  REQUIRE(r.succeeded);
  CHECK(r.residual <= 1e-6);
  const double t = std::asinh(0.3);
  CHECK((r.bestPoint - vec2(t, t)).norm() <= 1e-4);
}

TEST_CASE("dense range preconditions are enforced") {
  GroupAction G = GroupAction::symmetric(2);
  ScalarFunction f = catalogObjective("half_sumsq", 2);

  DenseRangeProbe notFixed = denseRangeProbe(f, G, vec2(1.0, 0.0), 1.0, -0.5);
  CHECK_FALSE(notFixed.succeeded);
  CHECK(notFixed.note.find("not fixed") != std::string::npos);

  DenseRangeProbe tooBig = denseRangeProbe(f, G, vec2(3.0, 3.0), 1.0, -0.5);
  CHECK_FALSE(tooBig.succeeded);
  CHECK(tooBig.note.find("dual ball") != std::string::npos);

  ScalarFunction bump = catalogObjective("gauss_bump", 2);
  DenseRangeProbe noGrowth = denseRangeProbe(bump, G, vec2(0.2, 0.2), 1.0, 0.0);
  CHECK_FALSE(noGrowth.succeeded);
  CHECK(noGrowth.note.find("growth") != std::string::npos);
}

TEST_CASE("eps-subdifferential membership on sampled grids") {
  ScalarFunction f = catalogObjective("max_coord", 2);

  SubgradientCheck exact = epsSubdifferentialCheck(f, vec2(0, 0), vec2(0.5, 0.5), 0.0);
  CHECK(exact.member);
  CHECK(exact.worstSlack >= -1e-12);

  // <(0.6,0.6), (t,t)> = 1.2 t outruns max(t,t) + 0.1 already at t = 1.
  SubgradientCheck inflated = epsSubdifferentialCheck(f, vec2(0, 0), vec2(0.6, 0.6), 0.1);
  CHECK_FALSE(inflated.member);
  CHECK(inflated.worstSlack <= -0.0999);

  SubgradientCheck corner = epsSubdifferentialCheck(f, vec2(0, 0), vec2(1.0, 0.0), 0.0);
  CHECK(corner.member);

  SubgradientCheck overshoot = epsSubdifferentialCheck(f, vec2(0, 0), vec2(1.1, 0.0), 0.1);
  CHECK_FALSE(overshoot.member);

  CHECK_THROWS_AS(epsSubdifferentialCheck(f, vec2(0, 0), vec2(0, 0), -1.0),
                  std::invalid_argument);

  ScalarFunction box("unit box indicator", 2,
                     [](const Vector& x) { return x.lpNorm<Eigen::Infinity>() <= 1.0 ? 0.0 : kInf; },
                     FunctionFlags{true, true, true, true});
  CHECK_THROWS_AS(epsSubdifferentialCheck(box, vec2(5, 5), vec2(0, 0), 0.1),
                  std::invalid_argument);
}

TEST_CASE("subgradients of a dual-ball distance term fill the ball exactly") {
  const double lambda = 0.7;
  const Vector z = vec2(0.3, -0.2);
  ScalarFunction dist("scaled distance", 2,
                      [lambda, z](const Vector& x) { return lambda * (x - z).norm(); },
                      FunctionFlags{true, true, true, true});
  NormSpec l2 = NormSpec::l2();
  Rng rng(424242);
  for (int i = 0; i < 100; ++i) {
    Vector inside = gaussianDirection(rng, 2) * lambda * 0.999 *
                    std::sqrt(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    REQUIRE(l2.dual(inside) <= lambda);
    SubgradientCheck in = epsSubdifferentialCheck(dist, z, inside, 0.0, nullptr, 100, 5 + i);
    CHECK(in.member);
  }
  for (int i = 0; i < 20; ++i) {
    Vector outside = gaussianDirection(rng, 2) * lambda *
                     std::uniform_real_distribution<double>(1.4, 2.0)(rng);
    SubgradientCheck out = epsSubdifferentialCheck(dist, z, outside, 0.0, nullptr, 500, 9 + i);
    CHECK_FALSE(out.member);
  }
}

TEST_CASE("approximate subgradients slide to exact ones: stationary smooth case") {
  ScalarFunction f = catalogObjective("sumsq", 2);
  GroupAction G = GroupAction::symmetric(2);
  BronstedRockafellarResult r =
      bronstedRockafellar(f, G, vec2(1, 1), vec2(2, 2), 0.05, 0.5);
  REQUIRE(r.succeeded);
  CHECK((r.point - vec2(1, 1)).norm() <= 1e-9);
  CHECK((r.functional - vec2(2, 2)).norm() <= 1e-9);
  CHECK(r.pointDistance <= 1e-9);
  CHECK(r.functionalDistance <= 1e-9);
  CHECK(r.membershipMargin >= -1e-10);
  CHECK(r.pointInvarianceResidual <= 1e-9);
  CHECK(r.functionalFixedResidual <= 1e-9);
}

TEST_CASE("approximate subgradients slide to exact ones: moving smooth case") {
  // (1.8,1.8) is an eps-subgradient of ||.||^2 at (1,1) exactly when
  // eps >= 0.02; the exact subgradient lives at (0.9,0.9).
  ScalarFunction f = catalogObjective("sumsq", 2);
  GroupAction G = GroupAction::symmetric(2);
  BronstedRockafellarResult r =
      bronstedRockafellar(f, G, vec2(1, 1), vec2(1.8, 1.8), 0.05, 0.5);
  REQUIRE(r.succeeded);
  CHECK(r.pointDistance <= 0.05 / 0.5 + 1e-8);
  CHECK(r.functionalDistance <= 0.5 + 1e-8);
  CHECK(r.membershipMargin >= -1e-8);
  CHECK(r.inner.certificate.inequalityVerified);
}

TEST_CASE("approximate subgradients slide to exact ones: kink of |x|") {
  ScalarFunction f = catalogObjective("abs_first", 1);
  GroupAction G = GroupAction::signedPermutations(1);
  Vector x0(1), u0(1);
  x0 << 0.4;
  u0 << 0.3;
  BronstedRockafellarResult r = bronstedRockafellar(f, G, x0, u0, 0.1, 0.25);
  REQUIRE(r.succeeded);
  // Symmetrization kills both the start and the functional.
  CHECK(std::abs(r.point[0]) <= 1e-9);
  CHECK(std::abs(r.functional[0]) <= 1e-9);
  CHECK(r.membershipMargin >= -1e-10);
}

TEST_CASE("approximate subgradients slide to exact ones: nonsmooth max") {
  ScalarFunction f = catalogObjective("max_coord", 2);
  GroupAction G = GroupAction::symmetric(2);
  BronstedRockafellarResult r =
      bronstedRockafellar(f, G, vec2(0.2, 0.2), vec2(0.5, 0.5), 0.1, 0.4);
  REQUIRE(r.succeeded);
  CHECK((r.point - vec2(0.2, 0.2)).norm() <= 1e-8);
  CHECK(r.functionalDistance <= 0.4 + 1e-8);
  // The subgradients of max at a diagonal point average to (1/2, 1/2).
  CHECK(std::abs(r.functional.sum() - 1.0) <= 1e-8);
  CHECK(r.membershipMargin >= -1e-8);
  CHECK(r.functionalFixedResidual <= 1e-10);
}

TEST_CASE("approximate subgradient precondition failures are reported") {
  ScalarFunction f = catalogObjective("sumsq", 2);
  GroupAction G = GroupAction::symmetric(2);
  BronstedRockafellarResult r =
      bronstedRockafellar(f, G, vec2(1, 1), vec2(3.0, 0.0), 0.05, 0.5);
  CHECK_FALSE(r.succeeded);
  CHECK(r.note.find("precondition") != std::string::npos);

  CHECK_THROWS_AS(bronstedRockafellar(f, G, vec2(1, 1), vec2(2, 2), -0.1, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(bronstedRockafellar(f, G, vec2(1, 1), vec2(2, 2), 0.1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("support points: hexagon carries (1,1) at the invariant edge midpoint") {
  GroupAction G = GroupAction::symmetric(2);
  BishopPhelpsResult r = bishopPhelps(hexagon(), G, vec2(1, 1), 0.25);
  REQUIRE(r.succeeded);
  CHECK((r.supportPoint - vec2(1.5, 1.5)).norm() <= 1e-6);
  CHECK(r.perturbationNorm <= 1e-6);  // (1,1) already supports the hexagon
  CHECK(r.supportMargin >= -1e-8);
  CHECK(r.functionalFixedResidual <= 1e-10);
  CHECK(r.inner.certificate.inequalityVerified);
}

TEST_CASE("support points: functional constant on an invariant polytope") {
  GroupAction G = GroupAction::symmetric(3);
  ConvexBody C = ConvexBody::hull({vec3(2, 1, 0), vec3(2, 0, 1), vec3(1, 2, 0), vec3(0, 2, 1),
                                   vec3(1, 0, 2), vec3(0, 1, 2)});
  BishopPhelpsResult r = bishopPhelps(C, G, vec3(1, 1, 1), 0.1);
  REQUIRE(r.succeeded);
  CHECK((r.supportPoint - vec3(1, 1, 1)).norm() <= 1e-6);
  CHECK(r.supportMargin >= -1e-8);
}

TEST_CASE("support point search validates its inputs") {
  GroupAction G = GroupAction::symmetric(2);
  CHECK_THROWS_AS(bishopPhelps(hexagon(), G, vec2(1, 0), 0.25), std::invalid_argument);
  CHECK_THROWS_AS(bishopPhelps(hexagon(), G, vec2(1, 1), 0.0), std::invalid_argument);

  Matrix A(2, 2);
  A << -1, 0, 0, -1;
  Vector b = Vector::Zero(2);
  CHECK_THROWS_AS(bishopPhelps(ConvexBody::halfspaces(A, b), G, vec2(1, 1), 0.25),
                  std::invalid_argument);

  ConvexBody skew = ConvexBody::hull({vec2(2, 1), vec2(-1, -2)});
  CHECK_THROWS_AS(bishopPhelps(skew, G, vec2(1, 1), 0.25), std::invalid_argument);
}

TEST_CASE("dual description: bump gradients span the fixed dual subspace") {
  ScalarFunction bump2 = catalogObjective("gauss_bump", 2);
  DualDescriptionResult swap = dualDescriptionCheck(bump2, GroupAction::symmetric(2));
  CHECK(swap.consistent);
  CHECK(swap.transformConvex);
  CHECK(swap.gradientSpanDim == 1);
  CHECK(swap.fixedDualDim == 1);
  CHECK(swap.maxPrincipalAngle <= 1e-8);

  ScalarFunction bump3 = catalogObjective("gauss_bump", 3);
  DualDescriptionResult sym3 = dualDescriptionCheck(bump3, GroupAction::symmetric(3));
  CHECK(sym3.consistent);
  CHECK(sym3.gradientSpanDim == 1);

  DualDescriptionResult full = dualDescriptionCheck(bump2, GroupAction::trivial(2));
  CHECK(full.consistent);
  CHECK(full.gradientSpanDim == 2);

  DualDescriptionResult rot = dualDescriptionCheck(bump2, GroupAction::so2Quadrature(16));
  CHECK(rot.consistent);
  CHECK(rot.gradientSpanDim == 0);
  CHECK(rot.fixedDualDim == 0);
  CHECK(rot.note.find("trivial") != std::string::npos);
}

TEST_CASE("dual description flags transforms that are not group convex") {
  ScalarFunction f = catalogObjective("sumsq_plus_one", 2);
  DualDescriptionResult r = dualDescriptionCheck(f, GroupAction::symmetric(2));
  CHECK_FALSE(r.transformConvex);
  CHECK_FALSE(r.consistent);
  CHECK(r.note.find("transform") != std::string::npos);

  ScalarFunction m = catalogObjective("max_coord", 2);
  CHECK_THROWS_AS(dualDescriptionCheck(m, GroupAction::symmetric(2)), std::invalid_argument);
}
