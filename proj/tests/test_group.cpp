#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symvp/group.hpp"
#include "symvp/sampling.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace symvp;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

Matrix rot(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

std::vector<GroupAction> presetGroups() {
  std::vector<GroupAction> gs;
  gs.push_back(GroupAction::trivial(3));
  gs.push_back(GroupAction::symmetric(2));
  gs.push_back(GroupAction::symmetric(3));
  gs.push_back(GroupAction::symmetric(5));
  gs.push_back(GroupAction::signedPermutations(3));
  gs.push_back(GroupAction::cyclicRotations(5));
  gs.push_back(GroupAction::so2Quadrature(64));
  return gs;
}

}  // namespace

TEST_CASE("preset sizes and weights") {
  CHECK(GroupAction::symmetric(3).size() == 6);
  CHECK(GroupAction::symmetric(5).size() == 120);
  CHECK(GroupAction::signedPermutations(3).size() == 48);
  CHECK(GroupAction::cyclicRotations(5).size() == 5);
  CHECK(GroupAction::so2Quadrature(64).size() == 64);
  for (const GroupAction& G : presetGroups()) {
    CHECK(G.weights().sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(G.weights().minCoeff() > 0.0);
  }
}

TEST_CASE("closure of a single 2pi/5 rotation generator has order 5") {
  // Derivation: powers of r = rot(2pi/5) are rot(2pi k/5), k = 0..4, and
  // r^5 = id; the closure must therefore contain exactly these 5 matrices.
  const GroupAction G =
      GroupAction::fromGenerators({rot(2.0 * std::numbers::pi / 5.0)}, NormSpec::l2());
  REQUIRE(G.size() == 5);
  for (int k = 0; k < 5; ++k) {
    const Matrix expect = rot(2.0 * std::numbers::pi * k / 5.0);
    bool found = false;
    for (const Matrix& g : G.elements())
      if ((g - expect).cwiseAbs().maxCoeff() < 1e-8) found = true;
    CHECK(found);
  }
}

TEST_CASE("closure cap rejects non-finite generator sets") {
  GroupOptions opts;
  opts.maxElements = 64;
  // Rotation by 1 radian generates an infinite subgroup of SO(2).
  CHECK_THROWS_AS(GroupAction::fromGenerators({rot(1.0)}, NormSpec::l2(), opts),
                  std::runtime_error);
}

TEST_CASE("exact finite validation catches broken element lists") {
  const Matrix id = Matrix::Identity(2, 2);
  // Missing identity.
  CHECK_THROWS_AS(GroupAction::exactFinite({rot(std::numbers::pi)}, NormSpec::l2()),
                  std::invalid_argument);
  // Not closed under product.
  CHECK_THROWS_AS(GroupAction::exactFinite({id, rot(std::numbers::pi / 5.0)}, NormSpec::l2()),
                  std::invalid_argument);
  // Non-invertible element.
  Matrix sing = Matrix::Zero(2, 2);
  sing(0, 0) = 1.0;
  CHECK_THROWS_AS(GroupAction::exactFinite({id, sing}, NormSpec::l2()), std::invalid_argument);
}

TEST_CASE("norm invariance is validated at construction") {
  const Matrix id = Matrix::Identity(2, 2);
  Matrix flip(2, 2);  // involution, not an l2 isometry
  flip << 0.0, 2.0, 0.5, 0.0;
  CHECK((flip * flip - id).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(GroupAction::exactFinite({id, flip}, NormSpec::l2()), std::invalid_argument);
  // The same matrices preserve the weighted norm with weights (1, 4).
  const GroupAction G =
      GroupAction::exactFinite({id, flip}, NormSpec::weightedL2(vec({1.0, 4.0})));
  CHECK(G.size() == 2);
}

TEST_CASE("permutation-invariant norms accept the symmetric group") {
  CHECK_NOTHROW(GroupAction::symmetric(3, NormSpec::l1()));
  CHECK_NOTHROW(GroupAction::symmetric(3, NormSpec::linf()));
  // Weights not constant on the coordinate orbit break invariance.
  CHECK_THROWS_AS(GroupAction::symmetric(3, NormSpec::weightedL2(vec({1.0, 2.0, 3.0}))),
                  std::invalid_argument);
  CHECK_NOTHROW(GroupAction::symmetric(3, NormSpec::weightedL2(vec({2.0, 2.0, 2.0}))));
}

TEST_CASE("reynolds operator is idempotent for every preset") {
  for (const GroupAction& G : presetGroups()) {
    const Matrix p = G.reynolds();
    CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("symmetrized points are invariant") {
  Rng rng(99);
  for (const GroupAction& G : presetGroups()) {
    for (int s = 0; s < 1000; ++s) {
      const Vector x = uniformBox(rng, G.dimension(), 3.0);
      const Vector xb = G.symmetrize(x);
      CHECK(G.invarianceResidual(xb) <= 1e-9);
      // Symmetrizing twice changes nothing.
      CHECK((G.symmetrize(xb) - xb).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("symmetrization averages the benchmark point") {
  const GroupAction G = GroupAction::symmetric(3);
  const Vector xb = G.symmetrize(vec({0.3, 0.1, 0.2}));
  CHECK(xb[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(xb[1] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(xb[2] == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("orbit of (1,0) under C5") {
  // Expected orbit: (cos(2pi k/5), sin(2pi k/5)), k = 0..4.
  const GroupAction G = GroupAction::cyclicRotations(5);
  const auto orbit = G.orbit(vec({1.0, 0.0}));
  REQUIRE(orbit.size() == 5);
  for (int k = 0; k < 5; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 5.0;
    bool found = false;
    for (const Vector& p : orbit)
      if (std::abs(p[0] - std::cos(a)) < 1e-10 && std::abs(p[1] - std::sin(a)) < 1e-10)
        found = true;
    CHECK(found);
  }
  // Orbit of an invariant point collapses to one element.
  CHECK(G.orbit(vec({0.0, 0.0})).size() == 1);
}

TEST_CASE("fixed subspace of the symmetric group is the diagonal") {
  const auto fs = GroupAction::symmetric(3).fixedSubspace();
  REQUIRE(fs.dim == 1);
  const Vector b = fs.basis.col(0);
  const double ref = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(std::abs(b[0]) - ref) < 1e-12);
  CHECK(b[0] == doctest::Approx(b[1]).epsilon(1e-12));
  CHECK(b[1] == doctest::Approx(b[2]).epsilon(1e-12));
}

TEST_CASE("fixed subspace of signed permutations is zero") {
  // Derivation: the Reynolds average over all sign flips cancels every
  // coordinate, so P = 0 and X_G = {0}.
  const auto fs = GroupAction::signedPermutations(3).fixedSubspace();
  CHECK(fs.dim == 0);
  CHECK(fs.projector.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("fixed subspace dimensions across presets") {
  CHECK(GroupAction::trivial(3).fixedSubspace().dim == 3);
  CHECK(GroupAction::symmetric(5).fixedSubspace().dim == 1);
  CHECK(GroupAction::cyclicRotations(5).fixedSubspace().dim == 0);
  CHECK(GroupAction::so2Quadrature(64).fixedSubspace().dim == 0);
}

TEST_CASE("adjoint pairing <x, g* u> = <g x, u>") {
  Rng rng(7);
  for (const GroupAction& G : presetGroups()) {
    const GroupAction Gstar = G.adjoint();
    REQUIRE(Gstar.size() == G.size());
    for (int s = 0; s < 50; ++s) {
      const Vector x = uniformBox(rng, G.dimension(), 2.0);
      const Vector u = uniformBox(rng, G.dimension(), 2.0);
      for (std::size_t i = 0; i < G.size(); ++i) {
        const double lhs = x.dot(Gstar.apply(i, u));
        const double rhs = G.apply(i, x).dot(u);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("adjoint of l1-isometric group carries the linf norm") {
  const GroupAction G = GroupAction::signedPermutations(3, NormSpec::l1());
  const GroupAction Gstar = G.adjoint();
  CHECK(Gstar.norm().kind() == NormKind::LInf);
}

TEST_CASE("so2 quadrature averages trig monomials exactly") {
  // Circle averages of cos^a sin^b vanish for odd exponents and equal
  // (a-1)!!(b-1)!!/(a+b)!! for even ones; the N-point rule is exact for
  // a+b < N.  At x = (r, 0): avg_k p(R_k x) = r^(a+b) * m(a, b).
  auto doubleFactorial = [](int n) {
    double r = 1.0;
    for (int k = n; k >= 2; k -= 2) r *= k;
    return r;
  };
  const GroupAction G = GroupAction::so2Quadrature(64);
  const double r = 1.3;
  const Vector x = vec({r, 0.0});
  for (int a = 0; a <= 10; ++a) {
    for (int b = 0; a + b <= 10; ++b) {
      double avg = 0.0;
      for (std::size_t i = 0; i < G.size(); ++i) {
        const Vector gx = G.apply(i, x);
        avg += G.weights()[i] * std::pow(gx[0], a) * std::pow(gx[1], b);
      }
      double expect = 0.0;
      if (a % 2 == 0 && b % 2 == 0)
        expect = std::pow(r, a + b) * doubleFactorial(a - 1) * doubleFactorial(b - 1) /
                 doubleFactorial(a + b);
      CHECK(std::abs(avg - expect) <= 1e-10);
    }
  }
}

TEST_CASE("symmetrize rejects dimension mismatch") {
  const GroupAction G = GroupAction::symmetric(3);
  CHECK_THROWS_AS(G.symmetrize(vec({1.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(G.orbit(vec({1.0, 2.0})), std::invalid_argument);
}
