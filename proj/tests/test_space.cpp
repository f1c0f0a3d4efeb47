#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symvp/sampling.hpp"
#include "symvp/space.hpp"

#include <cmath>

using namespace symvp;

namespace {
Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}
}  // namespace

TEST_CASE("norm values on a fixed vector") {
  const Vector x = vec({3.0, -4.0, 0.0});
  CHECK(NormSpec::l1()(x) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(NormSpec::l2()(x) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(NormSpec::linf()(x) == doctest::Approx(4.0).epsilon(1e-15));
  // weighted l2 with weights (1, 1/4, 9): sqrt(9 + 4) = sqrt(13)
  const NormSpec w = NormSpec::weightedL2(vec({1.0, 0.25, 9.0}));
  CHECK(w(x) == doctest::Approx(std::sqrt(13.0)).epsilon(1e-15));
}

TEST_CASE("norm axioms on random vectors") {
  Rng rng(11);
  const NormSpec specs[] = {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(),
                            NormSpec::weightedL2(vec({0.5, 2.0, 1.5, 0.25}))};
  for (const NormSpec& n : specs) {
    for (int s = 0; s < 200; ++s) {
      const Vector x = uniformBox(rng, 4, 3.0);
      const Vector y = uniformBox(rng, 4, 3.0);
      const double lam = 0.1 + 2.0 * s / 200.0;
      CHECK(n(x) >= 0.0);
      CHECK(n(lam * x) == doctest::Approx(lam * n(x)).epsilon(1e-12));
      CHECK(n(x + y) <= n(x) + n(y) + 1e-12);
    }
    CHECK(n(Vector::Zero(4)) == 0.0);
  }
}

TEST_CASE("holder inequality for dual pairs") {
  Rng rng(23);
  const NormSpec specs[] = {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(),
                            NormSpec::weightedL2(vec({0.5, 2.0, 1.5, 0.25, 3.0}))};
  for (const NormSpec& n : specs) {
    for (int s = 0; s < 1000; ++s) {
      const Vector x = uniformBox(rng, 5, 2.0);
      const Vector u = uniformBox(rng, 5, 2.0);
      CHECK(std::abs(u.dot(x)) <= n.dual(u) * n(x) + 1e-12);
    }
  }
}

TEST_CASE("holder is tight for each dual pair") {
  // l1 primal: pick u aligned with one coordinate sign pattern.
  const NormSpec n1 = NormSpec::l1();
  const Vector x1 = vec({0.0, -2.0, 0.0});
  const Vector u1 = vec({1.0, -3.0, 2.0});
  CHECK(u1.dot(x1) == doctest::Approx(n1.dual(u1) * n1(x1)).epsilon(1e-14));

  const NormSpec n2 = NormSpec::l2();
  const Vector x2 = vec({1.0, 2.0, -1.0});
  CHECK(x2.dot(x2) == doctest::Approx(n2.dual(x2) * n2(x2)).epsilon(1e-14));

  // weighted: u_i = w_i x_i achieves equality.
  const Vector w = vec({0.5, 2.0, 4.0});
  const NormSpec nw = NormSpec::weightedL2(w);
  const Vector xw = vec({1.0, -1.0, 0.5});
  const Vector uw = w.cwiseProduct(xw);
  CHECK(uw.dot(xw) == doctest::Approx(nw.dual(uw) * nw(xw)).epsilon(1e-12));
}

TEST_CASE("dual of the dual returns the original norm") {
  Rng rng(5);
  const NormSpec specs[] = {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(),
                            NormSpec::weightedL2(vec({0.5, 2.0, 1.5}))};
  for (const NormSpec& n : specs) {
    const NormSpec dd = n.dualSpec().dualSpec();
    for (int s = 0; s < 100; ++s) {
      const Vector x = uniformBox(rng, 3, 2.0);
      CHECK(dd(x) == doctest::Approx(n(x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("weighted norm rejects bad weights") {
  CHECK_THROWS_AS(NormSpec::weightedL2(vec({1.0, 0.0})), std::invalid_argument);
  CHECK_THROWS_AS(NormSpec::weightedL2(vec({1.0, -2.0})), std::invalid_argument);
  CHECK_THROWS_AS(NormSpec::weightedL2(Vector()), std::invalid_argument);
  const NormSpec w = NormSpec::weightedL2(vec({1.0, 2.0}));
  CHECK_THROWS_AS(w(vec({1.0, 2.0, 3.0})), std::invalid_argument);
}

TEST_CASE("product metric") {
  const NormSpec n = NormSpec::l2();
  EpigraphPoint p{vec({1.0, 0.0}), 2.0};
  EpigraphPoint q{vec({0.0, 0.0}), -1.0};
  CHECK(productMetric(n, p, q) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(productMetric(n, p, p) == 0.0);

  // symmetry and triangle inequality on random triples
  Rng rng(3);
  for (int s = 0; s < 200; ++s) {
    EpigraphPoint a{uniformBox(rng, 3, 2.0), uniformBox(rng, 1, 5.0)[0]};
    EpigraphPoint b{uniformBox(rng, 3, 2.0), uniformBox(rng, 1, 5.0)[0]};
    EpigraphPoint c{uniformBox(rng, 3, 2.0), uniformBox(rng, 1, 5.0)[0]};
    CHECK(productMetric(n, a, b) == doctest::Approx(productMetric(n, b, a)).epsilon(1e-13));
    CHECK(productMetric(n, a, c) <= productMetric(n, a, b) + productMetric(n, b, c) + 1e-12);
  }

  // infinite heights: finite distance only between equal infinities
  EpigraphPoint inf1{vec({1.0, 0.0}), kInf};
  EpigraphPoint inf2{vec({0.0, 0.0}), kInf};
  CHECK(productMetric(n, inf1, inf2) == doctest::Approx(1.0));
  CHECK(productMetric(n, inf1, q) == kInf);
}

TEST_CASE("block reduce is independent of thread count") {
  auto run = [](int threads) {
    setThreadCount(threads);
    const double r = blockReduce<double>(
        100000, kInf, [](std::size_t i) { return std::cos(static_cast<double>(i)) + 1e-9 * i; },
        [](double a, double b) { return std::min(a, b); });
    setThreadCount(1);
    return r;
  };
  const double r1 = run(1);
  const double r8 = run(8);
  CHECK(r1 == r8);  // bitwise equal by construction
}
