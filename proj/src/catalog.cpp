#include "symvp/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace symvp {

namespace {

FunctionFlags flagsOf(bool boundedBelow, bool lsc, bool convex) {
  FunctionFlags f;
  f.proper = true;
  f.boundedBelow = boundedBelow;
  f.lsc = lsc;
  f.convex = convex;
  return f;
}

// Piecewise-linear even spike: 2x+1 on [-1/2,0], -2x+1 on [0,1/2], 0 outside.
// Invariant under x -> -x but not convex with respect to that group.
double tentEval(const Vector& x) {
  const double t = x[0];
  if (t < -0.5 || t > 0.5) return 0.0;
  return t <= 0.0 ? 2.0 * t + 1.0 : -2.0 * t + 1.0;
}

}  // namespace

const std::vector<CatalogEntry>& objectiveCatalog() {
  static const std::vector<CatalogEntry> entries = {
      {"tent", "even piecewise-linear spike, the convexity-w.r.t.-G counterexample", false, 1,
       false},
      {"sumsq", "sum of squares ||x||_2^2", true, 0, true},
      {"sumsq_plus_one", "||x||_2^2 + 1", true, 0, true},
      {"half_sumsq", "||x||_2^2 / 2", true, 0, true},
      {"max_coord", "max_i x_i", true, 0, false},
      {"abs_first", "|x_1|", true, 0, false},
      {"cosh_sum_centered", "sum_i (cosh(x_i) - 1), superlinear growth", true, 0, true},
      {"gauss_bump", "exp(-||x||_2^2)", true, 0, true},
      {"norm2", "||x||_2", true, 0, false},
      {"norm1", "||x||_1", true, 0, false},
  };
  return entries;
}

ScalarFunction catalogObjective(const std::string& name, int dim) {
  if (dim < 1) throw std::invalid_argument("catalog objective needs dimension >= 1");
  if (name == "tent") {
    if (dim != 1) throw std::invalid_argument("'tent' is one-dimensional");
    return ScalarFunction("tent", 1, tentEval, flagsOf(true, true, false));
  }
  if (name == "sumsq")
    return ScalarFunction(
        "sumsq", dim, [](const Vector& x) { return x.squaredNorm(); },
        flagsOf(true, true, true), [](const Vector& x) { return Vector(2.0 * x); });
  if (name == "sumsq_plus_one")
    return ScalarFunction(
        "sumsq_plus_one", dim, [](const Vector& x) { return x.squaredNorm() + 1.0; },
        flagsOf(true, true, true), [](const Vector& x) { return Vector(2.0 * x); });
  if (name == "half_sumsq")
    return ScalarFunction(
        "half_sumsq", dim, [](const Vector& x) { return 0.5 * x.squaredNorm(); },
        flagsOf(true, true, true), [](const Vector& x) { return x; });
  if (name == "max_coord")
    return ScalarFunction(
        "max_coord", dim, [](const Vector& x) { return x.maxCoeff(); },
        flagsOf(false, true, true));
  if (name == "abs_first")
    return ScalarFunction(
        "abs_first", dim, [](const Vector& x) { return std::abs(x[0]); },
        flagsOf(true, true, true));
  if (name == "cosh_sum_centered")
    return ScalarFunction(
        "cosh_sum_centered", dim,
        [](const Vector& x) {
          double s = 0.0;
          for (Eigen::Index i = 0; i < x.size(); ++i) s += std::cosh(x[i]) - 1.0;
          return s;
        },
        flagsOf(true, true, true),
        [](const Vector& x) {
          Vector g(x.size());
          for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = std::sinh(x[i]);
          return g;
        });
  if (name == "gauss_bump")
    return ScalarFunction(
        "gauss_bump", dim, [](const Vector& x) { return std::exp(-x.squaredNorm()); },
        flagsOf(true, true, false),
        [](const Vector& x) { return Vector(-2.0 * std::exp(-x.squaredNorm()) * x); });
  if (name == "norm2")
    return ScalarFunction(
        "norm2", dim, [](const Vector& x) { return x.norm(); }, flagsOf(true, true, true));
  if (name == "norm1")
    return ScalarFunction(
        "norm1", dim, [](const Vector& x) { return x.lpNorm<1>(); }, flagsOf(true, true, true));
  throw std::invalid_argument("unknown catalog objective '" + name + "'");
}

}  // namespace symvp
