#pragma once

#include <functional>

#include "symvp/space.hpp"

namespace symvp {

struct NelderMeadOptions {
  int maxIter = 4000;
  double simplexTol = 1e-9;   // max vertex distance from the best point
  double valueTol = 1e-12;    // spread of finite simplex values
  double scale = 0.5;         // initial simplex edge length
};

struct MinimizeResult {
  Vector x;
  double value = kInf;
  int iterations = 0;
};

// Derivative-free simplex descent.  The objective may return +inf outside
// its domain; the start should be feasible.
MinimizeResult nelderMead(const std::function<double(const Vector&)>& f, const Vector& start,
                          const NelderMeadOptions& opts = {});

// Armijo-backtracking steepest descent, used to polish smooth local minima.
MinimizeResult gradientDescent(const std::function<double(const Vector&)>& f,
                               const std::function<Vector(const Vector&)>& grad,
                               const Vector& start, int maxIter = 200, double gradTol = 1e-12);

// Euclidean projection onto the probability simplex {l >= 0, sum l = 1}.
Vector projectSimplex(const Vector& y);

// Euclidean projection onto {u : norm(u - center) <= radius}.  Closed form
// for the l2 and max norms, sort-based for l1, a Newton multiplier search
// for weighted l2.
Vector projectNormBall(const NormSpec& norm, double radius, const Vector& center,
                       const Vector& p);

struct MinMaxResult {
  Vector u;
  double value = kInf;  // exact max_i (A.row(i) u + c_i) at the returned u
  int iterations = 0;
};

// minimize over {u : ballNorm(u - center) <= radius} of max_i (A.row(i) u + c_i),
// by smoothing the max with a log-sum-exp of decreasing temperature and
// running projected accelerated gradient steps at each stage.
MinMaxResult smoothedLinearMinMax(const Matrix& A, const Vector& c, const NormSpec& ballNorm,
                                  double radius, const Vector& center, int totalIters = 6000);

}  // namespace symvp
