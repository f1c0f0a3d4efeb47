#pragma once

#include <string>
#include <vector>

#include "symvp/ekeland.hpp"
#include "symvp/func.hpp"
#include "symvp/group.hpp"
#include "symvp/separation.hpp"
#include "symvp/space.hpp"

namespace symvp {

// ---------------------------------------------------------------------------
// Palais-Smale sequences: run the descent principle with eps = delta = 1/n
// and record invariant points whose gradients shrink like 1/n.

struct PalaisSmaleEntry {
  int n = 0;
  Vector point;
  double value = kInf;
  double gradDualNorm = kInf;
  double cloudMargin = kInf;
};

struct PalaisSmaleResult {
  bool succeeded = false;
  std::string note;
  std::vector<PalaisSmaleEntry> entries;
  double infimumEstimate = kInf;
};

PalaisSmaleResult palaisSmaleSequence(const ScalarFunction& phi, const GroupAction& G,
                                      const Vector& x0, int count = 50,
                                      const NormSpec& norm = NormSpec::l2(),
                                      unsigned long long seed = 2024);

// ---------------------------------------------------------------------------
// Dense range of the gradient map: for an invariant target u with
// dual(u) <= k and an objective growing at least like k||x|| + c, minimizing
// f - <u, .> along the principle drives dual(grad f(x_n) - u) below tol.

struct DenseRangeProbe {
  bool succeeded = false;
  std::string note;
  Vector target;
  Vector bestPoint;
  double residual = kInf;       // min_n dual(grad f(x_n) - u)
  double growthMargin = kInf;   // min over ray samples of f(x) - k||x|| - c
  std::vector<double> residualHistory;
};

DenseRangeProbe denseRangeProbe(const ScalarFunction& f, const GroupAction& G, const Vector& u,
                                double k, double c, const NormSpec& norm = NormSpec::l2(),
                                int maxRuns = 40, double tol = 1e-6,
                                unsigned long long seed = 2024);

// ---------------------------------------------------------------------------
// eps-subdifferential membership on a sampled grid:
//   h in d_eps f(x0)  iff  <h, x - x0> <= f(x) - f(x0) + eps for all x.

struct SubgradientCheck {
  bool member = false;
  double worstSlack = kInf;  // min over the grid of the defining inequality slack
  Vector worstPoint;
  int checkedPoints = 0;
};

SubgradientCheck epsSubdifferentialCheck(const ScalarFunction& f, const Vector& x0,
                                         const Vector& h, double eps,
                                         const GroupAction* orbitImages = nullptr,
                                         int boxSamples = 500, unsigned long long seed = 97);

// ---------------------------------------------------------------------------
// Approximate subgradients become exact ones nearby: from x0* in
// d_eps f(x0), produce an invariant z and a fixed functional z* with
// z* in df(z), ||z - xbar0|| <= eps/lambda and dual(z* - x0*) <= lambda.

struct BronstedRockafellarResult {
  bool succeeded = false;
  std::string note;
  Vector point;              // z, invariant
  Vector functional;         // z*, fixed under the transposed action
  double pointDistance = kInf;
  double functionalDistance = kInf;
  double membershipMargin = -kInf;  // min slack of z* in df(z) on a fresh grid
  double pointInvarianceResidual = kInf;
  double functionalFixedResidual = kInf;
  EkelandResult inner;
};

BronstedRockafellarResult bronstedRockafellar(const ScalarFunction& f, const GroupAction& G,
                                              const Vector& x0, const Vector& x0star, double eps,
                                              double lambda,
                                              const NormSpec& norm = NormSpec::l2(),
                                              unsigned long long seed = 2024);

// ---------------------------------------------------------------------------
// Support points with functionals near a prescribed one: perturb an
// invariant functional by at most eps (dual norm) so that it attains its
// supremum over an invariant body at an invariant point.

struct BishopPhelpsResult {
  bool succeeded = false;
  std::string note;
  Vector supportPoint;      // invariant point of the body
  Vector perturbation;      // h, dual(h) <= eps
  Vector functional;        // u + h
  double perturbationNorm = kInf;
  double supportMargin = -kInf;  // min over vertices of <u+h, supportPoint - v>
  double functionalFixedResidual = kInf;
  EkelandResult inner;
};

BishopPhelpsResult bishopPhelps(const ConvexBody& C, const GroupAction& G, const Vector& u,
                                double eps, const NormSpec& norm = NormSpec::l2(),
                                unsigned long long seed = 2024);

// ---------------------------------------------------------------------------
// Dual description: the gradients of psi = 1/phi^2 taken across the
// invariant subspace span exactly the fixed subspace of the transposed
// action, provided psi is convex with respect to the group.

struct DualDescriptionResult {
  bool consistent = false;
  bool transformConvex = false;
  bool spansAgree = false;
  std::string note;
  int gradientSpanDim = 0;
  int fixedDualDim = 0;
  double maxPrincipalAngle = 0.0;
};

DualDescriptionResult dualDescriptionCheck(const ScalarFunction& phi, const GroupAction& G,
                                           int sampleCount = 200,
                                           unsigned long long seed = 2024);

}  // namespace symvp
