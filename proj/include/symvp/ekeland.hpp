#pragma once

#include <string>
#include <vector>

#include "symvp/func.hpp"
#include "symvp/group.hpp"
#include "symvp/space.hpp"

namespace symvp {

// How the descent sequence is seeded.
//
// ProofSchedule first locates an invariant point whose value is within
// delta/2 of the best value found on the invariant subspace and starts
// there; the recorded steps then obey delta/(eps 2^{n+1}).
//
// GivenStart starts at the symmetrized caller point and presumes the caller
// guarantees phi(start) <= inf phi + delta (as the eps-subgradient
// preconditions of the subdifferential theorems do).  Step bounds are then
// delta/(eps 2^n).
enum class StartPolicy { ProofSchedule, GivenStart };

struct EkelandParams {
  double epsilon = 0.5;  // slope of the descent cones
  double delta = 0.5;    // value slack; localization radius is delta/epsilon
  StartPolicy start = StartPolicy::ProofSchedule;
  NormSpec norm = NormSpec::l2();
  int maxStages = 60;
  double stopStep = 1e-8;  // stop once the stage step bound drops below this
  int stageBudget = 4000;  // simplex iterations per stage restart
  int multiStarts = 8;
  int verifySamples = 10000;
  double verifyRadiusFactor = 2.0;
  double marginTol = 1e-8;
  double unboundedThreshold = -1e9;
  unsigned long long seed = 2024;
};

struct EkelandStage {
  int index = 0;
  Vector point;            // invariant iterate x_n
  double value = kInf;     // phi(x_n)
  double coneBound = kInf; // best value found inside the stage cone
  double stepBound = 0.0;
  double stepTaken = 0.0;
};

struct EkelandCertificate {
  bool inequalityVerified = false;
  double inequalityMargin = kInf;  // min of phi(x) + eps ||x - xt|| - phi(xt)
  Vector worstPoint;
  int verifiedPoints = 0;
  std::string cloudScope;          // "full-space" or "invariant-subspace"
  double invarianceResidual = kInf;
  double valueAtPoint = kInf;      // phi at the final point
  double referenceValue = kInf;    // phi at the symmetrized caller start
  double distanceFromStart = kInf; // distance from the sequence start
  double localizationBound = 0.0;  // delta / epsilon
  bool localizationSatisfied = false;
  bool stepBoundsSatisfied = false;
};

struct EkelandResult {
  bool succeeded = false;
  bool unboundedDetected = false;
  std::string note;
  Vector symmetrizedStart;
  Vector sequenceStart;
  Vector point;  // the final invariant point
  std::vector<EkelandStage> stages;
  EkelandCertificate certificate;
  double approxInfimum = kInf;  // best value seen on the invariant subspace
  GroupConvexityReport convexity;
  InvarianceReport invariance;
};

// Exact floating-point membership in the descent cone at (base, baseValue):
// phi(x) + eps * norm(x - base) <= baseValue.
bool coneMember(const ScalarFunction& phi, const NormSpec& norm, double eps, const Vector& base,
                double baseValue, const Vector& x);

// Runs the symmetrized descent iteration for phi under the group action and
// verifies the resulting variational inequality on a sampled cloud.  The
// anchors join both the optimizer starts and the verification cloud.
EkelandResult ekelandIterate(const ScalarFunction& phi, const GroupAction& G, const Vector& x0,
                             const EkelandParams& params = {},
                             const std::vector<Vector>& anchors = {});

}  // namespace symvp
