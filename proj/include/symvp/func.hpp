#pragma once

#include "symvp/group.hpp"
#include "symvp/space.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace symvp {

// Extended-real arithmetic for objective values in ]-inf, +inf].
// +inf + finite = +inf; 0 * inf and inf - inf are rejected.
double extAdd(double a, double b);
double extScale(double w, double a);
bool extEq(double a, double b, double tol);

struct FunctionFlags {
  bool proper = true;        ///< finite somewhere
  bool boundedBelow = false;
  bool lsc = false;          ///< lower semicontinuity, declared not checked
  bool convex = false;       ///< classical convexity, declared not checked
};

/// Extended-real objective on R^n.  Values may be +inf (outside the effective
/// domain); NaN is rejected at evaluation.  An analytic gradient is optional
/// and only meaningful where the function is smooth.
class ScalarFunction {
 public:
  using Eval = std::function<double(const Vector&)>;
  using Grad = std::function<Vector(const Vector&)>;

  ScalarFunction(std::string name, int dim, Eval eval, FunctionFlags flags = {},
                 Grad grad = nullptr);

  double operator()(const Vector& x) const;
  int dimension() const { return dim_; }
  const std::string& name() const { return name_; }
  const FunctionFlags& flags() const { return flags_; }

  bool hasGradient() const { return static_cast<bool>(grad_); }
  Vector gradient(const Vector& x) const;

  ScalarFunction withFlags(FunctionFlags flags) const;

 private:
  std::string name_;
  int dim_;
  Eval eval_;
  Grad grad_;
  FunctionFlags flags_;
};

/// fbar(x) = sum_g w_g f(g x).  G-invariant by construction.
ScalarFunction symmetrizeFunction(const ScalarFunction& f, const GroupAction& G);

/// psi = 1 / phi^2 with psi = +inf where phi = 0; gradient -2 grad phi / phi^3.
ScalarFunction bumpTransform(const ScalarFunction& phi);

struct SampleSpec {
  int count = 200;          ///< random box points
  double radius = 2.0;
  std::uint64_t seed = 7;
  bool axisPoints = true;   ///< multiples of latticeStep along each axis
  bool fullLattice = false; ///< full grid up to dimension 2 (cost grows fast)
  double latticeStep = 0.5;
};

/// Deterministic lattice/axis points plus seeded uniform box samples.
std::vector<Vector> makeSampleCloud(int dim, const SampleSpec& spec);

/// Representative of orbit(x) that is maximal in lexicographic order; used to
/// report witnesses independently of which orbit member was sampled.
Vector canonicalOrbitRepresentative(const GroupAction& G, const Vector& x);

struct InvarianceReport {
  bool invariant = true;
  double maxDeviation = 0.0;  ///< max |f(gx) - f(x)|, inf-aware
  Vector witness;             ///< sample with the largest deviation
  std::size_t witnessElement = 0;
  int checkedPoints = 0;
};

/// Checks f(g x) = f(x) on the given points (tolerance comparison, equal
/// infinities agree).
InvarianceReport checkInvariance(const ScalarFunction& f, const GroupAction& G,
                                 const std::vector<Vector>& points, double tol = 1e-9);

struct GroupConvexityReport {
  bool holds = true;
  double maxViolation = -kInf;  ///< max over points of lhs - rhs (can be +inf)
  Vector witness;               ///< canonical orbit representative of the worst point
  double lhs = 0.0;             ///< f(xbar) at the witness
  double rhs = 0.0;             ///< sum_g w_g f(g x) at the witness
  int checkedPoints = 0;
};

/// Convexity with respect to G: f(xbar) <= sum_g w_g f(g x) on the points.
GroupConvexityReport checkGroupConvexity(const ScalarFunction& f, const GroupAction& G,
                                         const std::vector<Vector>& points, double tol = 1e-9);

/// Linearity with respect to G: f(xbar) = sum_g w_g f(g x) on the points.
GroupConvexityReport checkGroupLinearity(const ScalarFunction& f, const GroupAction& G,
                                         const std::vector<Vector>& points, double tol = 1e-9);

/// Central-difference Gateaux variation with one Richardson step; falls back
/// to a one-sided rule next to the effective domain boundary and throws when
/// every stencil point is infinite.
double gateauxVariation(const ScalarFunction& f, const Vector& x, const Vector& h,
                        double step = 1e-4);

/// Gateaux gradient assembled from coordinate variations (numerical; prefers
/// nothing, callers pick the analytic gradient themselves when present).
Vector gateauxGradient(const ScalarFunction& f, const Vector& x, double step = 1e-4);

}  // namespace symvp
