#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symvp/group.hpp"
#include "symvp/space.hpp"

namespace symvp {

enum class BodyKind { Halfspaces, Hull, Ball };

// A closed convex set in one of three concrete forms:
//   Halfspaces  {x : Ax <= b}           (possibly unbounded)
//   Hull        conv{p_1, ..., p_m}
//   Ball        {x : norm(x - center) <= radius}
//
// All projections are Euclidean.  Vertex enumeration is exact and intended
// for the low dimensions this library targets; it throws for bodies without
// a finite vertex description (l2 balls, unbounded polyhedra).
class ConvexBody {
 public:
  static ConvexBody halfspaces(Matrix A, Vector b);
  static ConvexBody hull(std::vector<Vector> points);
  static ConvexBody ball(NormSpec norm, double radius, Vector center);

  BodyKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  std::string describe() const;

  bool contains(const Vector& x, double tol = 1e-9) const;
  Vector project(const Vector& x, Vector* hullWarmStart = nullptr) const;
  bool bounded() const;
  std::vector<Vector> vertexList() const;

  // sup / inf of <u, x> over the body; +-inf when unattained.
  double supportValue(const Vector& u) const;
  double linearInfimum(const Vector& u) const;

  // Image under an invertible linear map.  For balls the map must preserve
  // the ball's norm (it is applied to the center only).
  ConvexBody mapped(const Matrix& g) const;
  // Whether g C = C for every group element, checked exactly through the
  // body description (vertex sets, halfspace rows, centers).
  bool invariantUnder(const GroupAction& G, double tol = 1e-8) const;

  const Matrix& rows() const { return A_; }
  const Vector& offsets() const { return b_; }
  const std::vector<Vector>& points() const { return pts_; }
  const NormSpec& ballNorm() const;
  double ballRadius() const { return radius_; }
  const Vector& ballCenter() const { return center_; }

 private:
  ConvexBody() = default;

  BodyKind kind_ = BodyKind::Hull;
  int dim_ = 0;
  Matrix A_;
  Vector b_;
  std::vector<Vector> pts_;
  std::optional<NormSpec> norm_;
  double radius_ = 0.0;
  Vector center_;
};

// Whether the polyhedral cone {d : Ad <= 0} is {0}.  Decided exactly via
// the nullspace of A (lineality) and candidate extreme rays from
// (n-1)-subsets of rows.
bool coneIsTrivial(const Matrix& A, double tol = 1e-10);

// Minkowski gauge p_C(x) = inf{t > 0 : x in tC}.  Requires 0 to be an
// interior point of C; throws std::invalid_argument otherwise.
double minkowskiGauge(const ConvexBody& C, const Vector& x);

struct ClosestPairResult {
  Vector inA;
  Vector inB;
  double gap = 0.0;  // Euclidean distance
  int iterations = 0;
};

// Closest points of two disjoint closed convex bodies by accelerated
// alternating projections on the product space.
ClosestPairResult closestPair(const ConvexBody& A, const ConvexBody& B, int maxIter = 20000,
                              double tol = 1e-13);

struct SeparationResult {
  bool degenerate = false;
  std::string note;
  Vector functional;     // u with sup_A <u,x> < level < inf_B <u,x>
  double level = 0.0;
  double supA = 0.0;
  double infB = 0.0;
  double marginA = 0.0;  // level - supA
  double marginB = 0.0;  // infB - level
  double euclideanGap = 0.0;
  double fixedResidual = 0.0;  // || average of g^T u over G - u ||
  ClosestPairResult pair;
};

// Separates two disjoint closed convex bodies, at least one bounded, by a
// functional fixed under the transposed group action.  The construction
// takes the closest-pair direction and averages it over the transposed
// group; when both bodies are invariant this keeps the separation strict.
// Touching bodies (gap <= gapTol) and a vanishing averaged functional are
// reported as degenerate, not thrown.
SeparationResult separateInvariant(const ConvexBody& A, const ConvexBody& B,
                                   const GroupAction& G, double gapTol = 1e-9);

struct AnnihilatorResult {
  bool found = false;
  std::string note;
  Vector functional;        // unit vector with H^T u = 0 and g^T u = u
  double residualH = 0.0;   // max |<u, h_j>|
  double residualFix = 0.0;
  int subspaceDim = 0;      // dimension of the annihilator inside fix(G*)
};

// A nonzero functional vanishing on the span of the columns of H and fixed
// by every transposed group element, when one exists.
AnnihilatorResult invariantAnnihilator(const Matrix& H, const GroupAction& G, double tol = 1e-8);

}  // namespace symvp
