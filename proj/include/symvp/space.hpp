#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>

namespace symvp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class NormKind { L1, L2, LInf, WeightedL2 };

/// Norm attached to the ambient space R^n, together with its dual norm.
///
/// Supported kinds: l1, l2, linf and weighted l2 with strictly positive
/// weights.  Dual pairs are l1 <-> linf, l2 <-> l2 and weighted l2 with
/// inverted weights.  Weighted norms are only invariant under a coordinate
/// action when the weights are constant on each coordinate orbit; that is
/// validated when a group action is built on top of this spec.
class NormSpec {
 public:
  static NormSpec l1();
  static NormSpec l2();
  static NormSpec linf();
  static NormSpec weightedL2(Vector weights);

  NormKind kind() const { return kind_; }
  const Vector& weights() const { return weights_; }

  /// Norm of x.
  double operator()(const Vector& x) const;
  /// Dual norm of a functional u, so that <u, x> <= dual(u) * (*this)(x).
  double dual(const Vector& u) const;
  /// Spec of the dual norm.
  NormSpec dualSpec() const;

  /// True when the spec can be applied to vectors of the given dimension.
  bool admitsDimension(int n) const;

  std::string describe() const;

 private:
  NormSpec(NormKind kind, Vector weights) : kind_(kind), weights_(std::move(weights)) {}

  NormKind kind_;
  Vector weights_;  // empty unless WeightedL2
};

/// Point of the product space X x R used by the epigraph geometry.
struct EpigraphPoint {
  Vector x;
  double t = 0.0;
};

/// Product metric rho((x,t),(y,s)) = ||x - y|| + |t - s|.
/// Infinite heights are allowed: rho is +inf unless both heights are equal.
double productMetric(const NormSpec& norm, const EpigraphPoint& p, const EpigraphPoint& q);

}  // namespace symvp
