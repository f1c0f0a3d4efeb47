#include "symvp/space.hpp"

#include <cmath>
#include <stdexcept>

namespace symvp {

NormSpec NormSpec::l1() { return NormSpec(NormKind::L1, Vector()); }
NormSpec NormSpec::l2() { return NormSpec(NormKind::L2, Vector()); }
NormSpec NormSpec::linf() { return NormSpec(NormKind::LInf, Vector()); }

NormSpec NormSpec::weightedL2(Vector weights) {
  if (weights.size() == 0) throw std::invalid_argument("weighted l2 norm needs at least one weight");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw std::invalid_argument("weighted l2 norm needs strictly positive finite weights");
  }
  return NormSpec(NormKind::WeightedL2, std::move(weights));
}

double NormSpec::operator()(const Vector& x) const {
  switch (kind_) {
    case NormKind::L1:
      return x.lpNorm<1>();
    case NormKind::L2:
      return x.norm();
    case NormKind::LInf:
      return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
    case NormKind::WeightedL2: {
      if (x.size() != weights_.size())
        throw std::invalid_argument("weighted norm applied to vector of wrong dimension");
      return std::sqrt(weights_.dot(x.cwiseProduct(x)));
    }
  }
  throw std::logic_error("unreachable norm kind");
}

double NormSpec::dual(const Vector& u) const { return dualSpec()(u); }

NormSpec NormSpec::dualSpec() const {
  switch (kind_) {
    case NormKind::L1:
      return linf();
    case NormKind::L2:
      return l2();
    case NormKind::LInf:
      return l1();
    case NormKind::WeightedL2:
      return weightedL2(weights_.cwiseInverse());
  }
  throw std::logic_error("unreachable norm kind");
}

bool NormSpec::admitsDimension(int n) const {
  if (kind_ == NormKind::WeightedL2) return weights_.size() == n;
  return n >= 0;
}

std::string NormSpec::describe() const {
  switch (kind_) {
    case NormKind::L1:
      return "l1";
    case NormKind::L2:
      return "l2";
    case NormKind::LInf:
      return "linf";
    case NormKind::WeightedL2:
      return "weighted_l2";
  }
  return "?";
}

double productMetric(const NormSpec& norm, const EpigraphPoint& p, const EpigraphPoint& q) {
  if (p.x.size() != q.x.size())
    throw std::invalid_argument("product metric applied to points of different dimension");
  const bool pInf = std::isinf(p.t);
  const bool qInf = std::isinf(q.t);
  if (pInf || qInf) {
    if (pInf && qInf && p.t == q.t) return norm(p.x - q.x);
    return kInf;
  }
  return norm(p.x - q.x) + std::abs(p.t - q.t);
}

}  // namespace symvp
