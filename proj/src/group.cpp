#include "symvp/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace symvp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool sameMatrix(const Matrix& a, const Matrix& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

int findMatch(const std::vector<Matrix>& pool, const Matrix& m, double tol) {
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (sameMatrix(pool[i], m, tol)) return static_cast<int>(i);
  return -1;
}

Matrix rotation2(double theta) {
  Matrix r(2, 2);
  const double c = std::cos(theta), s = std::sin(theta);
  r << c, -s, s, c;
  return r;
}

}  // namespace

GroupAction::GroupAction(std::vector<Matrix> elements, Vector weights, NormSpec norm,
                         GroupModel model)
    : elements_(std::move(elements)),
      weights_(std::move(weights)),
      norm_(std::move(norm)),
      model_(model),
      dim_(elements_.empty() ? 0 : static_cast<int>(elements_.front().rows())) {}

void GroupAction::validateNormInvariance(const GroupOptions& opts) const {
  Rng rng(opts.normCheckSeed);
  for (int s = 0; s < opts.normCheckSamples; ++s) {
    const Vector x = uniformBox(rng, dim_, 1.0);
    const double nx = norm_(x);
    const double scale = std::max(1.0, nx);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      const double ngx = norm_(elements_[i] * x);
      if (std::abs(ngx - nx) > opts.normCheckTol * scale)
        throw std::invalid_argument("group element " + std::to_string(i) +
                                    " does not preserve the " + norm_.describe() + " norm");
    }
  }
}

GroupAction GroupAction::exactFinite(std::vector<Matrix> elements, NormSpec norm,
                                     GroupOptions opts) {
  if (elements.empty()) throw std::invalid_argument("group needs at least one element");
  const Eigen::Index n = elements.front().rows();
  if (!norm.admitsDimension(static_cast<int>(n)))
    throw std::invalid_argument("norm spec does not fit the group dimension");
  for (const Matrix& g : elements) {
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("group elements must be square matrices of equal dimension");
    if (std::abs(g.determinant()) < 1e-12)
      throw std::invalid_argument("group elements must be invertible");
  }
  // Dedup, then closure under product and inverse; identity must be present.
  std::vector<Matrix> dedup;
  for (const Matrix& g : elements)
    if (findMatch(dedup, g, opts.dedupTol) < 0) dedup.push_back(g);
  const Matrix id = Matrix::Identity(n, n);
  if (findMatch(dedup, id, opts.dedupTol) < 0)
    throw std::invalid_argument("element list does not contain the identity");
  for (const Matrix& g : dedup) {
    if (findMatch(dedup, g.inverse(), opts.dedupTol) < 0)
      throw std::invalid_argument("element list is not closed under inverse");
    for (const Matrix& h : dedup)
      if (findMatch(dedup, g * h, opts.dedupTol) < 0)
        throw std::invalid_argument("element list is not closed under product");
  }
  const std::size_t m = dedup.size();
  GroupAction action(std::move(dedup), Vector::Constant(m, 1.0 / static_cast<double>(m)),
                     std::move(norm), GroupModel::ExactFinite);
  action.validateNormInvariance(opts);
  return action;
}

GroupAction GroupAction::fromGenerators(const std::vector<Matrix>& generators, NormSpec norm,
                                        GroupOptions opts) {
  if (generators.empty()) throw std::invalid_argument("need at least one generator");
  const Eigen::Index n = generators.front().rows();
  std::vector<Matrix> pool;
  pool.push_back(Matrix::Identity(n, n));
  for (const Matrix& g : generators) {
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("generators must be square matrices of equal dimension");
    if (std::abs(g.determinant()) < 1e-12)
      throw std::invalid_argument("generators must be invertible");
    if (findMatch(pool, g, opts.dedupTol) < 0) pool.push_back(g);
    const Matrix gi = g.inverse();
    if (findMatch(pool, gi, opts.dedupTol) < 0) pool.push_back(gi);
  }
  // Breadth-first products until no new element appears.
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = 0; j < pool.size(); ++j) {
      const Matrix p = pool[i] * pool[j];
      if (findMatch(pool, p, opts.dedupTol) < 0) {
        pool.push_back(p);
        if (pool.size() > opts.maxElements)
          throw std::runtime_error("generator closure exceeded " +
                                   std::to_string(opts.maxElements) +
                                   " elements; group may not be finite");
      }
    }
  }
  return exactFinite(std::move(pool), std::move(norm), opts);
}

GroupAction GroupAction::trivial(int dim, NormSpec norm) {
  std::vector<Matrix> e{Matrix::Identity(dim, dim)};
  return exactFinite(std::move(e), std::move(norm));
}

GroupAction GroupAction::symmetric(int n, NormSpec norm) {
  if (n < 1 || n > 8) throw std::invalid_argument("symmetric group preset supports 1 <= n <= 8");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matrix> elements;
  do {
    Matrix p = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) p(perm[i], i) = 1.0;
    elements.push_back(std::move(p));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return exactFinite(std::move(elements), std::move(norm));
}

GroupAction GroupAction::signedPermutations(int n, NormSpec norm) {
  if (n < 1 || n > 5)
    throw std::invalid_argument("signed permutation preset supports 1 <= n <= 5");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matrix> elements;
  do {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Matrix p = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) p(perm[i], i) = (mask >> i) & 1u ? -1.0 : 1.0;
      elements.push_back(std::move(p));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return exactFinite(std::move(elements), std::move(norm));
}

GroupAction GroupAction::cyclicRotations(int k, NormSpec norm) {
  if (k < 1) throw std::invalid_argument("cyclic rotation preset needs k >= 1");
  std::vector<Matrix> elements;
  for (int j = 0; j < k; ++j) elements.push_back(rotation2(kTwoPi * j / k));
  return exactFinite(std::move(elements), std::move(norm));
}

GroupAction GroupAction::so2Quadrature(int points, NormSpec norm) {
  if (points < 1) throw std::invalid_argument("so2 quadrature needs at least one point");
  if (norm.kind() != NormKind::L2 &&
      !(norm.kind() == NormKind::WeightedL2 && norm.weights().size() == 2 &&
        std::abs(norm.weights()[0] - norm.weights()[1]) < 1e-15))
    throw std::invalid_argument("so2 quadrature requires a rotation invariant norm");
  std::vector<Matrix> elements;
  for (int j = 0; j < points; ++j) elements.push_back(rotation2(kTwoPi * j / points));
  const std::size_t m = elements.size();
  GroupAction action(std::move(elements), Vector::Constant(m, 1.0 / static_cast<double>(m)),
                     std::move(norm), GroupModel::QuadratureSO2);
  GroupOptions opts;
  action.validateNormInvariance(opts);
  return action;
}

Vector GroupAction::symmetrize(const Vector& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("symmetrize: vector dimension does not match the action");
  Vector acc = Vector::Zero(dim_);
  for (std::size_t i = 0; i < elements_.size(); ++i) acc += weights_[i] * (elements_[i] * x);
  return acc;
}

Matrix GroupAction::reynolds() const {
  Matrix p = Matrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < elements_.size(); ++i) p += weights_[i] * elements_[i];
  return p;
}

std::vector<Vector> GroupAction::orbit(const Vector& x, double dedupTol) const {
  if (x.size() != dim_)
    throw std::invalid_argument("orbit: vector dimension does not match the action");
  std::vector<Vector> pts;
  pts.reserve(elements_.size());
  for (const Matrix& g : elements_) {
    Vector gx = g * x;
    bool seen = false;
    for (const Vector& p : pts)
      if ((p - gx).cwiseAbs().maxCoeff() <= dedupTol) {
        seen = true;
        break;
      }
    if (!seen) pts.push_back(std::move(gx));
  }
  return pts;
}

double GroupAction::invarianceResidual(const Vector& x) const {
  double worst = 0.0;
  for (const Matrix& g : elements_) worst = std::max(worst, norm_(g * x - x));
  return worst;
}

GroupAction GroupAction::adjoint() const {
  std::vector<Matrix> adj;
  adj.reserve(elements_.size());
  for (const Matrix& g : elements_) adj.push_back(g.transpose());
  GroupAction action(std::move(adj), weights_, norm_.dualSpec(), model_);
  GroupOptions opts;
  action.validateNormInvariance(opts);
  return action;
}

GroupAction::FixedSubspace GroupAction::fixedSubspace(double tol) const {
  const Matrix p = reynolds();
  Eigen::BDCSVD<Matrix> svd(p, Eigen::ComputeFullU);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++rank;
  FixedSubspace fs;
  fs.projector = p;
  fs.dim = rank;
  fs.basis = svd.matrixU().leftCols(rank);
  // Range of an idempotent equals its fixed space; double-check on the basis.
  for (int j = 0; j < rank; ++j) {
    const Vector v = fs.basis.col(j);
    if (invarianceResidual(v) > 1e-7)
      throw std::runtime_error("fixed subspace basis vector is not invariant; "
                               "Reynolds operator is not a clean projector");
  }
  return fs;
}

}  // namespace symvp
