#include "symvp/separation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "symvp/opt.hpp"

namespace symvp {

namespace {

Vector solveAffineProjection(const Matrix& VS, const Vector& x, bool& ok) {
  // minimize ||VS l - x||^2 subject to sum l = 1.
  const int k = static_cast<int>(VS.cols());
  Matrix K(k + 1, k + 1);
  K.topLeftCorner(k, k) = VS.transpose() * VS;
  K.topRightCorner(k, 1).setOnes();
  K.bottomLeftCorner(1, k).setOnes();
  K(k, k) = 0.0;
  Vector rhs(k + 1);
  rhs.head(k) = VS.transpose() * x;
  rhs[k] = 1.0;
  Eigen::FullPivLU<Matrix> lu(K);
  if (!lu.isInvertible()) {
    ok = false;
    return Vector();
  }
  ok = true;
  return lu.solve(rhs).head(k);
}

// Exact projection onto conv(points): the projection lies in the convex
// hull of some affinely independent subset of at most dim+1 points, and on
// that subset it equals the projection onto the affine hull.  Enumerating
// all subsets and keeping the closest feasible candidate is therefore exact.
Vector projectHullExact(const std::vector<Vector>& pts, const Vector& x) {
  const int m = static_cast<int>(pts.size());
  const int n = static_cast<int>(x.size());
  const int maxK = std::min(m, n + 1);
  Vector best = pts[0];
  double bestDist = (best - x).norm();
  for (const Vector& p : pts) {
    const double d = (p - x).norm();
    if (d < bestDist) {
      bestDist = d;
      best = p;
    }
  }
  std::vector<int> idx;
  std::function<void(int, int)> visit = [&](int startAt, int need) {
    if (need == 0) {
      Matrix VS(n, idx.size());
      for (std::size_t j = 0; j < idx.size(); ++j) VS.col(j) = pts[idx[j]];
      bool ok = false;
      const Vector lam = solveAffineProjection(VS, x, ok);
      if (!ok || lam.minCoeff() < -1e-11) return;
      const Vector y = VS * lam;
      const double d = (y - x).norm();
      if (d < bestDist) {
        bestDist = d;
        best = y;
      }
      return;
    }
    for (int i = startAt; i <= m - need; ++i) {
      idx.push_back(i);
      visit(i + 1, need - 1);
      idx.pop_back();
    }
  };
  for (int k = 2; k <= maxK; ++k) visit(0, k);
  return best;
}

Vector projectHullFista(const std::vector<Vector>& pts, const Vector& x, Vector* warm) {
  const int m = static_cast<int>(pts.size());
  const int n = static_cast<int>(x.size());
  Matrix V(n, m);
  for (int j = 0; j < m; ++j) V.col(j) = pts[j];
  const double sigma = V.jacobiSvd().singularValues()(0);
  const double step = 1.0 / std::max(sigma * sigma, 1e-30);

  Vector lam = (warm && warm->size() == m) ? *warm : Vector::Constant(m, 1.0 / m);
  lam = projectSimplex(lam);
  Vector y = lam, prev = lam;
  double t = 1.0;
  for (int k = 0; k < 4000; ++k) {
    const Vector g = V.transpose() * (V * y - x);
    const Vector next = projectSimplex(y - step * g);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / tn) * (next - prev);
    if ((next - prev).lpNorm<Eigen::Infinity>() < 1e-15 && k > 10) {
      lam = next;
      break;
    }
    prev = lam = next;
    t = tn;
  }
  if (warm) *warm = lam;
  return V * lam;
}

double subsetBudget(int m, int maxK) {
  double total = 0.0, binom = 1.0;
  for (int k = 1; k <= maxK; ++k) {
    binom *= static_cast<double>(m - k + 1) / k;
    total += binom;
    if (total > 2e5) return total;
  }
  return total;
}

Vector projectHalfspacesDykstra(const Matrix& A, const Vector& b, const Vector& x) {
  const int m = static_cast<int>(A.rows());
  std::vector<Vector> corr(m, Vector::Zero(x.size()));
  Vector y = x;
  const double scale = 1.0 + x.norm();
  for (int sweep = 0; sweep < 5000; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < m; ++i) {
      const Vector w = y + corr[i];
      const double an2 = A.row(i).squaredNorm();
      const double viol = A.row(i).dot(w) - b[i];
      Vector z = w;
      if (viol > 0.0) z -= (viol / an2) * A.row(i).transpose();
      corr[i] = w - z;
      moved = std::max(moved, (z - y).lpNorm<Eigen::Infinity>());
      y = z;
    }
    if (moved < 1e-14 * scale) break;
  }
  return y;
}

int pickSmallestSingular(const Eigen::BDCSVD<Matrix>& svd) {
  return static_cast<int>(svd.singularValues().size()) - 1;
}

}  // namespace

bool coneIsTrivial(const Matrix& A, double tol) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  if (n == 0) return true;
  if (m == 0) return false;

  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinV);
  const double sMax = svd.singularValues()(0);
  if (m < n || svd.singularValues()(pickSmallestSingular(svd)) <= tol * std::max(sMax, 1.0))
    return false;  // nontrivial nullspace: the cone contains a line

  if (n == 1) {
    const bool plusOk = (A.col(0).array() <= tol).all();
    const bool minusOk = (A.col(0).array() >= -tol).all();
    return !plusOk && !minusOk;
  }

  // Candidate extreme rays come from (n-1)-subsets of rows with rank n-1.
  std::vector<int> idx;
  bool foundRay = false;
  std::function<void(int, int)> visit = [&](int startAt, int need) {
    if (foundRay) return;
    if (need == 0) {
      Matrix AS(n - 1, n);
      for (int j = 0; j < n - 1; ++j) AS.row(j) = A.row(idx[j]);
      Eigen::JacobiSVD<Matrix> sub(AS, Eigen::ComputeFullV);
      const auto& sv = sub.singularValues();
      if (sv(n - 2) <= tol * std::max(sv(0), 1.0)) return;  // rank < n-1
      const Vector d = sub.matrixV().col(n - 1);
      const double scale = sMax * d.norm();
      if (((A * d).array() <= tol * std::max(scale, 1.0)).all() ||
          ((A * (-d)).array() <= tol * std::max(scale, 1.0)).all())
        foundRay = true;
      return;
    }
    for (int i = startAt; i <= m - need; ++i) {
      idx.push_back(i);
      visit(i + 1, need - 1);
      idx.pop_back();
    }
  };
  visit(0, n - 1);
  return !foundRay;
}

ConvexBody ConvexBody::halfspaces(Matrix A, Vector b) {
  if (A.rows() == 0 || A.rows() != b.size())
    throw std::invalid_argument("halfspaces: need matching nonempty A, b");
  for (int i = 0; i < A.rows(); ++i)
    if (A.row(i).norm() < 1e-14)
      throw std::invalid_argument("halfspaces: zero row " + std::to_string(i));
  ConvexBody c;
  c.kind_ = BodyKind::Halfspaces;
  c.dim_ = static_cast<int>(A.cols());
  c.A_ = std::move(A);
  c.b_ = std::move(b);
  return c;
}

ConvexBody ConvexBody::hull(std::vector<Vector> points) {
  if (points.empty()) throw std::invalid_argument("hull: need at least one point");
  const Eigen::Index n = points[0].size();
  for (const Vector& p : points)
    if (p.size() != n) throw std::invalid_argument("hull: inconsistent point dimensions");
  ConvexBody c;
  c.kind_ = BodyKind::Hull;
  c.dim_ = static_cast<int>(n);
  c.pts_ = std::move(points);
  return c;
}

ConvexBody ConvexBody::ball(NormSpec norm, double radius, Vector center) {
  if (!(radius > 0) || !std::isfinite(radius))
    throw std::invalid_argument("ball: radius must be positive and finite");
  if (!norm.admitsDimension(static_cast<int>(center.size())))
    throw std::invalid_argument("ball: norm does not admit the center's dimension");
  ConvexBody c;
  c.kind_ = BodyKind::Ball;
  c.dim_ = static_cast<int>(center.size());
  c.norm_ = std::move(norm);
  c.radius_ = radius;
  c.center_ = std::move(center);
  return c;
}

const NormSpec& ConvexBody::ballNorm() const {
  if (!norm_) throw std::logic_error("ballNorm: not a ball body");
  return *norm_;
}

std::string ConvexBody::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case BodyKind::Halfspaces:
      os << "halfspaces(" << A_.rows() << " rows, dim " << dim_ << ")";
      break;
    case BodyKind::Hull:
      os << "hull(" << pts_.size() << " points, dim " << dim_ << ")";
      break;
    case BodyKind::Ball:
      os << "ball(" << norm_->describe() << ", radius " << radius_ << ", dim " << dim_ << ")";
      break;
  }
  return os.str();
}

bool ConvexBody::contains(const Vector& x, double tol) const {
  if (x.size() != dim_) throw std::invalid_argument("contains: dimension mismatch");
  switch (kind_) {
    case BodyKind::Halfspaces: {
      for (int i = 0; i < A_.rows(); ++i)
        if (A_.row(i).dot(x) - b_[i] > tol * std::max(1.0, A_.row(i).norm())) return false;
      return true;
    }
    case BodyKind::Hull:
      return (project(x) - x).norm() <= tol;
    case BodyKind::Ball:
      return (*norm_)(x - center_) <= radius_ + tol;
  }
  return false;
}

Vector ConvexBody::project(const Vector& x, Vector* hullWarmStart) const {
  if (x.size() != dim_) throw std::invalid_argument("project: dimension mismatch");
  switch (kind_) {
    case BodyKind::Halfspaces:
      return projectHalfspacesDykstra(A_, b_, x);
    case BodyKind::Hull: {
      if (pts_.size() == 1) return pts_[0];
      if (subsetBudget(static_cast<int>(pts_.size()), std::min<int>(pts_.size(), dim_ + 1)) <=
          2e5)
        return projectHullExact(pts_, x);
      return projectHullFista(pts_, x, hullWarmStart);
    }
    case BodyKind::Ball:
      return projectNormBall(*norm_, radius_, center_, x);
  }
  throw std::logic_error("project: unhandled body kind");
}

bool ConvexBody::bounded() const {
  switch (kind_) {
    case BodyKind::Hull:
    case BodyKind::Ball:
      return true;
    case BodyKind::Halfspaces:
      return coneIsTrivial(A_);
  }
  return false;
}

std::vector<Vector> ConvexBody::vertexList() const {
  switch (kind_) {
    case BodyKind::Hull:
      return pts_;
    case BodyKind::Ball: {
      std::vector<Vector> vs;
      if (norm_->kind() == NormKind::L1) {
        for (int i = 0; i < dim_; ++i)
          for (double s : {1.0, -1.0}) {
            Vector v = center_;
            v[i] += s * radius_;
            vs.push_back(v);
          }
        return vs;
      }
      if (norm_->kind() == NormKind::LInf) {
        if (dim_ > 16) throw std::logic_error("vertexList: box has too many corners");
        for (long mask = 0; mask < (1L << dim_); ++mask) {
          Vector v = center_;
          for (int i = 0; i < dim_; ++i) v[i] += (mask >> i & 1) ? radius_ : -radius_;
          vs.push_back(v);
        }
        return vs;
      }
      throw std::logic_error("vertexList: ball of this norm has no vertex description");
    }
    case BodyKind::Halfspaces: {
      if (!bounded()) throw std::logic_error("vertexList: unbounded polyhedron");
      const int n = dim_;
      const int m = static_cast<int>(A_.rows());
      if (m < n) throw std::logic_error("vertexList: too few halfspaces for a vertex");
      std::vector<Vector> vs;
      std::vector<int> idx;
      std::function<void(int, int)> visit = [&](int startAt, int need) {
        if (need == 0) {
          Matrix AS(n, n);
          Vector bs(n);
          for (int j = 0; j < n; ++j) {
            AS.row(j) = A_.row(idx[j]);
            bs[j] = b_[idx[j]];
          }
          Eigen::FullPivLU<Matrix> lu(AS);
          if (!lu.isInvertible()) return;
          const Vector v = lu.solve(bs);
          if (!contains(v, 1e-8 * (1.0 + v.norm()))) return;
          for (const Vector& w : vs)
            if ((w - v).lpNorm<Eigen::Infinity>() <= 1e-8 * (1.0 + v.norm())) return;
          vs.push_back(v);
          return;
        }
        for (int i = startAt; i <= m - need; ++i) {
          idx.push_back(i);
          visit(i + 1, need - 1);
          idx.pop_back();
        }
      };
      visit(0, n);
      if (vs.empty()) throw std::logic_error("vertexList: no vertices found");
      return vs;
    }
  }
  throw std::logic_error("vertexList: unhandled body kind");
}

double ConvexBody::linearInfimum(const Vector& u) const {
  if (u.size() != dim_) throw std::invalid_argument("linearInfimum: dimension mismatch");
  switch (kind_) {
    case BodyKind::Ball:
      return u.dot(center_) - radius_ * norm_->dual(u);
    case BodyKind::Hull: {
      double best = kInf;
      for (const Vector& p : pts_) best = std::min(best, u.dot(p));
      return best;
    }
    case BodyKind::Halfspaces: {
      if (bounded()) {
        double best = kInf;
        for (const Vector& v : vertexList()) best = std::min(best, u.dot(v));
        return best;
      }
      // Follow the projection of points far along -u; on a polyhedron the
      // value <u, proj(y0 - t u)> is exactly the infimum once the optimal
      // face is reached, so stabilization across doublings certifies it.
      const Vector y0 = project(Vector::Zero(dim_));
      double prev = u.dot(y0);
      for (double t = 1.0; t <= 1.1e12; t *= 2.0) {
        const Vector p = project(y0 - t * u);
        const double v = u.dot(p);
        if (v < -1e12) return -kInf;
        if (std::abs(v - prev) <= 1e-11 * (1.0 + std::abs(v))) return v;
        prev = v;
      }
      return -kInf;
    }
  }
  throw std::logic_error("linearInfimum: unhandled body kind");
}

double ConvexBody::supportValue(const Vector& u) const {
  const double inf = linearInfimum(-u);
  return inf == -kInf ? kInf : -inf;
}

ConvexBody ConvexBody::mapped(const Matrix& g) const {
  if (g.rows() != dim_ || g.cols() != dim_)
    throw std::invalid_argument("mapped: dimension mismatch");
  switch (kind_) {
    case BodyKind::Halfspaces: {
      // g C = {x : A g^{-1} x <= b}
      return halfspaces(A_ * g.inverse(), b_);
    }
    case BodyKind::Hull: {
      std::vector<Vector> mappedPts;
      mappedPts.reserve(pts_.size());
      for (const Vector& p : pts_) mappedPts.push_back(g * p);
      return hull(std::move(mappedPts));
    }
    case BodyKind::Ball:
      return ball(*norm_, radius_, g * center_);
  }
  throw std::logic_error("mapped: unhandled body kind");
}

bool ConvexBody::invariantUnder(const GroupAction& G, double tol) const {
  if (G.dimension() != dim_) throw std::invalid_argument("invariantUnder: dimension mismatch");
  for (int e = 0; e < G.size(); ++e) {
    const Matrix& g = G.elements()[e];
    switch (kind_) {
      case BodyKind::Ball: {
        if ((g * center_ - center_).lpNorm<Eigen::Infinity>() > tol) return false;
        // The map must also preserve the ball's own norm.
        Rng rng(0x0b0d7ULL + static_cast<unsigned long long>(e));
        for (int s = 0; s < 64; ++s) {
          const Vector y = uniformBox(rng, dim_, 1.0);
          if (std::abs((*norm_)(g * y) - (*norm_)(y)) > tol * (1.0 + (*norm_)(y))) return false;
        }
        break;
      }
      case BodyKind::Hull: {
        const ConvexBody img = mapped(g);
        for (const Vector& p : pts_)
          if (!img.contains(p, tol)) return false;
        for (const Vector& p : img.pts_)
          if (!contains(p, tol)) return false;
        break;
      }
      case BodyKind::Halfspaces: {
        // Compare normalized halfspace descriptions as multisets.
        const ConvexBody img = mapped(g);
        const int m = static_cast<int>(A_.rows());
        if (img.A_.rows() != m) return false;
        std::vector<bool> used(m, false);
        for (int i = 0; i < m; ++i) {
          const double ni = img.A_.row(i).norm();
          bool matched = false;
          for (int j = 0; j < m && !matched; ++j) {
            if (used[j]) continue;
            const double nj = A_.row(j).norm();
            if ((img.A_.row(i) / ni - A_.row(j) / nj).lpNorm<Eigen::Infinity>() <= tol &&
                std::abs(img.b_[i] / ni - b_[j] / nj) <= tol) {
              used[j] = true;
              matched = true;
            }
          }
          if (!matched) return false;
        }
        break;
      }
    }
  }
  return true;
}

double minkowskiGauge(const ConvexBody& C, const Vector& x) {
  if (x.size() != C.dimension()) throw std::invalid_argument("minkowskiGauge: dimension mismatch");
  // 0 must be an interior point; decided exactly per body kind.
  bool interior = false;
  switch (C.kind()) {
    case BodyKind::Ball:
      interior = C.ballNorm()(C.ballCenter()) < C.ballRadius() - 1e-12 * (1.0 + C.ballRadius());
      break;
    case BodyKind::Halfspaces: {
      interior = true;
      for (int i = 0; i < C.rows().rows(); ++i)
        if (C.offsets()[i] <= 1e-10 * C.rows().row(i).norm()) interior = false;
      break;
    }
    case BodyKind::Hull: {
      // 0 is interior iff the support function is positive on every nonzero
      // direction, i.e. {u : <p_j, u> <= 0 for all j} = {0}.
      Matrix P(C.points().size(), C.dimension());
      for (std::size_t j = 0; j < C.points().size(); ++j) P.row(j) = C.points()[j];
      interior = coneIsTrivial(P);
      break;
    }
  }
  if (!interior)
    throw std::invalid_argument("minkowskiGauge: 0 is not an interior point of the body");

  if (x.norm() == 0.0) return 0.0;
  double hi = 1.0;
  int guard = 0;
  while (!C.contains(x / hi, 1e-12) && guard++ < 300) hi *= 2.0;
  if (guard >= 300) throw std::runtime_error("minkowskiGauge: no finite scaling found");
  double lo = 0.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (C.contains(x / mid, 1e-12))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

ClosestPairResult closestPair(const ConvexBody& A, const ConvexBody& B, int maxIter,
                              double tol) {
  if (A.dimension() != B.dimension())
    throw std::invalid_argument("closestPair: dimension mismatch");
  const int n = A.dimension();
  Vector warmA, warmB;
  Vector x = A.project(Vector::Zero(n), &warmA);
  Vector y = B.project(Vector::Zero(n), &warmB);
  Vector px = x, py = y, ax = x, ay = y;
  double t = 1.0;
  double prevGap = kInf;
  int iter = 0;
  int calm = 0;
  for (; iter < maxIter; ++iter) {
    const Vector d = ax - ay;
    const Vector nx = A.project(ax - 0.5 * d, &warmA);
    const Vector ny = B.project(ay + 0.5 * d, &warmB);
    const double gap = (nx - ny).norm();
    if (gap > prevGap) {  // restart the momentum when it overshoots
      t = 1.0;
      ax = nx;
      ay = ny;
    } else {
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      ax = nx + ((t - 1.0) / tn) * (nx - px);
      ay = ny + ((t - 1.0) / tn) * (ny - py);
      t = tn;
    }
    const double moved =
        std::max((nx - px).lpNorm<Eigen::Infinity>(), (ny - py).lpNorm<Eigen::Infinity>());
    px = nx;
    py = ny;
    prevGap = gap;
    calm = moved < tol * (1.0 + nx.norm() + ny.norm()) ? calm + 1 : 0;
    if (calm >= 3) break;
  }
  // One final clean projection pass without momentum.
  px = A.project(px, &warmA);
  py = B.project(py, &warmB);
  return {px, py, (px - py).norm(), iter};
}

SeparationResult separateInvariant(const ConvexBody& A, const ConvexBody& B,
                                   const GroupAction& G, double gapTol) {
  if (A.dimension() != B.dimension() || G.dimension() != A.dimension())
    throw std::invalid_argument("separateInvariant: dimension mismatch");
  SeparationResult out;
  out.pair = closestPair(A, B);
  out.euclideanGap = out.pair.gap;
  if (out.pair.gap <= gapTol) {
    out.degenerate = true;
    out.note = "bodies touch or overlap within tolerance; no strict separation exists";
    return out;
  }
  const Vector u0 = (out.pair.inB - out.pair.inA) / out.pair.gap;
  const GroupAction Gs = G.adjoint();
  out.functional = Gs.symmetrize(u0);
  if (out.functional.norm() < 1e-10) {
    out.degenerate = true;
    out.note = "averaged functional vanishes; the bodies admit no invariant separation";
    return out;
  }
  double fixRes = 0.0;
  for (int e = 0; e < Gs.size(); ++e)
    fixRes = std::max(fixRes,
                      (Gs.apply(e, out.functional) - out.functional).lpNorm<Eigen::Infinity>());
  out.fixedResidual = fixRes;
  out.supA = A.supportValue(out.functional);
  out.infB = B.linearInfimum(out.functional);
  if (!std::isfinite(out.supA) || !std::isfinite(out.infB)) {
    out.degenerate = true;
    out.note = "a body is unbounded in the functional direction";
    return out;
  }
  out.level = 0.5 * (out.supA + out.infB);
  out.marginA = out.level - out.supA;
  out.marginB = out.infB - out.level;
  return out;
}

AnnihilatorResult invariantAnnihilator(const Matrix& H, const GroupAction& G, double tol) {
  const int n = G.dimension();
  if (H.rows() != n) throw std::invalid_argument("invariantAnnihilator: dimension mismatch");
  const GroupAction Gs = G.adjoint();
  const int m = static_cast<int>(H.cols());
  Matrix K(m + n, n);
  K.topRows(m) = H.transpose();
  K.bottomRows(n) = Matrix::Identity(n, n) - Gs.reynolds();

  Eigen::BDCSVD<Matrix> svd(K, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * std::max(sv(0), 1.0);
  int nullity = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= cutoff) ++nullity;

  AnnihilatorResult out;
  out.subspaceDim = nullity;
  if (nullity == 0) {
    out.note = "only the zero functional annihilates the span among invariant functionals";
    return out;
  }
  Vector u = svd.matrixV().col(n - 1);
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > 1e-12) {
      if (u[i] < 0) u = -u;
      break;
    }
  }
  out.found = true;
  out.functional = u / u.norm();
  out.residualH = (H.transpose() * out.functional).lpNorm<Eigen::Infinity>();
  out.residualFix =
      (Gs.reynolds() * out.functional - out.functional).lpNorm<Eigen::Infinity>();
  return out;
}

}  // namespace symvp
