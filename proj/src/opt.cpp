#include "symvp/opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

namespace symvp {

MinimizeResult nelderMead(const std::function<double(const Vector&)>& f, const Vector& start,
                          const NelderMeadOptions& opts) {
  const int n = static_cast<int>(start.size());
  if (n == 0) throw std::invalid_argument("nelderMead: empty start vector");

  std::vector<Vector> xs(n + 1, start);
  std::vector<double> fs(n + 1);
  for (int i = 1; i <= n; ++i) xs[i][i - 1] += opts.scale;
  for (int i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  std::vector<int> order(n + 1);
  int iter = 0;
  for (; iter < opts.maxIter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];

    double spread = 0.0, vspread = 0.0;
    for (int i = 0; i <= n; ++i) {
      spread = std::max(spread, (xs[i] - xs[best]).norm());
      if (std::isfinite(fs[i])) vspread = std::max(vspread, fs[i] - fs[best]);
    }
    if (spread < opts.simplexTol && vspread < opts.valueTol) break;

    Vector centroid = Vector::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= n;

    const Vector xr = centroid + (centroid - xs[worst]);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const Vector xe = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[second]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      const Vector xc = centroid + 0.5 * ((outside ? xr : xs[worst]) - centroid);
      const double fc = f(xc);
      if (fc < (outside ? fr : fs[worst])) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fs[i] < fs[best]) best = i;
  return {xs[best], fs[best], iter};
}

MinimizeResult gradientDescent(const std::function<double(const Vector&)>& f,
                               const std::function<Vector(const Vector&)>& grad,
                               const Vector& start, int maxIter, double gradTol) {
  Vector x = start;
  double fx = f(x);
  double step = 1.0;
  int iter = 0;
  for (; iter < maxIter; ++iter) {
    const Vector g = grad(x);
    const double gg = g.squaredNorm();
    if (std::sqrt(gg) < gradTol) break;
    step = std::min(step * 2.0, 1e6);
    bool moved = false;
    while (step > 1e-18) {
      const Vector cand = x - step * g;
      const double fc = f(cand);
      if (fc <= fx - 1e-4 * step * gg) {
        x = cand;
        fx = fc;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {x, fx, iter};
}

Vector projectSimplex(const Vector& y) {
  const int n = static_cast<int>(y.size());
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  int rho = 0;
  for (int j = 0; j < n; ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / (j + 1);
    if (u[j] - t > 0.0) {
      rho = j + 1;
      theta = t;
    }
  }
  (void)rho;
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = std::max(y[i] - theta, 0.0);
  return x;
}

namespace {

// Projection onto {x : ||x||_1 <= r} via the sorted-threshold rule.
Vector projectL1(const Vector& v, double r) {
  if (v.cwiseAbs().sum() <= r) return v;
  const int n = static_cast<int>(v.size());
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = std::abs(v[i]);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (int j = 0; j < n; ++j) {
    cum += u[j];
    const double t = (cum - r) / (j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  Vector x(n);
  for (int i = 0; i < n; ++i) {
    const double m = std::max(std::abs(v[i]) - theta, 0.0);
    x[i] = v[i] < 0 ? -m : m;
  }
  return x;
}

// Projection onto {x : sum_i w_i x_i^2 <= r^2}: x_i = d_i / (1 + t w_i)
// with the multiplier t >= 0 found by Newton on the constraint.
Vector projectWeightedL2(const Vector& w, const Vector& d, double r) {
  double wd = 0.0;
  for (int i = 0; i < d.size(); ++i) wd += w[i] * d[i] * d[i];
  if (wd <= r * r) return d;
  double t = 0.0;
  for (int it = 0; it < 200; ++it) {
    double g = -r * r, dg = 0.0;
    for (int i = 0; i < d.size(); ++i) {
      const double s = 1.0 + t * w[i];
      g += w[i] * d[i] * d[i] / (s * s);
      dg += -2.0 * w[i] * w[i] * d[i] * d[i] / (s * s * s);
    }
    const double next = t - g / dg;
    if (!std::isfinite(next) || std::abs(next - t) < 1e-16 * (1.0 + t)) {
      t = std::max(next, 0.0);
      break;
    }
    t = std::max(next, 0.0);
  }
  Vector x(d.size());
  for (int i = 0; i < d.size(); ++i) x[i] = d[i] / (1.0 + t * w[i]);
  return x;
}

}  // namespace

Vector projectNormBall(const NormSpec& norm, double radius, const Vector& center,
                       const Vector& p) {
  if (radius < 0) throw std::invalid_argument("projectNormBall: negative radius");
  const Vector d = p - center;
  switch (norm.kind()) {
    case NormKind::L2: {
      const double nd = d.norm();
      return nd <= radius ? p : Vector(center + (radius / nd) * d);
    }
    case NormKind::LInf:
      return center + d.cwiseMax(-radius).cwiseMin(radius);
    case NormKind::L1:
      return center + projectL1(d, radius);
    case NormKind::WeightedL2:
      return center + projectWeightedL2(norm.weights(), d, radius);
  }
  throw std::logic_error("projectNormBall: unhandled norm kind");
}

MinMaxResult smoothedLinearMinMax(const Matrix& A, const Vector& c, const NormSpec& ballNorm,
                                  double radius, const Vector& center, int totalIters) {
  const int m = static_cast<int>(A.rows());
  if (m == 0) throw std::invalid_argument("smoothedLinearMinMax: no rows");
  if (A.cols() != center.size() || c.size() != m)
    throw std::invalid_argument("smoothedLinearMinMax: dimension mismatch");

  const double opNorm = A.jacobiSvd().singularValues()(0);
  const double L2 = std::max(opNorm * opNorm, 1e-30);

  auto exactValue = [&](const Vector& u) { return (A * u + c).maxCoeff(); };

  Vector u = center;
  const double mus[] = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  const int perStage = std::max(totalIters / 5, 1);
  int used = 0;
  for (double mu : mus) {
    const double step = mu / L2;
    Vector y = u, uPrev = u;
    double t = 1.0;
    for (int k = 0; k < perStage; ++k, ++used) {
      const Vector z = A * y + c;
      const double zmax = z.maxCoeff();
      Vector s = ((z.array() - zmax) / mu).exp();
      s /= s.sum();
      const Vector g = A.transpose() * s;
      const Vector uNext = projectNormBall(ballNorm, radius, center, y - step * g);
      const double tNext = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = uNext + ((t - 1.0) / tNext) * (uNext - uPrev);
      uPrev = u = uNext;
      t = tNext;
    }
  }
  return {u, exactValue(u), used};
}

}  // namespace symvp
