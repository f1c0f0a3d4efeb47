#include "symvp/consequences.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "symvp/opt.hpp"
#include "symvp/sampling.hpp"

namespace symvp {
namespace {

// Rays through a base point: coordinate axes, the diagonal, and a few seeded
// directions, each at a short ladder of distances.
std::vector<Vector> rayGrid(const Vector& base, int extraDirs, unsigned long long seed) {
  const int n = static_cast<int>(base.size());
  std::vector<Vector> dirs;
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  dirs.push_back(Vector::Ones(n));
  dirs.push_back(-Vector::Ones(n));
  Rng rng(seed);
  for (int i = 0; i < extraDirs; ++i) dirs.push_back(gaussianDirection(rng, n));
  const double steps[] = {0.25, 0.5, 1.0, 2.0};
  std::vector<Vector> out;
  out.reserve(dirs.size() * 4);
  for (const Vector& d : dirs)
    for (double t : steps) out.push_back(base + t * d);
  return out;
}

std::string formatRunFailure(int n, const std::string& inner) {
  std::ostringstream os;
  os << "descent run n=" << n << " failed: " << inner;
  return os.str();
}

// Simplex polish of a smoothed min-max solution on the exact piecewise-linear
// objective, constrained to the ball by an indicator.
Vector polishMinMax(const Matrix& A, const Vector& c, const NormSpec& ball, double radius,
                    const Vector& center, const MinMaxResult& mm, double scale) {
  auto exact = [&](const Vector& u) {
    if (ball(u - center) > radius * (1.0 + 1e-12) + 1e-15) return kInf;
    return (A * u + c).maxCoeff();
  };
  MinimizeResult polished = nelderMead(exact, mm.u, {2000, 1e-13, 1e-15, scale});
  return polished.value < mm.value ? polished.x : mm.u;
}

}  // namespace

PalaisSmaleResult palaisSmaleSequence(const ScalarFunction& phi, const GroupAction& G,
                                      const Vector& x0, int count, const NormSpec& norm,
                                      unsigned long long seed) {
  if (!phi.hasGradient())
    throw std::invalid_argument("palaisSmaleSequence: objective must provide a gradient");
  if (count < 1) throw std::invalid_argument("palaisSmaleSequence: count must be positive");

  PalaisSmaleResult out;
  out.succeeded = true;
  Vector hint = x0;
  for (int n = 1; n <= count; ++n) {
    EkelandParams p;
    p.epsilon = 1.0 / n;
    p.delta = 1.0 / n;
    p.start = StartPolicy::ProofSchedule;
    p.norm = norm;
    p.verifySamples = 2000;
    p.seed = seed + static_cast<unsigned long long>(n);
    EkelandResult r = ekelandIterate(phi, G, hint, p, {x0});
    if (!r.succeeded) {
      out.succeeded = false;
      out.note = formatRunFailure(n, r.note);
      break;
    }
    PalaisSmaleEntry e;
    e.n = n;
    e.point = r.point;
    e.value = r.certificate.valueAtPoint;
    e.gradDualNorm = norm.dual(phi.gradient(r.point));
    e.cloudMargin = r.certificate.inequalityMargin;
    out.entries.push_back(e);
    out.infimumEstimate = std::min(out.infimumEstimate, r.approxInfimum);
    if (e.gradDualNorm > 1.0 / n + 1e-6) {
      out.succeeded = false;
      std::ostringstream os;
      os << "gradient bound failed at n=" << n << ": dual norm " << e.gradDualNorm
         << " exceeds " << 1.0 / n;
      out.note = os.str();
      break;
    }
    hint = r.point;
  }
  return out;
}

DenseRangeProbe denseRangeProbe(const ScalarFunction& f, const GroupAction& G, const Vector& u,
                                double k, double c, const NormSpec& norm, int maxRuns, double tol,
                                unsigned long long seed) {
  if (!f.hasGradient())
    throw std::invalid_argument("denseRangeProbe: objective must provide a gradient");
  if (u.size() != f.dimension() || f.dimension() != G.dimension())
    throw std::invalid_argument("denseRangeProbe: dimension mismatch");
  if (k <= 0.0) throw std::invalid_argument("denseRangeProbe: growth slope must be positive");

  DenseRangeProbe out;
  out.target = u;

  GroupAction Gstar = G.adjoint();
  if ((Gstar.symmetrize(u) - u).lpNorm<Eigen::Infinity>() > 1e-9) {
    out.note = "target functional is not fixed under the transposed action";
    return out;
  }
  if (norm.dual(u) > k + 1e-12) {
    out.note = "target functional lies outside the dual ball allowed by the growth rate";
    return out;
  }

  const int n = f.dimension();
  Rng rng(seed ^ 0x67726f77ULL);
  std::vector<Vector> dirs;
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  for (int i = 0; i < 32; ++i) dirs.push_back(gaussianDirection(rng, n));
  const double radii[] = {1.0, 3.16, 10.0, 31.6, 100.0, 316.0, 1000.0};
  out.growthMargin = kInf;
  for (const Vector& d : dirs) {
    for (double r : radii) {
      Vector x = r * d;
      double fx = f(x);
      double margin = (fx == kInf) ? kInf : fx - k * norm(x) - c;
      out.growthMargin = std::min(out.growthMargin, margin);
    }
  }
  if (out.growthMargin < -1e-9) {
    out.note = "growth precondition fails on the sampled rays";
    return out;
  }

  Vector target = u;
  ScalarFunction shifted(
      "shifted objective", n,
      [f, target](const Vector& x) { return extAdd(f(x), -target.dot(x)); },
      FunctionFlags{true, true, f.flags().lsc, f.flags().convex},
      [f, target](const Vector& x) { return Vector(f.gradient(x) - target); });

  Vector hint = Vector::Zero(n);
  for (int run = 1; run <= maxRuns; ++run) {
    EkelandParams p;
    p.epsilon = 1.0 / run;
    p.delta = 1.0 / run;
    p.start = StartPolicy::ProofSchedule;
    p.norm = norm;
    p.verifySamples = 2000;
    p.seed = seed + 31ULL * static_cast<unsigned long long>(run);
    EkelandResult r = ekelandIterate(shifted, G, hint, p);
    if (!r.succeeded) {
      out.residualHistory.push_back(kInf);
      continue;
    }
    hint = r.point;
    double res = norm.dual(f.gradient(r.point) - u);
    out.residualHistory.push_back(res);
    if (res < out.residual) {
      out.residual = res;
      out.bestPoint = r.point;
    }
    if (out.residual <= tol) break;
  }
  out.succeeded = out.residual <= tol;
  if (!out.succeeded && out.note.empty())
    out.note = "gradient residual stayed above the requested tolerance";
  return out;
}

SubgradientCheck epsSubdifferentialCheck(const ScalarFunction& f, const Vector& x0,
                                         const Vector& h, double eps,
                                         const GroupAction* orbitImages, int boxSamples,
                                         unsigned long long seed) {
  if (x0.size() != f.dimension() || h.size() != f.dimension())
    throw std::invalid_argument("epsSubdifferentialCheck: dimension mismatch");
  if (eps < 0.0) throw std::invalid_argument("epsSubdifferentialCheck: eps must be nonnegative");
  const double f0 = f(x0);
  if (!std::isfinite(f0))
    throw std::invalid_argument(
        "epsSubdifferentialCheck: base point must lie in the effective domain");

  const int n = f.dimension();
  std::vector<Vector> grid = rayGrid(x0, 16, seed);
  Rng rng(seed ^ 0x736c61636bULL);
  for (int i = 0; i < boxSamples; ++i) grid.push_back(x0 + uniformBox(rng, n, 3.0));
  grid.push_back(x0);
  if (orbitImages != nullptr) {
    const std::size_t base = std::min<std::size_t>(grid.size(), 64);
    for (std::size_t i = 0; i < base; ++i)
      for (const Vector& y : orbitImages->orbit(grid[i])) grid.push_back(y);
  }

  SubgradientCheck out;
  out.checkedPoints = static_cast<int>(grid.size());
  out.worstSlack = kInf;
  out.worstPoint = x0;
  for (const Vector& x : grid) {
    const double fx = f(x);
    if (fx == kInf) continue;
    const double slack = fx - f0 + eps - h.dot(x - x0);
    if (slack < out.worstSlack) {
      out.worstSlack = slack;
      out.worstPoint = x;
    }
  }
  out.member = out.worstSlack >= -1e-9;
  return out;
}

BronstedRockafellarResult bronstedRockafellar(const ScalarFunction& f, const GroupAction& G,
                                              const Vector& x0, const Vector& x0star, double eps,
                                              double lambda, const NormSpec& norm,
                                              unsigned long long seed) {
  if (eps <= 0.0 || lambda <= 0.0)
    throw std::invalid_argument("bronstedRockafellar: eps and lambda must be positive");
  if (x0.size() != f.dimension() || x0star.size() != f.dimension() ||
      f.dimension() != G.dimension())
    throw std::invalid_argument("bronstedRockafellar: dimension mismatch");

  BronstedRockafellarResult out;
  GroupAction Gstar = G.adjoint();
  const Vector xbar0 = G.symmetrize(x0);
  const Vector ubar0 = Gstar.symmetrize(x0star);
  out.point = xbar0;
  out.functional = ubar0;

  SubgradientCheck pre =
      epsSubdifferentialCheck(f, xbar0, ubar0, eps, &G, 500, seed ^ 0x707265ULL);
  if (!pre.member) {
    std::ostringstream os;
    os << "approximate subgradient precondition fails at the symmetrized start (slack "
       << pre.worstSlack << ")";
    out.note = os.str();
    return out;
  }

  const int n = f.dimension();
  ScalarFunction::Grad tilted;
  if (f.hasGradient())
    tilted = [f, ubar0](const Vector& x) { return Vector(f.gradient(x) - ubar0); };
  // Bounded below by phi(xbar0) - eps via the subgradient inequality.
  ScalarFunction phi(
      "tilted objective", n,
      [f, ubar0](const Vector& x) { return extAdd(f(x), -ubar0.dot(x)); },
      FunctionFlags{true, true, f.flags().lsc, f.flags().convex}, tilted);

  EkelandParams p;
  p.epsilon = lambda;
  p.delta = eps;
  p.start = StartPolicy::GivenStart;
  p.norm = norm;
  p.seed = seed;
  out.inner = ekelandIterate(phi, G, xbar0, p, {xbar0});
  if (!out.inner.succeeded) {
    out.note = "descent run failed: " + out.inner.note;
    return out;
  }

  const Vector z = out.inner.point;
  out.point = z;
  out.pointDistance = norm(z - xbar0);

  Vector zstar;
  if (f.hasGradient()) {
    zstar = Gstar.symmetrize(f.gradient(z));
  } else {
    // Search the dual ball around ubar0 for a vector satisfying the exact
    // subgradient inequalities sampled on rays and box points around z.
    std::vector<Vector> pts = rayGrid(z, 8, seed ^ 0x677269ULL);
    Rng rng(seed ^ 0x626f78ULL);
    for (int i = 0; i < 100; ++i) pts.push_back(z + uniformBox(rng, n, 2.0));
    const double fz = f(z);
    std::vector<Vector> rows;
    std::vector<double> offs;
    for (const Vector& x : pts) {
      const double fx = f(x);
      if (fx == kInf) continue;
      rows.push_back(x - z);
      offs.push_back(fz - fx);
    }
    Matrix A(static_cast<int>(rows.size()), n);
    Vector c(static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      A.row(static_cast<int>(i)) = rows[i].transpose();
      c[static_cast<int>(i)] = offs[i];
    }
    MinMaxResult mm = smoothedLinearMinMax(A, c, norm.dualSpec(), lambda, ubar0, 8000);
    zstar =
        Gstar.symmetrize(polishMinMax(A, c, norm.dualSpec(), lambda, ubar0, mm, lambda / 8.0));
  }
  out.functional = zstar;
  out.functionalDistance = norm.dual(zstar - ubar0);
  out.pointInvarianceResidual = G.invarianceResidual(z);
  out.functionalFixedResidual = Gstar.invarianceResidual(zstar);

  SubgradientCheck membership =
      epsSubdifferentialCheck(f, z, zstar, 0.0, &G, 10000, seed ^ 0x6672657368ULL);
  out.membershipMargin = membership.worstSlack;

  out.succeeded = out.note.empty() && out.membershipMargin >= -1e-8 &&
                  out.pointDistance <= eps / lambda + 1e-8 &&
                  out.functionalDistance <= lambda + 1e-8;
  if (!out.succeeded && out.note.empty()) {
    if (out.membershipMargin < -1e-8)
      out.note = "returned functional is not a subgradient at the returned point";
    else if (out.pointDistance > eps / lambda + 1e-8)
      out.note = "returned point left the eps/lambda ball around the start";
    else
      out.note = "returned functional left the lambda ball around the input functional";
  }
  return out;
}

BishopPhelpsResult bishopPhelps(const ConvexBody& C, const GroupAction& G, const Vector& u,
                                double eps, const NormSpec& norm, unsigned long long seed) {
  if (eps <= 0.0) throw std::invalid_argument("bishopPhelps: eps must be positive");
  if (C.dimension() != G.dimension() || u.size() != C.dimension())
    throw std::invalid_argument("bishopPhelps: dimension mismatch");
  if (!C.bounded()) throw std::invalid_argument("bishopPhelps: the body must be bounded");
  if (!C.invariantUnder(G))
    throw std::invalid_argument("bishopPhelps: the body is not invariant under the group");
  GroupAction Gstar = G.adjoint();
  if ((Gstar.symmetrize(u) - u).lpNorm<Eigen::Infinity>() > 1e-9)
    throw std::invalid_argument(
        "bishopPhelps: the functional must be fixed under the transposed action");

  const std::vector<Vector> vertices = C.vertexList();
  if (vertices.empty()) throw std::invalid_argument("bishopPhelps: empty vertex description");

  const int n = C.dimension();
  Vector target = u;
  ScalarFunction support(
      "support objective", n,
      [C, target](const Vector& x) {
        if (!C.contains(x)) return kInf;
        return -target.dot(x);
      },
      FunctionFlags{true, true, true, true});

  Vector start = Vector::Zero(n);
  for (const Vector& v : vertices) start += v;
  start /= static_cast<double>(vertices.size());

  BishopPhelpsResult out;
  EkelandParams p;
  p.epsilon = eps;
  p.delta = eps;
  p.start = StartPolicy::ProofSchedule;
  p.norm = norm;
  p.seed = seed;
  out.inner = ekelandIterate(support, G, start, p, vertices);
  if (!out.inner.succeeded) {
    out.note = "descent run failed: " + out.inner.note;
    return out;
  }

  const Vector xt = out.inner.point;
  out.supportPoint = xt;

  // Perturbation h with dual(h) <= eps making u + h attain its supremum over
  // the body at xt; it exists because the certified descent inequality bounds
  // <u, v - xt> by eps * ||v - xt|| over the vertices.
  const int m = static_cast<int>(vertices.size());
  Matrix A(m, n);
  Vector c(m);
  for (int i = 0; i < m; ++i) {
    A.row(i) = (vertices[i] - xt).transpose();
    c[i] = target.dot(vertices[i] - xt);
  }
  const NormSpec dualBall = norm.dualSpec();
  MinMaxResult mm = smoothedLinearMinMax(A, c, dualBall, eps, Vector::Zero(n), 10000);
  Vector h = polishMinMax(A, c, dualBall, eps, Vector::Zero(n), mm, eps / 8.0);

  // The valley of the support violation is flat wherever several vertices tie,
  // so the solver may stop far out in it; shrink the perturbation along its
  // ray while the violation stays within certificate tolerance.
  auto violation = [&](const Vector& hh) { return (A * hh + c).maxCoeff(); };
  const double tau = std::max(violation(h), 0.0) + 5e-9;
  if (violation(Vector::Zero(n)) <= tau) {
    h = Vector::Zero(n);
  } else {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (violation(mid * h) <= tau ? hi : lo) = mid;
    }
    h = hi * h;
  }
  h = Gstar.symmetrize(h);

  out.perturbation = h;
  out.functional = target + h;
  out.perturbationNorm = dualBall(h);
  out.supportMargin = -(A * h + c).maxCoeff();
  out.functionalFixedResidual = Gstar.invarianceResidual(out.functional);

  out.succeeded = out.perturbationNorm <= eps + 1e-9 && out.supportMargin >= -1e-8 &&
                  C.contains(xt, 1e-8);
  if (!out.succeeded) {
    if (out.supportMargin < -1e-8)
      out.note = "no supporting perturbation of the requested size was found";
    else if (out.perturbationNorm > eps + 1e-9)
      out.note = "perturbation exceeded the requested dual-norm budget";
    else
      out.note = "support point left the body";
  }
  return out;
}

DualDescriptionResult dualDescriptionCheck(const ScalarFunction& phi, const GroupAction& G,
                                           int sampleCount, unsigned long long seed) {
  if (!phi.hasGradient())
    throw std::invalid_argument("dualDescriptionCheck: objective must provide a gradient");
  if (phi.dimension() != G.dimension())
    throw std::invalid_argument("dualDescriptionCheck: dimension mismatch");

  DualDescriptionResult out;
  ScalarFunction psi = bumpTransform(phi);

  SampleSpec spec;
  spec.count = 300;
  spec.seed = seed;
  GroupConvexityReport conv =
      checkGroupConvexity(psi, G, makeSampleCloud(phi.dimension(), spec));
  out.transformConvex = conv.holds;
  if (!conv.holds)
    out.note = "the reciprocal-square transform is not convex with respect to the group; ";

  const int n = phi.dimension();
  GroupAction::FixedSubspace fix = G.fixedSubspace();
  const int k = fix.dim;

  std::vector<Vector> samples;
  samples.push_back(Vector::Zero(n));
  for (int j = 0; j < k; ++j)
    for (double t : {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5})
      samples.push_back(t * fix.basis.col(j));
  Rng rng(seed ^ 0x73706e);
  for (int i = 0; i < sampleCount; ++i) {
    Vector y = k > 0 ? uniformBox(rng, k, 2.0) : Vector();
    samples.push_back(k > 0 ? Vector(fix.basis * y) : Vector::Zero(n));
  }

  std::vector<Vector> grads;
  for (const Vector& x : samples) {
    const double v = phi(x);
    if (!std::isfinite(v) || v == 0.0) continue;
    Vector g = psi.gradient(x);
    if (g.allFinite()) grads.push_back(g);
  }

  Matrix Gm(n, static_cast<int>(grads.size()));
  for (std::size_t i = 0; i < grads.size(); ++i) Gm.col(static_cast<int>(i)) = grads[i];
  Matrix Q1;
  int r1 = 0;
  if (!grads.empty()) {
    Eigen::BDCSVD<Matrix> svd(Gm, Eigen::ComputeThinU);
    const double top = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-8 * std::max(top, 1.0)) ++r1;
    Q1 = svd.matrixU().leftCols(r1);
  }
  out.gradientSpanDim = r1;

  GroupAction::FixedSubspace dualFix = G.adjoint().fixedSubspace();
  out.fixedDualDim = dualFix.dim;

  if (r1 != dualFix.dim) {
    std::ostringstream os;
    os << out.note << "gradient span has dimension " << r1
       << " but the fixed dual subspace has dimension " << dualFix.dim;
    out.note = os.str();
    out.maxPrincipalAngle = kInf;
    return out;
  }
  if (r1 == 0) {
    out.spansAgree = true;
    out.note += "both subspaces are trivial";
  } else {
    // sin of the largest principal angle: top singular value of the residual
    // of Q1 under the projection onto the fixed dual subspace.  (acos of the
    // smallest direction cosine loses half the precision near zero angles.)
    Matrix residual = Q1 - dualFix.basis * (dualFix.basis.transpose() * Q1);
    Eigen::JacobiSVD<Matrix> svd(residual);
    const double sinTop = svd.singularValues().size() > 0 ? svd.singularValues().maxCoeff() : 0.0;
    out.maxPrincipalAngle = std::asin(std::clamp(sinTop, 0.0, 1.0));
    out.spansAgree = out.maxPrincipalAngle <= 1e-8;
    if (!out.spansAgree) out.note += "principal angle between the spans is not zero";
  }
  out.consistent = out.transformConvex && out.spansAgree;
  return out;
}

}  // namespace symvp
