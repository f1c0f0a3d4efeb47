#include "symvp/ekeland.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "symvp/opt.hpp"
#include "symvp/sampling.hpp"

namespace symvp {

bool coneMember(const ScalarFunction& phi, const NormSpec& norm, double eps, const Vector& base,
                double baseValue, const Vector& x) {
  const double v = phi(x);
  if (v == kInf) return false;
  return v + eps * norm(x - base) <= baseValue;
}

namespace {

struct Frame {
  const ScalarFunction* phi = nullptr;
  Matrix B;  // n x k orthonormal basis of the invariant subspace
  int k = 0;

  Vector lift(const Vector& y) const { return B * y; }
  double value(const Vector& y) const { return (*phi)(B * y); }
  bool hasGrad() const { return phi->hasGradient(); }
  Vector grad(const Vector& y) const { return B.transpose() * phi->gradient(B * y); }
};

struct ScanOutcome {
  Vector y;
  double value = kInf;
  bool unbounded = false;
  bool feasible = false;
};

ScanOutcome globalScan(const Frame& fr, const std::vector<Vector>& startYs,
                       const EkelandParams& p, Rng& rng) {
  ScanOutcome out;
  // Clamp runaway values at the threshold so the search cannot descend all
  // the way to an overflowing evaluation before the flag is inspected.
  auto guarded = [&](const Vector& y) {
    const double v = fr.value(y);
    if (v <= p.unboundedThreshold) {
      out.unbounded = true;
      return p.unboundedThreshold;
    }
    return v;
  };
  auto consider = [&](const Vector& y, double v) {
    if (v < out.value) {
      out.value = v;
      out.y = y;
      out.feasible = true;
    }
    if (v <= p.unboundedThreshold) out.unbounded = true;
  };

  std::vector<Vector> starts;
  for (const Vector& y : startYs)
    if (guarded(y) < kInf) starts.push_back(y);
  if (guarded(Vector::Zero(fr.k)) < kInf) starts.push_back(Vector::Zero(fr.k));
  for (double radius : {1.0, 4.0, 16.0}) {
    int found = 0;
    for (int s = 0; s < 400 && found < 4; ++s) {
      const Vector y = uniformBox(rng, fr.k, radius);
      if (guarded(y) < kInf) {
        starts.push_back(y);
        ++found;
      }
    }
  }
  if (starts.empty()) return out;

  std::sort(starts.begin(), starts.end(),
            [&](const Vector& a, const Vector& b) { return guarded(a) < guarded(b); });
  const int used = std::min<int>(static_cast<int>(starts.size()), p.multiStarts);
  for (int s = 0; s < used; ++s) {
    NelderMeadOptions opts;
    opts.maxIter = p.stageBudget;
    const MinimizeResult r = nelderMead(guarded, starts[s], opts);
    consider(r.x, r.value);
    if (out.unbounded) return out;
  }
  if (fr.hasGrad() && out.feasible) {
    const MinimizeResult g = gradientDescent(guarded,
                                             [&](const Vector& y) { return fr.grad(y); },
                                             out.y, 400);
    consider(g.x, g.value);
  }
  return out;
}

struct StageOutcome {
  Vector y;
  double value = kInf;
  bool unbounded = false;
};

// Minimize phi over the descent cone of (yBase, vBase) inside the subspace.
StageOutcome stageSearch(const Frame& fr, const NormSpec& norm, double eps, const Vector& yBase,
                         double vBase, double searchRadius, const EkelandParams& p, Rng& rng,
                         const std::vector<Vector>& extraStarts, int budget) {
  const Vector xBase = fr.lift(yBase);
  StageOutcome out{yBase, vBase, false};
  auto coneValue = [&](const Vector& y) {
    const Vector x = fr.lift(y);
    const double v = (*fr.phi)(x);
    if (v == kInf) return kInf;
    if (v <= p.unboundedThreshold) {
      out.unbounded = true;
      return p.unboundedThreshold;
    }
    return (v + eps * norm(x - xBase) <= vBase) ? v : kInf;
  };

  auto consider = [&](const Vector& y) {
    const double v = coneValue(y);
    if (v < out.value) {
      out.value = v;
      out.y = y;
    }
  };

  std::vector<Vector> starts = {yBase};
  for (const Vector& y : extraStarts)
    if (coneValue(y) < kInf) starts.push_back(y);
  for (int s = 0; s < 4 * p.multiStarts && static_cast<int>(starts.size()) < p.multiStarts;
       ++s) {
    const double scale = (s % 2 == 0) ? searchRadius : 0.25 * searchRadius;
    const Vector y = yBase + scale * gaussianDirection(rng, fr.k);
    if (coneValue(y) < kInf) starts.push_back(y);
  }

  for (const Vector& y0 : starts) {
    NelderMeadOptions opts;
    opts.maxIter = budget;
    opts.scale = std::max(std::min(0.5, 2.0 * searchRadius), 1e-12);
    const MinimizeResult r = nelderMead(coneValue, y0, opts);
    consider(r.x);
    if (out.unbounded) return out;
  }
  if (fr.hasGrad() && !out.unbounded) {
    // Unconstrained polish from the best cone point; keep it only if it
    // stays in the cone.
    auto guarded = [&](const Vector& y) {
      const double v = fr.value(y);
      if (v <= p.unboundedThreshold) {
        out.unbounded = true;
        return p.unboundedThreshold;
      }
      return v;
    };
    const MinimizeResult g =
        gradientDescent(guarded, [&](const Vector& y) { return fr.grad(y); }, out.y, 300);
    consider(g.x);
  }
  return out;
}

struct CloudCheck {
  double margin = kInf;
  Vector worst;
  int count = 0;
};

CloudCheck verifyInequality(const ScalarFunction& phi, const GroupAction& G, const Frame& fr,
                            const NormSpec& norm, double eps, const Vector& xt, double vt,
                            bool fullSpace, const Vector& xbar0,
                            const std::vector<Vector>& anchors, const EkelandParams& p) {
  const int n = G.dimension();
  const double radius = p.verifyRadiusFactor * std::max(xbar0.norm(), xt.norm()) + 1.0;

  std::vector<Vector> pts;
  pts.reserve(p.verifySamples + 2000);
  Rng rng(p.seed ^ 0x77aa11ULL);
  if (fullSpace) {
    for (int s = 0; s < p.verifySamples; ++s) pts.push_back(uniformBox(rng, n, radius));
    const int orbitSeeds = std::min(100, p.verifySamples);
    for (int s = 0; s < orbitSeeds; ++s)
      for (int e = 0; e < G.size(); ++e) pts.push_back(G.apply(e, pts[s]));
  } else {
    for (int s = 0; s < p.verifySamples; ++s) pts.push_back(fr.lift(uniformBox(rng, fr.k, radius)));
  }
  // Ray probes around the final point.
  std::vector<Vector> dirs;
  if (fullSpace) {
    for (int i = 0; i < n; ++i) {
      Vector d = Vector::Zero(n);
      d[i] = 1.0;
      dirs.push_back(d);
      dirs.push_back(-d);
    }
  } else {
    for (int i = 0; i < fr.k; ++i) {
      dirs.push_back(fr.B.col(i));
      dirs.push_back(-fr.B.col(i));
    }
  }
  for (int s = 0; s < 8; ++s) {
    Vector d = gaussianDirection(rng, n);
    if (!fullSpace) {
      d = fr.B * (fr.B.transpose() * d);
      if (d.norm() < 1e-12) continue;
      d /= d.norm();
    }
    dirs.push_back(d);
  }
  for (const Vector& d : dirs)
    for (double t : {1e-6, 1e-3, 0.1, 0.5 * radius, radius}) pts.push_back(xt + t * d);
  for (const Vector& a : anchors) {
    const Vector abar = G.symmetrize(a);
    pts.push_back(abar);
    if (fullSpace) {
      pts.push_back(a);
      for (int e = 0; e < G.size(); ++e) pts.push_back(G.apply(e, a));
    }
  }
  pts.push_back(xbar0);
  pts.push_back(Vector::Zero(n));

  using Partial = std::pair<double, int>;
  const Partial init{kInf, -1};
  const Partial res = blockReduce<Partial>(
      pts.size(), init,
      [&](std::size_t i) -> Partial {
        const double v = phi(pts[i]);
        if (v == kInf) return {kInf, static_cast<int>(i)};
        return {v + eps * norm(pts[i] - xt) - vt, static_cast<int>(i)};
      },
      [](const Partial& a, const Partial& b) { return b.first < a.first ? b : a; });

  CloudCheck out;
  out.margin = res.first;
  out.count = static_cast<int>(pts.size());
  out.worst = res.second >= 0 ? pts[res.second] : xt;
  return out;
}

double policyStepBound(const EkelandParams& p, int n) {
  const double denom = p.start == StartPolicy::ProofSchedule ? std::ldexp(1.0, n + 1)
                                                             : std::ldexp(1.0, n);
  return p.delta / (p.epsilon * denom);
}

}  // namespace

EkelandResult ekelandIterate(const ScalarFunction& phi, const GroupAction& G, const Vector& x0,
                             const EkelandParams& params, const std::vector<Vector>& anchors) {
  if (phi.dimension() != G.dimension() || x0.size() != G.dimension())
    throw std::invalid_argument("ekelandIterate: dimension mismatch");
  if (!(params.epsilon > 0) || !(params.delta > 0))
    throw std::invalid_argument("ekelandIterate: epsilon and delta must be positive");
  if (!params.norm.admitsDimension(G.dimension()))
    throw std::invalid_argument("ekelandIterate: norm does not admit the dimension");

  const int n = G.dimension();
  const NormSpec& norm = params.norm;
  EkelandResult out;
  out.symmetrizedStart = G.symmetrize(x0);
  out.certificate.localizationBound = params.delta / params.epsilon;

  // Preflight: the principle needs phi convex with respect to the group.
  SampleSpec preSpec;
  preSpec.seed = params.seed ^ 0x5150ULL;
  std::vector<Vector> prePts = makeSampleCloud(n, preSpec);
  prePts.push_back(x0);
  prePts.push_back(out.symmetrizedStart);
  for (const Vector& a : anchors) prePts.push_back(a);
  out.convexity = checkGroupConvexity(phi, G, prePts);
  out.invariance = checkInvariance(phi, G, prePts);
  if (!out.convexity.holds) {
    std::ostringstream os;
    os << "objective is not convex with respect to the group (violation "
       << out.convexity.maxViolation << " at the recorded witness); the symmetrized principle "
       << "does not apply";
    out.note = os.str();
    return out;
  }

  const auto fixed = G.fixedSubspace();
  Frame fr;
  fr.phi = &phi;
  fr.B = fixed.basis;
  fr.k = fixed.dim;
  const bool fullSpace = out.invariance.invariant;

  Rng rng(params.seed);

  // Trivial invariant subspace: the only candidate point is 0.
  if (fr.k == 0) {
    const Vector origin = Vector::Zero(n);
    const double v0 = phi(origin);
    if (v0 == kInf) {
      out.note = "the invariant subspace is trivial and the objective is infinite at 0";
      return out;
    }
    out.sequenceStart = origin;
    out.point = origin;
    out.approxInfimum = v0;
    out.stages.push_back({0, origin, v0, v0, policyStepBound(params, 0), 0.0});
    const CloudCheck c = verifyInequality(phi, G, fr, norm, params.epsilon, origin, v0,
                                          fullSpace, out.symmetrizedStart, anchors, params);
    out.certificate.inequalityMargin = c.margin;
    out.certificate.worstPoint = c.worst;
    out.certificate.verifiedPoints = c.count;
    out.certificate.cloudScope = fullSpace ? "full-space" : "invariant-subspace";
    out.certificate.inequalityVerified = c.margin >= -params.marginTol;
    out.certificate.invarianceResidual = 0.0;
    out.certificate.valueAtPoint = v0;
    out.certificate.referenceValue = phi(out.symmetrizedStart);
    out.certificate.distanceFromStart = 0.0;
    out.certificate.localizationSatisfied = true;
    out.certificate.stepBoundsSatisfied = true;
    out.succeeded = out.certificate.inequalityVerified;
    out.note = out.succeeded ? "invariant subspace is trivial; certified at the origin"
                             : "inequality verification failed at the recorded worst point";
    return out;
  }

  // Global scan over the invariant subspace.
  std::vector<Vector> scanStarts;
  const Vector y0 = fr.B.transpose() * out.symmetrizedStart;
  scanStarts.push_back(y0);
  for (const Vector& a : anchors) scanStarts.push_back(fr.B.transpose() * G.symmetrize(a));
  ScanOutcome scan = globalScan(fr, scanStarts, params, rng);
  const double v00 = phi(out.symmetrizedStart);
  if (v00 < scan.value) {
    scan.value = v00;
    scan.y = y0;
    scan.feasible = true;
  }
  if (scan.unbounded || scan.value < params.unboundedThreshold) {
    out.unboundedDetected = true;
    out.approxInfimum = scan.value;
    out.note = "objective appears unbounded below on the invariant subspace";
    return out;
  }
  if (!scan.feasible) {
    out.note = "no invariant point with a finite objective value was found";
    return out;
  }
  double bGlobal = scan.value;

  const bool proof = params.start == StartPolicy::ProofSchedule;
  if (!proof && v00 == kInf) {
    out.note = "objective is infinite at the symmetrized start";
    return out;
  }

  Vector seqY = proof ? scan.y : y0;
  double seqV = proof ? scan.value : v00;

  bool stepViolation = false;
  int restarts = 0;
  const double stallEps = 1e-13;

  std::function<void(Vector, double)> runSchedule;
  runSchedule = [&](Vector yStart, double vStart) {
    out.stages.clear();
    out.sequenceStart = fr.lift(yStart);
    Vector yCur = yStart;
    double vCur = vStart;
    int stall = 0;
    stepViolation = false;
    for (int stage = 0; stage < params.maxStages; ++stage) {
      const double bound = policyStepBound(params, stage);
      if (bound < params.stopStep) {
        out.stages.push_back({stage, fr.lift(yCur), vCur, vCur, bound, 0.0});
        break;
      }
      const double searchRadius =
          std::max((vCur - bGlobal) / params.epsilon, 4.0 * params.stopStep);
      std::vector<Vector> extra = {scan.y};
      const int budget = params.stageBudget;
      const StageOutcome st =
          stageSearch(fr, norm, params.epsilon, yCur, vCur, searchRadius, params, rng, extra,
                      budget);
      if (st.unbounded || st.value < params.unboundedThreshold) {
        out.unboundedDetected = true;
        return;
      }
      bGlobal = std::min(bGlobal, st.value);
      const double step = norm(fr.lift(st.y) - fr.lift(yCur));
      out.stages.push_back({stage, fr.lift(yCur), vCur, st.value, bound, step});
      if (st.value >= vCur - stallEps * (1.0 + std::abs(vCur))) {
        if (++stall >= 2) break;
        continue;
      }
      stall = 0;
      if (step > bound + 1e-10) {
        if (proof && restarts < 6) {
          ++restarts;
          runSchedule(st.y, st.value);
          return;
        }
        stepViolation = true;
      }
      yCur = st.y;
      vCur = st.value;
      if (stage == params.maxStages - 1)
        out.stages.push_back({stage + 1, fr.lift(yCur), vCur, vCur,
                              policyStepBound(params, stage + 1), 0.0});
    }
    out.point = fr.lift(yCur);
    out.certificate.valueAtPoint = vCur;
  };

  runSchedule(seqY, seqV);
  if (out.unboundedDetected) {
    out.note = "objective appears unbounded below on the invariant subspace";
    out.approxInfimum = bGlobal;
    return out;
  }

  // Verify; a violating cloud point is itself a better descent candidate,
  // so feed it back and retry a bounded number of times.
  CloudCheck check;
  for (int round = 0; round < 5; ++round) {
    check = verifyInequality(phi, G, fr, norm, params.epsilon, out.point,
                             out.certificate.valueAtPoint, fullSpace, out.symmetrizedStart,
                             anchors, params);
    if (check.margin >= -params.marginTol) break;
    const Vector wbar = G.symmetrize(check.worst);
    const double wv = phi(wbar);
    if (wv >= kInf || !(wv < out.certificate.valueAtPoint)) break;
    if (proof && restarts < 6) {
      ++restarts;
      bGlobal = std::min(bGlobal, wv);
      runSchedule(fr.B.transpose() * wbar, wv);
    } else {
      break;
    }
  }

  out.approxInfimum = bGlobal;
  out.certificate.inequalityMargin = check.margin;
  out.certificate.worstPoint = check.worst;
  out.certificate.verifiedPoints = check.count;
  out.certificate.cloudScope = fullSpace ? "full-space" : "invariant-subspace";
  out.certificate.inequalityVerified = check.margin >= -params.marginTol;
  out.certificate.invarianceResidual =
      (G.symmetrize(out.point) - out.point).lpNorm<Eigen::Infinity>();
  out.certificate.referenceValue = v00;
  out.certificate.distanceFromStart = norm(out.point - out.sequenceStart);
  out.certificate.localizationSatisfied =
      out.certificate.distanceFromStart <= out.certificate.localizationBound + 1e-8;
  bool stepsOk = !stepViolation;
  for (const EkelandStage& s : out.stages)
    if (s.stepTaken > s.stepBound + 1e-10) stepsOk = false;
  out.certificate.stepBoundsSatisfied = stepsOk;

  out.succeeded = out.certificate.inequalityVerified && out.certificate.localizationSatisfied &&
                  out.certificate.stepBoundsSatisfied;
  if (out.succeeded) {
    out.note = "descent certified on the sampled cloud";
  } else if (!out.certificate.inequalityVerified) {
    out.note = "inequality verification failed at the recorded worst point";
  } else if (!out.certificate.localizationSatisfied) {
    out.note = "final point left the localization ball (start too far from the infimum)";
  } else {
    out.note = "a recorded step exceeded its schedule bound";
  }
  return out;
}

}  // namespace symvp
