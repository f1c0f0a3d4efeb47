// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Tolerances are pinned here on purpose; they are the contract of the tool.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "symvp/catalog.hpp"
#include "symvp/consequences.hpp"
#include "symvp/ekeland.hpp"
#include "symvp/records.hpp"
#include "symvp/sampling.hpp"
#include "symvp/separation.hpp"

using namespace symvp;

namespace {

std::ostringstream detail;

Vector ones(int n, double scale) { return Vector::Constant(n, scale); }

bool checkGroupFamily() {
  struct Case {
    const char* label;
    GroupAction action;
  };
  const std::vector<Case> cases = {
      {"symmetric(2)", GroupAction::symmetric(2)},
      {"symmetric(3)", GroupAction::symmetric(3)},
      {"symmetric(5)", GroupAction::symmetric(5)},
      {"signed_permutations(3)", GroupAction::signedPermutations(3)},
      {"cyclic_rotations(5)", GroupAction::cyclicRotations(5)},
      {"so2_quadrature(64)", GroupAction::so2Quadrature(64)},
  };
  for (const Case& c : cases) {
    const int n = c.action.dimension();
    const Matrix P = c.action.reynolds();
    const double projErr = (P * P - P).cwiseAbs().maxCoeff();
    if (projErr > 1e-10) {
      detail << c.label << ": ||P^2-P|| = " << projErr;
      return false;
    }
    ScalarFunction phi = catalogObjective("norm2", n);
    Rng rng(91 + n);
    for (int i = 0; i < 1000; ++i) {
      const Vector x = uniformBox(rng, n, 3.0);
      const Vector xbar = c.action.symmetrize(x);
      if (c.action.invarianceResidual(xbar) > 1e-9) {
        detail << c.label << ": symmetrized vector not invariant";
        return false;
      }
      if (phi(xbar) > phi(x) + 1e-9) {
        detail << c.label << ": averaging increased a convex invariant objective";
        return false;
      }
    }
  }
  return true;
}

bool checkTentWitness() {
  ScalarFunction tent = catalogObjective("tent", 1);
  GroupAction flip = GroupAction::signedPermutations(1);
  SampleSpec spec;
  spec.seed = 17;
  GroupConvexityReport rep = checkGroupConvexity(tent, flip, makeSampleCloud(1, spec));
  if (rep.holds) {
    detail << "tent passed the convexity check";
    return false;
  }
  const bool exact = rep.witness.size() == 1 && rep.witness[0] == 0.5 &&
                     rep.maxViolation == 1.0 && rep.lhs == 1.0 && rep.rhs == 0.0;
  if (!exact)
    detail << "witness " << rep.witness.transpose() << ", violation " << rep.maxViolation
           << ", lhs " << rep.lhs << ", rhs " << rep.rhs;
  return exact;
}

bool checkDescentBenchmark() {
  ScalarFunction phi = catalogObjective("sumsq_plus_one", 3);
  GroupAction G = GroupAction::symmetric(3);
  Vector start(3);
  start << 0.9, -0.4, 0.1;
  EkelandParams params;
  params.epsilon = 0.5;
  params.delta = 0.05;
  params.verifySamples = 10000;
  EkelandResult r = ekelandIterate(phi, G, start, params);
  if (!r.succeeded) {
    detail << "run failed: " << r.note;
    return false;
  }
  const EkelandCertificate& c = r.certificate;
  bool ok = c.invarianceResidual <= 1e-8 && c.inequalityMargin >= -1e-8 &&
            c.verifiedPoints >= 10000 && c.distanceFromStart <= 0.1 + 1e-8;
  for (const EkelandStage& s : r.stages)
    if (s.stepTaken > s.stepBound + 1e-10) ok = false;
  if (!ok)
    detail << "margin " << c.inequalityMargin << ", residual " << c.invarianceResidual
           << ", distance " << c.distanceFromStart << ", points " << c.verifiedPoints;
  return ok;
}

bool checkPalaisSmale() {
  ScalarFunction phi = catalogObjective("sumsq_plus_one", 3);
  GroupAction G = GroupAction::symmetric(3);
  Vector start(3);
  start << 0.9, -0.4, 0.1;
  PalaisSmaleResult r = palaisSmaleSequence(phi, G, start, 50);
  if (!r.succeeded || r.entries.size() != 50) {
    detail << "sequence failed: " << r.note;
    return false;
  }
  double prev = kInf;
  for (const PalaisSmaleEntry& e : r.entries) {
    if (e.gradDualNorm > 1.0 / e.n + 1e-6) {
      detail << "n=" << e.n << ": gradient " << e.gradDualNorm;
      return false;
    }
    if (e.value > prev + 1e-9) {
      detail << "n=" << e.n << ": value increased";
      return false;
    }
    if (e.cloudMargin < -1e-8) {
      detail << "n=" << e.n << ": margin " << e.cloudMargin;
      return false;
    }
    prev = e.value;
  }
  return true;
}

bool checkSeparationFamily() {
  for (int i = 0; i < 25; ++i) {
    Rng rng(1000 + i);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = 2 + static_cast<int>(i % 2);
    GroupAction G = (i % 5 == 4) ? GroupAction::trivial(n) : GroupAction::symmetric(n);
    const double a = 0.8 + 0.7 * unit(rng);
    const double b = 0.8 + 0.7 * unit(rng);
    const double rA = 0.2 + 0.4 * unit(rng);
    const double rB = 0.2 + 0.4 * unit(rng);

    auto makeBody = [&](int kind, double center, double radius) -> ConvexBody {
      if (kind == 0) return ConvexBody::ball(NormSpec::l2(), radius, ones(n, center));
      if (kind == 1)
        return ConvexBody::ball(NormSpec::linf(), radius / std::sqrt(double(n)),
                                ones(n, center));
      std::vector<Vector> pts;
      for (int k = 0; k < 2; ++k) {
        Vector q = uniformBox(rng, n, 0.3);
        for (const Vector& img : G.orbit(Vector(ones(n, center) + q))) pts.push_back(img);
      }
      return ConvexBody::hull(std::move(pts));
    };

    ConvexBody A = makeBody(i % 3, a, rA);
    ConvexBody B = makeBody((i + 1) % 3, -b, rB);
    SeparationResult r = separateInvariant(A, B, G);
    if (r.degenerate) {
      detail << "pair " << i << " degenerate: " << r.note;
      return false;
    }
    if (r.fixedResidual > 1e-9) {
      detail << "pair " << i << ": functional not fixed (" << r.fixedResidual << ")";
      return false;
    }
    const double needed = r.euclideanGap * r.functional.norm() / 2.0 - 1e-8;
    if (r.marginA < needed || r.marginB < needed) {
      detail << "pair " << i << ": margins " << r.marginA << "/" << r.marginB << " below "
             << needed;
      return false;
    }
    if (!(r.supA < r.level && r.level < r.infB)) {
      detail << "pair " << i << ": level not strictly between the bodies";
      return false;
    }
  }
  return true;
}

bool checkGaugeProperties() {
  struct Case {
    const char* label;
    ConvexBody body;
    GroupAction action;
  };
  Vector h1(2), h2(2), h3(2), h4(2), h5(2), h6(2);
  h1 << 2, 1;
  h2 << 1, 2;
  h3 << -1, 1;
  h4 << 1, -1;
  h5 << -2, -1;
  h6 << -1, -2;
  const std::vector<Case> cases = {
      {"hexagon", ConvexBody::hull({h1, h2, h3, h4, h5, h6}), GroupAction::symmetric(2)},
      {"box", ConvexBody::ball(NormSpec::linf(), 1.5, Vector::Zero(2)),
       GroupAction::signedPermutations(2)},
      {"disk", ConvexBody::ball(NormSpec::l2(), 2.0, Vector::Zero(2)),
       GroupAction::so2Quadrature(32)},
  };
  Rng rng(77);
  for (const Case& c : cases) {
    for (int i = 0; i < 60; ++i) {
      const Vector x = uniformBox(rng, 2, 3.0);
      const Vector y = uniformBox(rng, 2, 3.0);
      const double gx = minkowskiGauge(c.body, x);
      const double gy = minkowskiGauge(c.body, y);
      const double t = 0.25 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng);
      if (std::abs(minkowskiGauge(c.body, Vector(t * x)) - t * gx) > 1e-7 * (1.0 + t * gx)) {
        detail << c.label << ": not positively homogeneous";
        return false;
      }
      if (minkowskiGauge(c.body, Vector(x + y)) > gx + gy + 1e-7) {
        detail << c.label << ": not subadditive";
        return false;
      }
      for (std::size_t e = 0; e < c.action.size(); ++e)
        if (std::abs(minkowskiGauge(c.body, c.action.apply(e, x)) - gx) > 1e-7 * (1.0 + gx)) {
          detail << c.label << ": gauge not invariant";
          return false;
        }
      if (gx <= 1.0 - 1e-7 && !c.body.contains(x, 1e-9)) {
        detail << c.label << ": gauge < 1 but point not in the body";
        return false;
      }
      if (gx >= 1.0 + 1e-7 && c.body.contains(x, 1e-9)) {
        detail << c.label << ": gauge > 1 but point in the body";
        return false;
      }
    }
  }
  // Exact value on a centered disk and the non-interior rejection.
  ConvexBody disk = ConvexBody::ball(NormSpec::l2(), 2.0, Vector::Zero(2));
  Vector p(2);
  p << 0.6, -0.8;
  if (std::abs(minkowskiGauge(disk, p) - 0.5) > 1e-9) {
    detail << "disk gauge of a unit vector is not ||x||/r";
    return false;
  }
  Vector s1(2), s2(2);
  s1 << 1, 0;
  s2 << 0, 1;
  try {
    minkowskiGauge(ConvexBody::hull({s1, s2}), p);
    detail << "gauge accepted a body without 0 in its interior";
    return false;
  } catch (const std::invalid_argument&) {
  }
  return true;
}

bool checkBronstedRockafellar() {
  ScalarFunction f = catalogObjective("sumsq", 2);
  GroupAction G = GroupAction::symmetric(2);
  Vector x0 = ones(2, 1.0);
  BronstedRockafellarResult smooth =
      bronstedRockafellar(f, G, x0, ones(2, 1.8), 0.05, 0.5);
  if (!smooth.succeeded || smooth.pointDistance > 0.1 + 1e-8 ||
      smooth.functionalDistance > 0.5 + 1e-8 || smooth.membershipMargin < -1e-8) {
    detail << "smooth case: " << smooth.note << " distance " << smooth.pointDistance
           << " dual distance " << smooth.functionalDistance << " margin "
           << smooth.membershipMargin;
    return false;
  }
  ScalarFunction m = catalogObjective("max_coord", 2);
  BronstedRockafellarResult kink =
      bronstedRockafellar(m, G, ones(2, 0.2), ones(2, 0.5), 0.1, 0.4);
  if (!kink.succeeded || kink.pointDistance > 0.25 + 1e-8 ||
      kink.functionalDistance > 0.4 + 1e-8 || kink.membershipMargin < -1e-8) {
    detail << "nonsmooth case: " << kink.note << " margin " << kink.membershipMargin;
    return false;
  }
  return true;
}

bool checkBishopPhelps() {
  int done = 0;
  for (int i = 0; i < 10; ++i) {
    Rng rng(4200 + i);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = 2 + (i % 2);
    GroupAction G = (i % 4 == 3) ? GroupAction::trivial(n) : GroupAction::symmetric(n);
    ConvexBody body = [&]() -> ConvexBody {
      if (i % 3 == 0)
        return ConvexBody::ball((i % 2 == 0) ? NormSpec::linf() : NormSpec::l1(),
                                1.0 + unit(rng), Vector::Zero(n));
      std::vector<Vector> pts;
      for (int k = 0; k < 2; ++k) {
        Vector q = uniformBox(rng, n, 1.5);
        for (const Vector& img : G.orbit(q)) pts.push_back(img);
      }
      return ConvexBody::hull(std::move(pts));
    }();
    Vector u = (G.size() == 1) ? Vector(uniformBox(rng, n, 1.0))
                               : Vector(ones(n, 0.5 + 1.5 * unit(rng)));
    const double eps = 0.1 + 0.3 * unit(rng);
    BishopPhelpsResult r = bishopPhelps(body, G, u, eps, NormSpec::l2(), 99 + i);
    if (!r.succeeded) {
      detail << "instance " << i << ": " << r.note;
      return false;
    }
    if (r.perturbationNorm > eps + 1e-9 || r.supportMargin < -1e-8 ||
        r.functionalFixedResidual > 1e-9 || !body.contains(r.supportPoint, 1e-8)) {
      detail << "instance " << i << ": perturbation " << r.perturbationNorm << ", margin "
             << r.supportMargin;
      return false;
    }
    ++done;
  }
  if (done != 10) {
    detail << "only " << done << " instances ran";
    return false;
  }
  return true;
}

bool checkDualDescription() {
  ScalarFunction bump2 = catalogObjective("gauss_bump", 2);
  ScalarFunction bump3 = catalogObjective("gauss_bump", 3);
  struct Case {
    const char* label;
    ScalarFunction phi;
    GroupAction action;
    int expectDim;
  };
  const std::vector<Case> cases = {
      {"symmetric(2)", bump2, GroupAction::symmetric(2), 1},
      {"symmetric(3)", bump3, GroupAction::symmetric(3), 1},
      {"trivial(2)", bump2, GroupAction::trivial(2), 2},
      {"so2(64)", bump2, GroupAction::so2Quadrature(64), 0},
  };
  for (const Case& c : cases) {
    DualDescriptionResult r = dualDescriptionCheck(c.phi, c.action);
    if (!r.consistent || !r.transformConvex || r.gradientSpanDim != c.expectDim ||
        r.fixedDualDim != c.expectDim || r.maxPrincipalAngle > 1e-8) {
      detail << c.label << ": " << r.note << " (dims " << r.gradientSpanDim << "/"
             << r.fixedDualDim << ", angle " << r.maxPrincipalAngle << ")";
      return false;
    }
  }
  return true;
}

std::vector<std::string> recordLines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (line.find("\"kind\":\"header\"") == std::string::npos && !line.empty())
      lines.push_back(line);
  return lines;
}

bool checkCliDeterminism() {
  const std::string config = std::string(SYMVP_SOURCE_DIR) + "/scenarios/full_suite.cfg";
  const std::string base = std::string("\"") + SYMVP_CLI_PATH + "\" run \"" + config + "\"";
  const int rc1 =
      std::system((base + " --threads 1 --out accept_t1.jsonl > /dev/null 2>&1").c_str());
  const int rc8 =
      std::system((base + " --threads 8 --out accept_t8.jsonl > /dev/null 2>&1").c_str());
  if (!WIFEXITED(rc1) || WEXITSTATUS(rc1) != 0 || !WIFEXITED(rc8) || WEXITSTATUS(rc8) != 0) {
    detail << "cli runs did not both exit 0";
    return false;
  }
  const std::vector<std::string> a = recordLines("accept_t1.jsonl");
  const std::vector<std::string> b = recordLines("accept_t8.jsonl");
  if (a.empty() || a.size() != b.size()) {
    detail << "record counts differ: " << a.size() << " vs " << b.size();
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) {
      detail << "record " << i << " differs between thread counts";
      return false;
    }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    double budgetSeconds;
    std::function<bool()> run;
  };
  const std::vector<Criterion> criteria = {
      {"group averaging projects and contracts", 5.0, checkGroupFamily},
      {"tent counterexample witness is exact", 1.0, checkTentWitness},
      {"descent benchmark certificate holds", 10.0, checkDescentBenchmark},
      {"palais-smale gradients shrink like 1/n", 30.0, checkPalaisSmale},
      {"invariant separation of 25 seeded pairs", 20.0, checkSeparationFamily},
      {"minkowski gauge properties", 5.0, checkGaugeProperties},
      {"approximate subgradients upgraded nearby", 10.0, checkBronstedRockafellar},
      {"support functionals within eps on 10 bodies", 20.0, checkBishopPhelps},
      {"dual description matches the fixed subspace", 5.0, checkDualDescription},
      {"records identical across thread counts", 60.0, checkCliDeterminism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    detail.str("");
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
      ok = criteria[i].run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool inBudget = elapsed <= criteria[i].budgetSeconds;
    const bool pass = ok && inBudget;
    if (!pass) ++failures;
    std::printf("%s  %2zu  %-46s (%.2fs)", pass ? "PASS" : "FAIL", i + 1, criteria[i].label,
                elapsed);
    if (!error.empty()) std::printf("  [exception: %s]", error.c_str());
    if (!ok && !detail.str().empty()) std::printf("  [%s]", detail.str().c_str());
    if (ok && !inBudget) std::printf("  [budget %.0fs exceeded]", criteria[i].budgetSeconds);
    std::printf("\n");
  }
  return failures == 0 ? 0 : 1;
}
