#include "symvp/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "symvp/catalog.hpp"
#include "symvp/consequences.hpp"
#include "symvp/ekeland.hpp"
#include "symvp/expr.hpp"
#include "symvp/separation.hpp"

namespace symvp {
namespace {

std::string location(const YAML::Node& node) {
  if (node.IsDefined() && node.Mark().line >= 0)
    return "line " + std::to_string(node.Mark().line + 1);
  return "unknown line";
}

[[noreturn]] void fail(const std::string& scenario, const YAML::Node& where,
                       const std::string& msg) {
  std::ostringstream os;
  os << "scenario '" << scenario << "' (" << location(where) << "): " << msg;
  throw ScenarioError(os.str());
}

YAML::Node need(const std::string& scenario, const YAML::Node& map, const std::string& key) {
  YAML::Node v = map[key];
  if (!v.IsDefined() || v.IsNull()) fail(scenario, map, "missing field '" + key + "'");
  return v;
}

double needDouble(const std::string& scenario, const YAML::Node& map, const std::string& key) {
  YAML::Node v = need(scenario, map, key);
  try {
    return v.as<double>();
  } catch (const YAML::Exception&) {
    fail(scenario, v, "field '" + key + "' must be a number");
  }
}

double optDouble(const std::string& scenario, const YAML::Node& map, const std::string& key,
                 double fallback) {
  if (!map[key].IsDefined()) return fallback;
  return needDouble(scenario, map, key);
}

int needInt(const std::string& scenario, const YAML::Node& map, const std::string& key) {
  YAML::Node v = need(scenario, map, key);
  try {
    return v.as<int>();
  } catch (const YAML::Exception&) {
    fail(scenario, v, "field '" + key + "' must be an integer");
  }
}

int optInt(const std::string& scenario, const YAML::Node& map, const std::string& key,
           int fallback) {
  if (!map[key].IsDefined()) return fallback;
  return needInt(scenario, map, key);
}

std::string needString(const std::string& scenario, const YAML::Node& map,
                       const std::string& key) {
  YAML::Node v = need(scenario, map, key);
  try {
    return v.as<std::string>();
  } catch (const YAML::Exception&) {
    fail(scenario, v, "field '" + key + "' must be a string");
  }
}

Vector parseVector(const std::string& scenario, const YAML::Node& node,
                   const std::string& key) {
  if (!node.IsSequence()) fail(scenario, node, "field '" + key + "' must be a number list");
  Vector v(static_cast<int>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    try {
      v[static_cast<int>(i)] = node[i].as<double>();
    } catch (const YAML::Exception&) {
      fail(scenario, node[i], "field '" + key + "' must contain only numbers");
    }
  }
  return v;
}

Vector needVector(const std::string& scenario, const YAML::Node& map, const std::string& key) {
  return parseVector(scenario, need(scenario, map, key), key);
}

NormSpec parseNorm(const std::string& scenario, const YAML::Node& node) {
  if (!node.IsDefined() || node.IsNull()) return NormSpec::l2();
  if (node.IsScalar()) {
    const std::string kind = node.as<std::string>();
    if (kind == "l1") return NormSpec::l1();
    if (kind == "l2") return NormSpec::l2();
    if (kind == "linf") return NormSpec::linf();
    fail(scenario, node, "unknown norm '" + kind + "' (expected l1, l2, linf or weighted_l2)");
  }
  const std::string kind = needString(scenario, node, "kind");
  if (kind == "weighted_l2")
    return NormSpec::weightedL2(needVector(scenario, node, "weights"));
  fail(scenario, node, "unknown norm kind '" + kind + "'");
}

struct GroupSpec {
  GroupAction action;
  int dimension;
};

GroupSpec parseGroup(const std::string& scenario, const YAML::Node& root,
                     const NormSpec& norm) {
  YAML::Node node = need(scenario, root, "group");
  const std::string preset = needString(scenario, node, "preset");
  try {
    if (preset == "trivial") {
      const int dim = optInt(scenario, node, "n", optInt(scenario, root, "dimension", 0));
      if (dim <= 0)
        fail(scenario, node, "preset 'trivial' needs 'n' (or a scenario 'dimension')");
      return {GroupAction::trivial(dim, norm), dim};
    }
    if (preset == "symmetric") {
      const int n = needInt(scenario, node, "n");
      return {GroupAction::symmetric(n, norm), n};
    }
    if (preset == "signed_permutations") {
      const int n = needInt(scenario, node, "n");
      return {GroupAction::signedPermutations(n, norm), n};
    }
    if (preset == "cyclic_rotations") {
      const int k = needInt(scenario, node, "k");
      return {GroupAction::cyclicRotations(k, norm), 2};
    }
    if (preset == "so2_quadrature") {
      const int pts = optInt(scenario, node, "points", 64);
      return {GroupAction::so2Quadrature(pts, norm), 2};
    }
  } catch (const std::invalid_argument& e) {
    fail(scenario, node, e.what());
  }
  fail(scenario, node, "unknown group preset '" + preset + "'");
}

bool inCatalog(const std::string& name) {
  for (const CatalogEntry& e : objectiveCatalog())
    if (e.name == name) return true;
  return false;
}

ScalarFunction parseScenarioObjective(const std::string& scenario, const YAML::Node& root,
                                      int dim) {
  YAML::Node node = need(scenario, root, "objective");
  const std::string text = node.as<std::string>();
  try {
    if (inCatalog(text)) return catalogObjective(text, dim);
    FunctionFlags flags;
    flags.lsc = true;
    return parseObjective(text, dim, flags);
  } catch (const ParseError& e) {
    fail(scenario, node, "objective: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    fail(scenario, node, "objective: " + std::string(e.what()));
  }
}

ConvexBody parseBody(const std::string& scenario, const YAML::Node& root,
                     const std::string& key) {
  YAML::Node node = need(scenario, root, key);
  const std::string kind = needString(scenario, node, "kind");
  try {
    if (kind == "ball")
      return ConvexBody::ball(parseNorm(scenario, node["norm"]),
                              needDouble(scenario, node, "radius"),
                              needVector(scenario, node, "center"));
    if (kind == "hull") {
      YAML::Node pts = need(scenario, node, "points");
      if (!pts.IsSequence()) fail(scenario, pts, "'points' must be a list of vectors");
      std::vector<Vector> list;
      for (const YAML::Node& p : pts) list.push_back(parseVector(scenario, p, "points"));
      return ConvexBody::hull(std::move(list));
    }
    if (kind == "halfspaces") {
      YAML::Node rows = need(scenario, node, "rows");
      if (!rows.IsSequence() || rows.size() == 0)
        fail(scenario, rows, "'rows' must be a nonempty list of vectors");
      std::vector<Vector> list;
      for (const YAML::Node& p : rows) list.push_back(parseVector(scenario, p, "rows"));
      Matrix A(static_cast<int>(list.size()), list[0].size());
      for (std::size_t i = 0; i < list.size(); ++i) A.row(static_cast<int>(i)) = list[i];
      return ConvexBody::halfspaces(A, needVector(scenario, node, "offsets"));
    }
  } catch (const std::invalid_argument& e) {
    fail(scenario, node, std::string(key) + ": " + e.what());
  }
  fail(scenario, node, "unknown body kind '" + kind + "' (expected ball, hull, halfspaces)");
}

void pushStageSeries(RunRecord& rec, const EkelandResult& r) {
  for (const EkelandStage& s : r.stages) {
    SeriesRow row;
    row.n = s.index;
    row.value = s.value;
    row.step = s.stepTaken;
    row.bound = s.stepBound;
    rec.series.push_back(row);
  }
}

void pushEkelandMetrics(RunRecord& rec, const EkelandResult& r) {
  const EkelandCertificate& c = r.certificate;
  rec.metrics.emplace_back("value", c.valueAtPoint);
  rec.metrics.emplace_back("reference_value", c.referenceValue);
  rec.metrics.emplace_back("approx_infimum", r.approxInfimum);
  rec.metrics.emplace_back("inequality_margin", c.inequalityMargin);
  rec.metrics.emplace_back("invariance_residual", c.invarianceResidual);
  rec.metrics.emplace_back("distance_from_start", c.distanceFromStart);
  rec.metrics.emplace_back("localization_bound", c.localizationBound);
  rec.metrics.emplace_back("verified_points", c.verifiedPoints);
  rec.metrics.emplace_back("stages", static_cast<double>(r.stages.size()));
}

unsigned long long scenarioSeed(const std::string& scenario, const YAML::Node& node,
                                const RunOptions& opts) {
  if (opts.haveSeed) return opts.seed;
  if (!node["seed"].IsDefined()) return 2024;
  try {
    return node["seed"].as<unsigned long long>();
  } catch (const YAML::Exception&) {
    fail(scenario, node["seed"], "field 'seed' must be a nonnegative integer");
  }
}

RunRecord runEkelandTask(const std::string& name, const YAML::Node& node,
                         const RunOptions& opts) {
  NormSpec norm = parseNorm(name, node["norm"]);
  GroupSpec group = parseGroup(name, node, norm);
  ScalarFunction objective = parseScenarioObjective(name, node, group.dimension);

  EkelandParams params;
  params.epsilon = needDouble(name, node, "epsilon");
  params.delta = needDouble(name, node, "delta");
  params.norm = norm;
  params.maxStages = optInt(name, node, "max_stages", params.maxStages);
  params.verifySamples = optInt(name, node, "verify_samples", params.verifySamples);
  params.marginTol = opts.marginTol;
  params.seed = scenarioSeed(name, node, opts);
  const std::string policy =
      node["policy"].IsDefined() ? needString(name, node, "policy") : "proof_schedule";
  if (policy == "proof_schedule")
    params.start = StartPolicy::ProofSchedule;
  else if (policy == "given_start")
    params.start = StartPolicy::GivenStart;
  else
    fail(name, node["policy"], "unknown policy '" + policy + "'");

  Vector start = needVector(name, node, "start");

  RunRecord rec;
  rec.scenario = name;
  rec.task = "ekeland";
  EkelandResult r;
  try {
    r = ekelandIterate(objective, group.action, start, params);
  } catch (const std::invalid_argument& e) {
    fail(name, node, e.what());
  }
  rec.succeeded = r.succeeded;
  rec.degenerate = !r.succeeded && (!r.convexity.holds || r.unboundedDetected);
  rec.note = r.note;
  rec.metrics.emplace_back("epsilon", params.epsilon);
  rec.metrics.emplace_back("delta", params.delta);
  pushEkelandMetrics(rec, r);
  if (!r.convexity.holds) {
    rec.metrics.emplace_back("convexity_violation", r.convexity.maxViolation);
    rec.metrics.emplace_back("convexity_lhs", r.convexity.lhs);
    rec.metrics.emplace_back("convexity_rhs", r.convexity.rhs);
    rec.vectors.emplace_back("witness", r.convexity.witness);
  }
  rec.vectors.emplace_back("symmetrized_start", r.symmetrizedStart);
  rec.vectors.emplace_back("point", r.point);
  pushStageSeries(rec, r);
  return rec;
}

RunRecord runPalaisSmaleTask(const std::string& name, const YAML::Node& node,
                             const RunOptions& opts) {
  NormSpec norm = parseNorm(name, node["norm"]);
  GroupSpec group = parseGroup(name, node, norm);
  ScalarFunction objective = parseScenarioObjective(name, node, group.dimension);
  Vector start = needVector(name, node, "start");
  const int count = optInt(name, node, "count", 50);

  RunRecord rec;
  rec.scenario = name;
  rec.task = "palais_smale";
  PalaisSmaleResult r;
  try {
    r = palaisSmaleSequence(objective, group.action, start, count, norm,
                            scenarioSeed(name, node, opts));
  } catch (const std::invalid_argument& e) {
    fail(name, node, e.what());
  }
  rec.succeeded = r.succeeded;
  rec.note = r.note;
  rec.metrics.emplace_back("runs", static_cast<double>(r.entries.size()));
  rec.metrics.emplace_back("infimum_estimate", r.infimumEstimate);
  if (!r.entries.empty()) rec.vectors.emplace_back("final_point", r.entries.back().point);
  for (const PalaisSmaleEntry& e : r.entries) {
    SeriesRow row;
    row.n = e.n;
    row.value = e.value;
    row.gradNorm = e.gradDualNorm;
    row.bound = 1.0 / e.n;
    rec.series.push_back(row);
  }
  return rec;
}

RunRecord runDenseRangeTask(const std::string& name, const YAML::Node& node,
                            const RunOptions& opts) {
  NormSpec norm = parseNorm(name, node["norm"]);
  GroupSpec group = parseGroup(name, node, norm);
  ScalarFunction objective = parseScenarioObjective(name, node, group.dimension);
  Vector target = needVector(name, node, "target");
  const double slope = needDouble(name, node, "growth_slope");
  const double offset = needDouble(name, node, "growth_offset");
  const double tol = optDouble(name, node, "tolerance", 1e-6);

  RunRecord rec;
  rec.scenario = name;
  rec.task = "dense_range";
  DenseRangeProbe r;
  try {
    r = denseRangeProbe(objective, group.action, target, slope, offset, norm, 40, tol,
                        scenarioSeed(name, node, opts));
  } catch (const std::invalid_argument& e) {
    fail(name, node, e.what());
  }
  rec.succeeded = r.succeeded;
  rec.degenerate = !r.succeeded && r.residualHistory.empty();  // rejected before any run
  rec.note = r.note;
  rec.metrics.emplace_back("residual", r.residual);
  rec.metrics.emplace_back("growth_margin", r.growthMargin);
  rec.metrics.emplace_back("runs", static_cast<double>(r.residualHistory.size()));
  rec.vectors.emplace_back("target", target);
  if (r.bestPoint.size() > 0) rec.vectors.emplace_back("best_point", r.bestPoint);
  for (std::size_t i = 0; i < r.residualHistory.size(); ++i) {
    SeriesRow row;
    row.n = static_cast<int>(i + 1);
    row.value = r.residualHistory[i];
    row.bound = 1.0 / static_cast<double>(i + 1);
    rec.series.push_back(row);
  }
  return rec;
}

RunRecord runSubgradientTask(const std::string& name, const YAML::Node& node,
                             const RunOptions& opts) {
  YAML::Node groupNode = node["group"];
  NormSpec norm = parseNorm(name, node["norm"]);
  const int dim = groupNode.IsDefined() ? parseGroup(name, node, norm).dimension
                                        : needInt(name, node, "dimension");
  ScalarFunction objective = parseScenarioObjective(name, node, dim);
  Vector point = needVector(name, node, "point");
  Vector functional = needVector(name, node, "functional");
  const double eps = needDouble(name, node, "epsilon");
  const std::string expect =
      node["expect"].IsDefined() ? needString(name, node, "expect") : "member";
  if (expect != "member" && expect != "reject")
    fail(name, node["expect"], "field 'expect' must be 'member' or 'reject'");

  RunRecord rec;
  rec.scenario = name;
  rec.task = "subgradient";
  SubgradientCheck r;
  try {
    GroupSpec group{GroupAction::trivial(dim), dim};
    if (groupNode.IsDefined()) group = parseGroup(name, node, norm);
    r = epsSubdifferentialCheck(objective, point, functional, eps, &group.action, 500,
                                scenarioSeed(name, node, opts));
  } catch (const std::invalid_argument& e) {
    fail(name, node, e.what());
  }
  rec.succeeded = r.member == (expect == "member");
  rec.note = r.member ? "inequality held on the sampled grid"
                      : "inequality violated on the sampled grid";
  rec.metrics.emplace_back("member", r.member ? 1.0 : 0.0);
  rec.metrics.emplace_back("worst_slack", r.worstSlack);
  rec.metrics.emplace_back("checked_points", r.checkedPoints);
  rec.vectors.emplace_back("worst_point", r.worstPoint);
  return rec;
}

RunRecord runBronstedRockafellarTask(const std::string& name, const YAML::Node& node,
                                     const RunOptions& opts) {
  NormSpec norm = parseNorm(name, node["norm"]);
  GroupSpec group = parseGroup(name, node, norm);
  ScalarFunction objective = parseScenarioObjective(name, node, group.dimension);
  Vector start = needVector(name, node, "start");
  Vector functional = needVector(name, node, "functional");
  const double eps = needDouble(name, node, "epsilon");
  const double lambda = needDouble(name, node, "lambda");

  RunRecord rec;
  rec.scenario = name;
  rec.task = "bronsted_rockafellar";
  BronstedRockafellarResult r;
  try {
    r = bronstedRockafellar(objective, group.action, start, functional, eps, lambda, norm,
                            scenarioSeed(name, node, opts));
  } catch (const std::invalid_argument& e) {
    fail(name, node, e.what());
  }
  rec.succeeded = r.succeeded;
  rec.degenerate = !r.succeeded && r.note.find("precondition") != std::string::npos;
  rec.note = r.note;
  rec.metrics.emplace_back("epsilon", eps);
  rec.metrics.emplace_back("lambda", lambda);
  rec.metrics.emplace_back("point_distance", r.pointDistance);
  rec.metrics.emplace_back("functional_distance", r.functionalDistance);
  rec.metrics.emplace_back("membership_margin", r.membershipMargin);
  rec.metrics.emplace_back("point_invariance_residual", r.pointInvarianceResidual);
  rec.metrics.emplace_back("functional_fixed_residual", r.functionalFixedResidual);
  rec.vectors.emplace_back("point", r.point);
  rec.vectors.emplace_back("functional", r.functional);
  pushStageSeries(rec, r.inner);
  return rec;
}

RunRecord runBishopPhelpsTask(const std::string& name, const YAML::Node& node,
                              const RunOptions& opts) {
  NormSpec norm = parseNorm(name, node["norm"]);
  GroupSpec group = parseGroup(name, node, norm);
  ConvexBody body = parseBody(name, node, "body");
  Vector functional = needVector(name, node, "functional");
  const double eps = needDouble(name, node, "epsilon");

  RunRecord rec;
  rec.scenario = name;
  rec.task = "bishop_phelps";
  BishopPhelpsResult r;
  try {
    r = bishopPhelps(body, group.action, functional, eps, norm,
                     scenarioSeed(name, node, opts));
  } catch (const std::invalid_argument& e) {
    fail(name, node, e.what());
  } catch (const std::logic_error& e) {
    fail(name, node, e.what());
  }
  rec.succeeded = r.succeeded;
  rec.note = r.note;
  rec.metrics.emplace_back("epsilon", eps);
  rec.metrics.emplace_back("perturbation_norm", r.perturbationNorm);
  rec.metrics.emplace_back("support_margin", r.supportMargin);
  rec.metrics.emplace_back("functional_fixed_residual", r.functionalFixedResidual);
  rec.vectors.emplace_back("support_point", r.supportPoint);
  rec.vectors.emplace_back("perturbation", r.perturbation);
  rec.vectors.emplace_back("functional", r.functional);
  pushStageSeries(rec, r.inner);
  return rec;
}

RunRecord runSeparationTask(const std::string& name, const YAML::Node& node,
                            const RunOptions& opts) {
  (void)opts;
  NormSpec norm = parseNorm(name, node["norm"]);
  GroupSpec group = parseGroup(name, node, norm);
  ConvexBody bodyA = parseBody(name, node, "body_a");
  ConvexBody bodyB = parseBody(name, node, "body_b");

  RunRecord rec;
  rec.scenario = name;
  rec.task = "separation";
  SeparationResult r;
  try {
    r = separateInvariant(bodyA, bodyB, group.action);
  } catch (const std::invalid_argument& e) {
    fail(name, node, e.what());
  }
  rec.succeeded = !r.degenerate;
  rec.degenerate = r.degenerate;
  rec.note = r.note;
  rec.metrics.emplace_back("euclidean_gap", r.euclideanGap);
  rec.metrics.emplace_back("sup_a", r.supA);
  rec.metrics.emplace_back("inf_b", r.infB);
  rec.metrics.emplace_back("level", r.level);
  rec.metrics.emplace_back("margin_a", r.marginA);
  rec.metrics.emplace_back("margin_b", r.marginB);
  rec.metrics.emplace_back("fixed_residual", r.fixedResidual);
  if (r.functional.size() > 0) rec.vectors.emplace_back("functional", r.functional);
  if (r.pair.inA.size() > 0) {
    rec.vectors.emplace_back("closest_a", r.pair.inA);
    rec.vectors.emplace_back("closest_b", r.pair.inB);
  }
  return rec;
}

RunRecord runDualDescriptionTask(const std::string& name, const YAML::Node& node,
                                 const RunOptions& opts) {
  NormSpec norm = parseNorm(name, node["norm"]);
  GroupSpec group = parseGroup(name, node, norm);
  ScalarFunction objective = parseScenarioObjective(name, node, group.dimension);
  const int samples = optInt(name, node, "samples", 200);

  RunRecord rec;
  rec.scenario = name;
  rec.task = "dual_description";
  DualDescriptionResult r;
  try {
    r = dualDescriptionCheck(objective, group.action, samples,
                             scenarioSeed(name, node, opts));
  } catch (const std::invalid_argument& e) {
    fail(name, node, e.what());
  }
  rec.succeeded = r.consistent;
  rec.degenerate = !r.transformConvex;
  rec.note = r.note;
  rec.metrics.emplace_back("gradient_span_dim", r.gradientSpanDim);
  rec.metrics.emplace_back("fixed_dual_dim", r.fixedDualDim);
  rec.metrics.emplace_back("max_principal_angle", r.maxPrincipalAngle);
  rec.metrics.emplace_back("transform_convex", r.transformConvex ? 1.0 : 0.0);
  return rec;
}

RunRecord dispatch(const std::string& name, const std::string& task, const YAML::Node& node,
                   const RunOptions& opts) {
  if (task == "ekeland") return runEkelandTask(name, node, opts);
  if (task == "palais_smale") return runPalaisSmaleTask(name, node, opts);
  if (task == "dense_range") return runDenseRangeTask(name, node, opts);
  if (task == "subgradient") return runSubgradientTask(name, node, opts);
  if (task == "bronsted_rockafellar") return runBronstedRockafellarTask(name, node, opts);
  if (task == "bishop_phelps") return runBishopPhelpsTask(name, node, opts);
  if (task == "separation") return runSeparationTask(name, node, opts);
  if (task == "dual_description") return runDualDescriptionTask(name, node, opts);
  fail(name, node, "unknown task '" + task + "'");
}

}  // namespace

std::vector<RunRecord> runScenarioText(const std::string& text, const RunOptions& opts) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ScenarioError(std::string("config parse error: ") + e.what());
  }
  if (!root.IsMap() || !root["scenarios"].IsDefined())
    throw ScenarioError("config needs a top-level 'scenarios' list");
  YAML::Node list = root["scenarios"];
  if (!list.IsSequence() || list.size() == 0)
    throw ScenarioError("'scenarios' must be a nonempty list");

  std::vector<RunRecord> records;
  std::vector<std::string> seen;
  for (const YAML::Node& node : list) {
    if (!node.IsMap()) throw ScenarioError("each scenario must be a mapping");
    const std::string name = needString("<unnamed>", node, "name");
    for (const std::string& s : seen)
      if (s == name) throw ScenarioError("duplicate scenario name '" + name + "'");
    seen.push_back(name);
    const std::string task = needString(name, node, "task");
    records.push_back(dispatch(name, task, node, opts));
  }
  return records;
}

std::vector<RunRecord> runScenarioFile(const std::string& path, const RunOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return runScenarioText(buf.str(), opts);
}

}  // namespace symvp
