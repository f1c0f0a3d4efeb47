// Python surface of the native core.  Objectives stay native (catalog or
// parsed expressions), so every exported call may release the GIL.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symvp/catalog.hpp"
#include "symvp/consequences.hpp"
#include "symvp/ekeland.hpp"
#include "symvp/expr.hpp"
#include "symvp/func.hpp"
#include "symvp/group.hpp"
#include "symvp/sampling.hpp"
#include "symvp/separation.hpp"
#include "symvp/space.hpp"

namespace py = pybind11;
using namespace symvp;

namespace {

StartPolicy parsePolicy(const std::string& s) {
  if (s == "proof_schedule") return StartPolicy::ProofSchedule;
  if (s == "given_start") return StartPolicy::GivenStart;
  throw std::invalid_argument("policy must be 'proof_schedule' or 'given_start'");
}

const char* kindName(BodyKind k) {
  switch (k) {
    case BodyKind::Halfspaces: return "halfspaces";
    case BodyKind::Hull: return "hull";
    case BodyKind::Ball: return "ball";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_symvp, m) {
  m.doc() = "Certified symmetrized variational principles in finite dimension";

  py::class_<NormSpec>(m, "NormSpec")
      .def_static("l1", &NormSpec::l1)
      .def_static("l2", &NormSpec::l2)
      .def_static("linf", &NormSpec::linf)
      .def_static("weighted_l2", &NormSpec::weightedL2, py::arg("weights"))
      .def("__call__", &NormSpec::operator(), py::arg("x"))
      .def("dual", &NormSpec::dual, py::arg("u"))
      .def("dual_spec", &NormSpec::dualSpec)
      .def("admits_dimension", &NormSpec::admitsDimension, py::arg("n"))
      .def("__repr__",
           [](const NormSpec& n) { return "NormSpec(" + n.describe() + ")"; });

  py::class_<GroupAction::FixedSubspace>(m, "FixedSubspace")
      .def_readonly("basis", &GroupAction::FixedSubspace::basis)
      .def_readonly("projector", &GroupAction::FixedSubspace::projector)
      .def_readonly("dim", &GroupAction::FixedSubspace::dim);

  py::class_<GroupAction>(m, "GroupAction")
      .def_static("trivial", &GroupAction::trivial, py::arg("dim"),
                  py::arg("norm") = NormSpec::l2())
      .def_static("symmetric", &GroupAction::symmetric, py::arg("n"),
                  py::arg("norm") = NormSpec::l2())
      .def_static("signed_permutations", &GroupAction::signedPermutations, py::arg("n"),
                  py::arg("norm") = NormSpec::l2())
      .def_static("cyclic_rotations", &GroupAction::cyclicRotations, py::arg("k"),
                  py::arg("norm") = NormSpec::l2())
      .def_static("so2_quadrature", &GroupAction::so2Quadrature, py::arg("points") = 64,
                  py::arg("norm") = NormSpec::l2())
      .def_static(
          "from_generators",
          [](const std::vector<Matrix>& gens, const NormSpec& norm) {
            return GroupAction::fromGenerators(gens, norm);
          },
          py::arg("generators"), py::arg("norm") = NormSpec::l2())
      .def_property_readonly("dimension", &GroupAction::dimension)
      .def("__len__", &GroupAction::size)
      .def("element", &GroupAction::apply, py::arg("i"), py::arg("x"))
      .def("elements", &GroupAction::elements)
      .def("weights", &GroupAction::weights)
      .def("symmetrize", &GroupAction::symmetrize, py::arg("x"))
      .def("reynolds", &GroupAction::reynolds)
      .def("orbit", &GroupAction::orbit, py::arg("x"), py::arg("dedup_tol") = 1e-10)
      .def("invariance_residual", &GroupAction::invarianceResidual, py::arg("x"))
      .def("adjoint", &GroupAction::adjoint)
      .def("fixed_subspace", &GroupAction::fixedSubspace, py::arg("tol") = 1e-8);

  py::class_<ScalarFunction>(m, "ScalarFunction")
      .def("__call__", &ScalarFunction::operator(), py::arg("x"))
      .def_property_readonly("dimension", &ScalarFunction::dimension)
      .def_property_readonly("name", &ScalarFunction::name)
      .def_property_readonly("has_gradient", &ScalarFunction::hasGradient)
      .def("gradient", &ScalarFunction::gradient, py::arg("x"))
      .def("__repr__", [](const ScalarFunction& f) {
        return "ScalarFunction(" + f.name() + ", dim=" + std::to_string(f.dimension()) + ")";
      });

  m.def("objective_catalog", [] {
    py::list out;
    for (const CatalogEntry& e : objectiveCatalog()) {
      py::dict d;
      d["name"] = e.name;
      d["description"] = e.description;
      d["any_dimension"] = e.anyDimension;
      d["fixed_dimension"] = e.fixedDimension;
      d["smooth"] = e.smooth;
      out.append(d);
    }
    return out;
  });
  m.def("catalog_objective", &catalogObjective, py::arg("name"), py::arg("dim"));
  m.def(
      "parse_objective",
      [](const std::string& text, int dim, bool lsc, bool convex, bool boundedBelow) {
        FunctionFlags flags;
        flags.lsc = lsc;
        flags.convex = convex;
        flags.boundedBelow = boundedBelow;
        return parseObjective(text, dim, flags);
      },
      py::arg("text"), py::arg("dim"), py::arg("lsc") = true, py::arg("convex") = false,
      py::arg("bounded_below") = false);
  m.def("symmetrize_function", &symmetrizeFunction, py::arg("f"), py::arg("group"));
  m.def("bump_transform", &bumpTransform, py::arg("phi"));

  m.def(
      "make_sample_cloud",
      [](int dim, int count, double radius, std::uint64_t seed, bool axisPoints,
         bool fullLattice, double latticeStep) {
        SampleSpec spec;
        spec.count = count;
        spec.radius = radius;
        spec.seed = seed;
        spec.axisPoints = axisPoints;
        spec.fullLattice = fullLattice;
        spec.latticeStep = latticeStep;
        return makeSampleCloud(dim, spec);
      },
      py::arg("dim"), py::arg("count") = 200, py::arg("radius") = 2.0, py::arg("seed") = 7,
      py::arg("axis_points") = true, py::arg("full_lattice") = false,
      py::arg("lattice_step") = 0.5);

  py::class_<InvarianceReport>(m, "InvarianceReport")
      .def_readonly("invariant", &InvarianceReport::invariant)
      .def_readonly("max_deviation", &InvarianceReport::maxDeviation)
      .def_readonly("witness", &InvarianceReport::witness)
      .def_readonly("checked_points", &InvarianceReport::checkedPoints);

  py::class_<GroupConvexityReport>(m, "GroupConvexityReport")
      .def_readonly("holds", &GroupConvexityReport::holds)
      .def_readonly("max_violation", &GroupConvexityReport::maxViolation)
      .def_readonly("witness", &GroupConvexityReport::witness)
      .def_readonly("lhs", &GroupConvexityReport::lhs)
      .def_readonly("rhs", &GroupConvexityReport::rhs)
      .def_readonly("checked_points", &GroupConvexityReport::checkedPoints);

  m.def("check_invariance", &checkInvariance, py::arg("f"), py::arg("group"),
        py::arg("points"), py::arg("tol") = 1e-9,
        py::call_guard<py::gil_scoped_release>());
  m.def("check_group_convexity", &checkGroupConvexity, py::arg("f"), py::arg("group"),
        py::arg("points"), py::arg("tol") = 1e-9,
        py::call_guard<py::gil_scoped_release>());
  m.def("check_group_linearity", &checkGroupLinearity, py::arg("f"), py::arg("group"),
        py::arg("points"), py::arg("tol") = 1e-9,
        py::call_guard<py::gil_scoped_release>());

  py::class_<EkelandStage>(m, "EkelandStage")
      .def_readonly("index", &EkelandStage::index)
      .def_readonly("point", &EkelandStage::point)
      .def_readonly("value", &EkelandStage::value)
      .def_readonly("cone_bound", &EkelandStage::coneBound)
      .def_readonly("step_bound", &EkelandStage::stepBound)
      .def_readonly("step_taken", &EkelandStage::stepTaken);

  py::class_<EkelandCertificate>(m, "EkelandCertificate")
      .def_readonly("inequality_verified", &EkelandCertificate::inequalityVerified)
      .def_readonly("inequality_margin", &EkelandCertificate::inequalityMargin)
      .def_readonly("worst_point", &EkelandCertificate::worstPoint)
      .def_readonly("verified_points", &EkelandCertificate::verifiedPoints)
      .def_readonly("cloud_scope", &EkelandCertificate::cloudScope)
      .def_readonly("invariance_residual", &EkelandCertificate::invarianceResidual)
      .def_readonly("value_at_point", &EkelandCertificate::valueAtPoint)
      .def_readonly("reference_value", &EkelandCertificate::referenceValue)
      .def_readonly("distance_from_start", &EkelandCertificate::distanceFromStart)
      .def_readonly("localization_bound", &EkelandCertificate::localizationBound)
      .def_readonly("localization_satisfied", &EkelandCertificate::localizationSatisfied)
      .def_readonly("step_bounds_satisfied", &EkelandCertificate::stepBoundsSatisfied);

  py::class_<EkelandResult>(m, "EkelandResult")
      .def_readonly("succeeded", &EkelandResult::succeeded)
      .def_readonly("unbounded_detected", &EkelandResult::unboundedDetected)
      .def_readonly("note", &EkelandResult::note)
      .def_readonly("symmetrized_start", &EkelandResult::symmetrizedStart)
      .def_readonly("sequence_start", &EkelandResult::sequenceStart)
      .def_readonly("point", &EkelandResult::point)
      .def_readonly("stages", &EkelandResult::stages)
      .def_readonly("certificate", &EkelandResult::certificate)
      .def_readonly("approx_infimum", &EkelandResult::approxInfimum)
      .def_readonly("convexity", &EkelandResult::convexity)
      .def_readonly("invariance", &EkelandResult::invariance);

  m.def(
      "ekeland_iterate",
      [](const ScalarFunction& phi, const GroupAction& G, const Vector& x0, double epsilon,
         double delta, const std::string& policy, const NormSpec& norm, int maxStages,
         double stopStep, int stageBudget, int multiStarts, int verifySamples,
         double verifyRadiusFactor, double marginTol, unsigned long long seed,
         const std::vector<Vector>& anchors) {
        EkelandParams params;
        params.epsilon = epsilon;
        params.delta = delta;
        params.start = parsePolicy(policy);
        params.norm = norm;
        params.maxStages = maxStages;
        params.stopStep = stopStep;
        params.stageBudget = stageBudget;
        params.multiStarts = multiStarts;
        params.verifySamples = verifySamples;
        params.verifyRadiusFactor = verifyRadiusFactor;
        params.marginTol = marginTol;
        params.seed = seed;
        py::gil_scoped_release release;
        return ekelandIterate(phi, G, x0, params, anchors);
      },
      py::arg("phi"), py::arg("group"), py::arg("start"), py::arg("epsilon") = 0.5,
      py::arg("delta") = 0.5, py::arg("policy") = "proof_schedule",
      py::arg("norm") = NormSpec::l2(), py::arg("max_stages") = 60,
      py::arg("stop_step") = 1e-8, py::arg("stage_budget") = 4000,
      py::arg("multi_starts") = 8, py::arg("verify_samples") = 10000,
      py::arg("verify_radius_factor") = 2.0, py::arg("margin_tol") = 1e-8,
      py::arg("seed") = 2024, py::arg("anchors") = std::vector<Vector>{});

  py::class_<ConvexBody>(m, "ConvexBody")
      .def_static("halfspaces", &ConvexBody::halfspaces, py::arg("A"), py::arg("b"))
      .def_static("hull", &ConvexBody::hull, py::arg("points"))
      .def_static("ball", &ConvexBody::ball, py::arg("norm"), py::arg("radius"),
                  py::arg("center"))
      .def_property_readonly("kind",
                             [](const ConvexBody& c) { return std::string(kindName(c.kind())); })
      .def_property_readonly("dimension", &ConvexBody::dimension)
      .def("contains", &ConvexBody::contains, py::arg("x"), py::arg("tol") = 1e-9)
      .def("project", [](const ConvexBody& c, const Vector& x) { return c.project(x); },
           py::arg("x"))
      .def("bounded", &ConvexBody::bounded)
      .def("vertex_list", &ConvexBody::vertexList)
      .def("support_value", &ConvexBody::supportValue, py::arg("u"))
      .def("invariant_under", &ConvexBody::invariantUnder, py::arg("group"),
           py::arg("tol") = 1e-8)
      .def("__repr__",
           [](const ConvexBody& c) { return "ConvexBody(" + c.describe() + ")"; });

  m.def("minkowski_gauge", &minkowskiGauge, py::arg("body"), py::arg("x"));

  py::class_<ClosestPairResult>(m, "ClosestPairResult")
      .def_readonly("in_a", &ClosestPairResult::inA)
      .def_readonly("in_b", &ClosestPairResult::inB)
      .def_readonly("gap", &ClosestPairResult::gap)
      .def_readonly("iterations", &ClosestPairResult::iterations);

  py::class_<SeparationResult>(m, "SeparationResult")
      .def_readonly("degenerate", &SeparationResult::degenerate)
      .def_readonly("note", &SeparationResult::note)
      .def_readonly("functional", &SeparationResult::functional)
      .def_readonly("level", &SeparationResult::level)
      .def_readonly("sup_a", &SeparationResult::supA)
      .def_readonly("inf_b", &SeparationResult::infB)
      .def_readonly("margin_a", &SeparationResult::marginA)
      .def_readonly("margin_b", &SeparationResult::marginB)
      .def_readonly("euclidean_gap", &SeparationResult::euclideanGap)
      .def_readonly("fixed_residual", &SeparationResult::fixedResidual)
      .def_readonly("pair", &SeparationResult::pair);

  m.def("separate_invariant", &separateInvariant, py::arg("a"), py::arg("b"),
        py::arg("group"), py::arg("gap_tol") = 1e-9,
        py::call_guard<py::gil_scoped_release>());

  py::class_<PalaisSmaleEntry>(m, "PalaisSmaleEntry")
      .def_readonly("n", &PalaisSmaleEntry::n)
      .def_readonly("point", &PalaisSmaleEntry::point)
      .def_readonly("value", &PalaisSmaleEntry::value)
      .def_readonly("grad_dual_norm", &PalaisSmaleEntry::gradDualNorm)
      .def_readonly("cloud_margin", &PalaisSmaleEntry::cloudMargin);

  py::class_<PalaisSmaleResult>(m, "PalaisSmaleResult")
      .def_readonly("succeeded", &PalaisSmaleResult::succeeded)
      .def_readonly("note", &PalaisSmaleResult::note)
      .def_readonly("entries", &PalaisSmaleResult::entries)
      .def_readonly("infimum_estimate", &PalaisSmaleResult::infimumEstimate);

  m.def("palais_smale_sequence", &palaisSmaleSequence, py::arg("phi"), py::arg("group"),
        py::arg("start"), py::arg("count") = 50, py::arg("norm") = NormSpec::l2(),
        py::arg("seed") = 2024, py::call_guard<py::gil_scoped_release>());

  py::class_<DenseRangeProbe>(m, "DenseRangeProbe")
      .def_readonly("succeeded", &DenseRangeProbe::succeeded)
      .def_readonly("note", &DenseRangeProbe::note)
      .def_readonly("target", &DenseRangeProbe::target)
      .def_readonly("best_point", &DenseRangeProbe::bestPoint)
      .def_readonly("residual", &DenseRangeProbe::residual)
      .def_readonly("growth_margin", &DenseRangeProbe::growthMargin)
      .def_readonly("residual_history", &DenseRangeProbe::residualHistory);

  m.def("dense_range_probe", &denseRangeProbe, py::arg("f"), py::arg("group"),
        py::arg("target"), py::arg("slope"), py::arg("offset"),
        py::arg("norm") = NormSpec::l2(), py::arg("max_runs") = 40, py::arg("tol") = 1e-6,
        py::arg("seed") = 2024, py::call_guard<py::gil_scoped_release>());

  py::class_<SubgradientCheck>(m, "SubgradientCheck")
      .def_readonly("member", &SubgradientCheck::member)
      .def_readonly("worst_slack", &SubgradientCheck::worstSlack)
      .def_readonly("worst_point", &SubgradientCheck::worstPoint)
      .def_readonly("checked_points", &SubgradientCheck::checkedPoints);

  m.def(
      "eps_subdifferential_check",
      [](const ScalarFunction& f, const Vector& x0, const Vector& h, double eps,
         const GroupAction* group, int boxSamples, unsigned long long seed) {
        py::gil_scoped_release release;
        return epsSubdifferentialCheck(f, x0, h, eps, group, boxSamples, seed);
      },
      py::arg("f"), py::arg("x0"), py::arg("h"), py::arg("eps"),
      py::arg("group") = nullptr, py::arg("box_samples") = 500, py::arg("seed") = 97);

  py::class_<BronstedRockafellarResult>(m, "BronstedRockafellarResult")
      .def_readonly("succeeded", &BronstedRockafellarResult::succeeded)
      .def_readonly("note", &BronstedRockafellarResult::note)
      .def_readonly("point", &BronstedRockafellarResult::point)
      .def_readonly("functional", &BronstedRockafellarResult::functional)
      .def_readonly("point_distance", &BronstedRockafellarResult::pointDistance)
      .def_readonly("functional_distance", &BronstedRockafellarResult::functionalDistance)
      .def_readonly("membership_margin", &BronstedRockafellarResult::membershipMargin)
      .def_readonly("point_invariance_residual",
                    &BronstedRockafellarResult::pointInvarianceResidual)
      .def_readonly("functional_fixed_residual",
                    &BronstedRockafellarResult::functionalFixedResidual)
      .def_readonly("inner", &BronstedRockafellarResult::inner);

  m.def("bronsted_rockafellar", &bronstedRockafellar, py::arg("f"), py::arg("group"),
        py::arg("x0"), py::arg("x0_star"), py::arg("eps"), py::arg("lam"),
        py::arg("norm") = NormSpec::l2(), py::arg("seed") = 2024,
        py::call_guard<py::gil_scoped_release>());

  py::class_<BishopPhelpsResult>(m, "BishopPhelpsResult")
      .def_readonly("succeeded", &BishopPhelpsResult::succeeded)
      .def_readonly("note", &BishopPhelpsResult::note)
      .def_readonly("support_point", &BishopPhelpsResult::supportPoint)
      .def_readonly("perturbation", &BishopPhelpsResult::perturbation)
      .def_readonly("functional", &BishopPhelpsResult::functional)
      .def_readonly("perturbation_norm", &BishopPhelpsResult::perturbationNorm)
      .def_readonly("support_margin", &BishopPhelpsResult::supportMargin)
      .def_readonly("functional_fixed_residual",
                    &BishopPhelpsResult::functionalFixedResidual)
      .def_readonly("inner", &BishopPhelpsResult::inner);

  m.def("bishop_phelps", &bishopPhelps, py::arg("body"), py::arg("group"), py::arg("u"),
        py::arg("eps"), py::arg("norm") = NormSpec::l2(), py::arg("seed") = 2024,
        py::call_guard<py::gil_scoped_release>());

  py::class_<DualDescriptionResult>(m, "DualDescriptionResult")
      .def_readonly("consistent", &DualDescriptionResult::consistent)
      .def_readonly("transform_convex", &DualDescriptionResult::transformConvex)
      .def_readonly("spans_agree", &DualDescriptionResult::spansAgree)
      .def_readonly("note", &DualDescriptionResult::note)
      .def_readonly("gradient_span_dim", &DualDescriptionResult::gradientSpanDim)
      .def_readonly("fixed_dual_dim", &DualDescriptionResult::fixedDualDim)
      .def_readonly("max_principal_angle", &DualDescriptionResult::maxPrincipalAngle);

  m.def("dual_description_check", &dualDescriptionCheck, py::arg("phi"), py::arg("group"),
        py::arg("sample_count") = 200, py::arg("seed") = 2024,
        py::call_guard<py::gil_scoped_release>());

  m.def("set_thread_count", &setThreadCount, py::arg("k"));
  m.def("thread_count", &threadCount);
}
