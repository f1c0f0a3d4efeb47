import math
import os
import sys

import numpy as np
import pytest

module_dir = os.environ.get("SYMVP_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)

try:
    import _symvp as core
except ImportError:
    from symvp import _symvp as core


def test_reynolds_projects_and_fixes():
    G = core.GroupAction.symmetric(3)
    P = G.reynolds()
    assert np.max(np.abs(P @ P - P)) <= 1e-10
    x = np.array([0.9, -0.4, 0.1])
    xbar = G.symmetrize(x)
    assert np.allclose(xbar, np.full(3, x.mean()))
    assert G.invariance_residual(xbar) <= 1e-9
    fixed = G.fixed_subspace()
    assert fixed.dim == 1


def test_catalog_and_expressions():
    names = [entry["name"] for entry in core.objective_catalog()]
    assert "sumsq_plus_one" in names and "tent" in names
    phi = core.catalog_objective("sumsq_plus_one", 3)
    x = np.array([1.0, 2.0, -1.0])
    assert phi(x) == pytest.approx(7.0)
    assert phi.has_gradient
    assert np.allclose(phi.gradient(x), 2.0 * x)

    f = core.parse_objective("cosh(x1) + x2^2", 2)
    assert f(np.array([0.0, 3.0])) == pytest.approx(10.0)
    assert f.has_gradient


def test_tent_is_not_group_convex():
    tent = core.catalog_objective("tent", 1)
    flips = core.GroupAction.signed_permutations(1)
    report = core.check_group_convexity(tent, flips, core.make_sample_cloud(1))
    assert not report.holds
    assert report.witness[0] == pytest.approx(0.5)
    assert report.max_violation == pytest.approx(1.0)


def test_ekeland_certificate():
    phi = core.catalog_objective("sumsq_plus_one", 3)
    G = core.GroupAction.symmetric(3)
    r = core.ekeland_iterate(
        phi, G, np.array([0.9, -0.4, 0.1]), epsilon=0.5, delta=0.05, verify_samples=2000
    )
    assert r.succeeded
    assert r.certificate.inequality_margin >= -1e-8
    assert r.certificate.invariance_residual <= 1e-8
    assert r.certificate.distance_from_start <= 0.1 + 1e-8
    assert r.approx_infimum == pytest.approx(1.0, abs=1e-6)
    assert all(s.step_taken <= s.step_bound + 1e-10 for s in r.stages)


def test_invariant_separation():
    G = core.GroupAction.symmetric(2)
    l2 = core.NormSpec.l2()
    A = core.ConvexBody.ball(l2, 0.5, np.array([2.0, 2.0]))
    B = core.ConvexBody.ball(l2, 0.5, np.array([-1.0, -1.0]))
    r = core.separate_invariant(A, B, G)
    assert not r.degenerate
    assert r.fixed_residual <= 1e-9
    assert r.margin_a > 0 and r.margin_b > 0
    assert r.sup_a < r.level < r.inf_b


def test_eps_subdifferential_membership():
    f = core.catalog_objective("max_coord", 2)
    x0 = np.zeros(2)
    assert core.eps_subdifferential_check(f, x0, np.array([0.5, 0.5]), 0.0).member
    assert not core.eps_subdifferential_check(f, x0, np.array([0.6, 0.6]), 0.1).member


def test_bishop_phelps_on_a_hexagon():
    pts = [np.array(p, dtype=float)
           for p in [(2, 1), (1, 2), (-1, 1), (1, -1), (-2, -1), (-1, -2)]]
    body = core.ConvexBody.hull(pts)
    G = core.GroupAction.symmetric(2)
    r = core.bishop_phelps(body, G, np.array([1.0, 1.0]), 0.25)
    assert r.succeeded
    assert r.perturbation_norm <= 0.25 + 1e-9
    assert r.support_margin >= -1e-8
    assert np.allclose(r.support_point, [1.5, 1.5], atol=1e-6)


def test_norm_duality_and_gauge():
    l1 = core.NormSpec.l1()
    u = np.array([3.0, -4.0])
    assert l1(u) == pytest.approx(7.0)
    assert l1.dual(u) == pytest.approx(4.0)
    disk = core.ConvexBody.ball(core.NormSpec.l2(), 2.0, np.zeros(2))
    assert core.minkowski_gauge(disk, np.array([0.6, -0.8])) == pytest.approx(0.5)


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        core.NormSpec.weighted_l2(np.array([1.0, -1.0]))
    with pytest.raises(RuntimeError):
        core.parse_objective("x1 +", 2)
    f = core.catalog_objective("max_coord", 2)
    G = core.GroupAction.symmetric(2)
    with pytest.raises(Exception):
        core.palais_smale_sequence(f, G, np.zeros(2), 3)
