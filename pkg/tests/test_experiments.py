import json
import math

import numpy as np
import pytest

import oracles
from robindrift import (
    BoundaryCondition,
    DomainSpec,
    DriftSpec,
    RadialProblem,
    beta_sweep,
    faber_krahn,
    limit_check,
    mesh_convergence,
    radial_principal,
    small_beta_study,
)

DISK = DomainSpec.disk(1)


def test_disk_sweep(mesh_cache):
    tab = beta_sweep(DISK, DriftSpec(), [0.1, 1, 10, 100], 0.03, mesh=mesh_cache("disk(1)", 0.03))
    assert tab.passed and tab.violations == []
    assert tab.lambdas[-1] == pytest.approx(oracles.J01**2, rel=0.05)


def test_interval_sweep_single_beta():
    tab = beta_sweep(DomainSpec.interval(1), DriftSpec(), [1.0], 1e-3)
    assert len(tab.lambdas) == 1 and tab.passed
    assert tab.lambdas[0] == pytest.approx(0.7402, abs=1e-4)


@pytest.mark.parametrize("grid", [[], [1.0, 0.5], [0.0, 1.0], [1.0, 1.0]])
def test_sweep_rejects_bad_grids(grid):
    with pytest.raises(ValueError):
        beta_sweep(DISK, DriftSpec(), grid, 0.1)


def test_sweep_outputs(mesh_cache):
    tab = beta_sweep(DISK, DriftSpec("radial", 1.0), [0.5, 2.0], 0.1, mesh=mesh_cache("disk(1)", 0.1))
    lines = tab.to_csv().splitlines()
    assert lines[0] == "beta,lambda,residual" and len(lines) == 3
    assert tab.to_csv(timing=True).splitlines()[0].endswith(",runtime")
    doc = json.loads(tab.to_json())
    assert doc["schema_version"] == 1 and doc["passed"] and len(doc["rows"]) == 2


def test_limits_disk_radial(mesh_cache):
    rep = limit_check(DISK, DriftSpec("radial", 1.0), 0.03, mesh=mesh_cache("disk(1)", 0.03))
    assert rep.passed, rep.checks


def test_limits_ellipse_random(mesh_cache):
    rep = limit_check(DomainSpec.ellipse(2, 0.5), DriftSpec("random", 1.0, 7), 0.03,
                      mesh=mesh_cache("ellipse(2,0.5)", 0.03))
    assert rep.passed, rep.checks
    assert json.loads(rep.to_json())["checks"] == rep.checks


def test_limits_radial_agrees_with_reference(mesh_cache):
    mesh = mesh_cache("disk(1)", 0.03)
    rep = limit_check(DISK, DriftSpec("radial", 1.0), 0.03, mesh=mesh)
    ref = radial_principal(RadialProblem(2, 1.0, tau=1.0, bc="dirichlet")).lam
    assert rep.lambda_dirichlet == pytest.approx(ref, rel=3 * mesh.h**2)


def test_fk_stadium_without_drift(mesh_cache):
    rep = faber_krahn(DomainSpec.stadium(2, 0.5), 0.0, [1.0], 0.05, mesh=mesh_cache("stadium(2,0.5)", 0.05))
    assert rep.margins[0] > rep.error_bound[0] > 0
    assert rep.passed and rep.beta0 == 1.0


def test_fk_near_disk_records_without_asserting():
    c = 1.0
    dom = DomainSpec.ellipse(1.0001 * c, c / 1.0001)
    rep = small_beta_study(dom, 1.0, 0.08, betas=[0.01])
    assert rep.passed  # nothing asserted for small beta
    assert np.isfinite(rep.margins[0]) and rep.error_bound[0] > 0
    assert rep.ball.params[0] == pytest.approx(1.0, rel=1e-12)


def test_fk_rejects_ball():
    with pytest.raises(ValueError):
        faber_krahn(DISK, 1.0, [1.0], 0.1)


def test_fk_outputs_and_sanity(mesh_cache):
    rep = faber_krahn(DomainSpec.ellipse(2, 0.5), 1.0, [1.0, 5.0], 0.06, n_random_drifts=3,
                      mesh=mesh_cache("ellipse(2,0.5)", 0.06))
    assert rep.sanity_violations == []
    assert all(r >= m - 1e-9 for r, m in zip(rep.random_min, rep.lambda_min))
    lines = rep.to_csv().splitlines()
    assert lines[0] == "beta,lambda_min,lambda_ref,margin,error_bound,certified" and len(lines) == 3
    doc = json.loads(rep.to_json())
    assert doc["beta0"] == rep.beta0 and doc["epsilon"] == rep.epsilon


def test_fk_margin_trend_at_large_beta(mesh_cache):
    # margins settle toward the Dirichlet comparison as beta grows
    rep = faber_krahn(DomainSpec.ellipse(2, 0.5), 1.0, [50.0, 1000.0], 0.05,
                      mesh=mesh_cache("ellipse(2,0.5)", 0.05))
    m50, m1000 = rep.margins
    assert m50 > 0 and m1000 > 0
    assert abs(m1000 - m50) <= 0.3 * m1000


def test_convergence_disk_dirichlet():
    tab = mesh_convergence(DISK, DriftSpec(), BoundaryCondition.dirichlet(), [0.08, 0.04, 0.02])
    assert tab.passed and tab.order == pytest.approx(2.0, abs=0.2)
    assert tab.extrapolated == pytest.approx(oracles.J01**2, abs=1e-3)


def test_convergence_interval_robin():
    tab = mesh_convergence(DomainSpec.interval(1), DriftSpec(), BoundaryCondition.robin(1.0),
                           [4e-3, 2e-3, 1e-3])
    assert tab.extrapolated == pytest.approx(oracles.FROZEN["robin_R1_beta1"], abs=1e-6)


def test_convergence_disk_radial_drift():
    tab = mesh_convergence(DISK, DriftSpec("radial", 1.0), BoundaryCondition.robin(1.0),
                           [0.08, 0.04, 0.02])
    ref = radial_principal(RadialProblem(2, 1.0, tau=1.0, beta=1.0)).lam
    assert tab.passed
    assert tab.extrapolated == pytest.approx(ref, abs=1e-4)
    doc = json.loads(tab.to_json())
    assert doc["order"] == tab.order and len(doc["rows"]) == 3


@pytest.mark.parametrize("h_list", [[0.08, 0.04], [0.02, 0.04, 0.08]])
def test_convergence_rejects_bad_lists(h_list):
    with pytest.raises(ValueError):
        mesh_convergence(DISK, DriftSpec(), BoundaryCondition.dirichlet(), h_list)


def test_drift_spec_parsing():
    assert DriftSpec.parse("zero", 3.0) == DriftSpec("zero", 0.0)
    assert DriftSpec.parse("random:7", 2.0) == DriftSpec("random", 2.0, 7)
    assert str(DriftSpec("random", 1.0, 7)) == "random:7(tau=1)"
    with pytest.raises(ValueError):
        DriftSpec.parse("spiral")


def test_repeated_runs_are_identical(mesh_cache):
    mesh = mesh_cache("stadium(2,0.5)", 0.1)
    runs = [beta_sweep(DomainSpec.stadium(2, 0.5), DriftSpec("random", 1.0, 3), [0.5, 5.0], 0.1,
                       mesh=mesh).to_json() for _ in range(2)]
    assert runs[0] == runs[1]
    assert math.isfinite(json.loads(runs[0])["rows"][0]["lambda"])
