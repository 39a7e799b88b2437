"""Acceptance criteria 1-11. Each test prints one ``CRITERION n: PASS|FAIL`` line.

Run with ``pytest tests/test_acceptance.py -v``.
"""
import filecmp
import json
import subprocess
import sys
import time

import numpy as np
import pytest

import oracles
from robindrift import (
    BoundaryCondition,
    DomainSpec,
    DriftSpec,
    RadialProblem,
    assemble,
    assemble_parts,
    extremal_drift,
    faber_krahn,
    limit_check,
    mesh_convergence,
    principal_eigenpair,
    radial_alignment,
    radial_principal,
    sandwich_check,
    triangulate,
    zero_drift,
)
from robindrift.experiments import DEFAULT_BETA_GRID

TEST_DOMAINS = ("disk(1)", "ellipse(2,0.5)", "stadium(2,0.5)")
NON_BALLS = ("ellipse(2,0.5)", "stadium(2,0.5)", "annulus(0.5,1)")
DRIFTS = (DriftSpec("zero"), DriftSpec("radial", 1.0), DriftSpec("random", 1.0, 7))
MONO_BETAS = (0.1, 0.5, 1, 2, 5, 10, 50, 100)
MATRIX_H = 0.05


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


def test_criterion_01_interval_robin(report):
    ref = oracles.robin_interval(1.0, 1.0)
    t0 = time.perf_counter()
    mesh = triangulate(DomainSpec.interval(1), 1e-3)
    fem = principal_eigenpair(assemble(mesh, zero_drift(mesh), BoundaryCondition.robin(1.0))).lam
    t_fem = time.perf_counter() - t0
    t0 = time.perf_counter()
    rad = radial_principal(RadialProblem(1, 1.0, bc="robin", beta=1.0)).lam
    t_rad = time.perf_counter() - t0
    e_fem, e_rad = abs(fem - ref) / ref, abs(rad - ref) / ref
    ok = e_fem <= 1e-3 and e_rad <= 1e-3 and t_fem < 1 and t_rad < 1
    report(1, ok, f"fem rel err {e_fem:.1e} ({t_fem:.2f}s), radial rel err {e_rad:.1e} ({t_rad:.2f}s)")


def test_criterion_02_disk_dirichlet(report):
    t0 = time.perf_counter()
    mesh = triangulate(DomainSpec.disk(1), 0.02)
    lam = principal_eigenpair(assemble(mesh, zero_drift(mesh), BoundaryCondition.dirichlet())).lam
    dt = time.perf_counter() - t0
    err = abs(lam - oracles.J01**2) / oracles.J01**2
    report(2, err <= 5e-3 and dt < 30, f"lambda={lam:.6f} rel err {err:.2e} ({dt:.1f}s)")


@pytest.fixture(scope="module")
def matrix_parts():
    out = {}
    for text in TEST_DOMAINS:
        mesh = triangulate(DomainSpec.parse(text), MATRIX_H)
        for spec in DRIFTS:
            out[text, str(spec)] = assemble_parts(mesh, spec.build(mesh))
    return out


def test_criterion_03_beta_monotonicity(report, matrix_parts):
    bad = []
    for key, parts in matrix_parts.items():
        lams = [principal_eigenpair(parts.operator(BoundaryCondition.robin(b))).lam for b in MONO_BETAS]
        if not np.all(np.diff(lams) > 0):
            bad.append(key)
    report(3, not bad, f"{len(matrix_parts)} domain/drift pairs, violations: {bad}")


def test_criterion_04_beta_limits(report, matrix_parts):
    failed = []
    for (text, drift), parts in matrix_parts.items():
        spec = next(s for s in DRIFTS if str(s) == drift)
        rep = limit_check(DomainSpec.parse(text), spec, MATRIX_H, mesh=parts.mesh)
        if not rep.passed:
            failed.append((text, drift, rep.checks))
    report(4, not failed, f"{len(matrix_parts)} domain/drift pairs, failures: {failed}")


@pytest.fixture(scope="module")
def disk_extremal():
    t0 = time.perf_counter()
    mesh = triangulate(DomainSpec.disk(1), 0.03)
    lo = extremal_drift(mesh, 1.0, 1.0, "minimize")
    hi = extremal_drift(mesh, 1.0, 1.0, "maximize")
    return mesh, lo, hi, time.perf_counter() - t0


def test_criterion_05_ball_extremal_drift(report, disk_extremal):
    mesh, lo, hi, dt = disk_extremal
    ref = radial_principal(RadialProblem(2, 1.0, tau=1.0, sign=1, beta=1.0)).lam
    a_lo, a_hi = radial_alignment(mesh, lo.drift, 0.1), radial_alignment(mesh, hi.drift, 0.1)
    err = abs(lo.lam - ref) / ref
    ok = (lo.converged and lo.iterations <= 100 and a_lo >= 0.99 and err <= 1e-2
          and lo.optimality_residual <= 1e-2 and a_hi <= -0.99 and dt < 300)
    report(5, ok, f"{lo.iterations} iterations, alignment {a_lo:.5f}/{a_hi:.5f}, "
                  f"lambda rel err {err:.1e}, residual {lo.optimality_residual:.1e} ({dt:.1f}s)")


def test_criterion_06_optimality_identities(report, disk_extremal):
    _, lo, hi, _ = disk_extremal
    worst = {"disk(1)": max(lo.optimality_residual, hi.optimality_residual)}
    for text in TEST_DOMAINS[1:] + ("annulus(0.5,1)",):
        mesh = triangulate(DomainSpec.parse(text), MATRIX_H)
        worst[text] = max(extremal_drift(mesh, 1.0, 1.0, s).optimality_residual
                          for s in ("minimize", "maximize"))
    report(6, max(worst.values()) <= 1e-6, f"max residual per domain {worst}")


def test_criterion_07_saturation(report, disk_extremal):
    mesh_f, lo_f, _, _ = disk_extremal
    mesh_c = triangulate(DomainSpec.disk(1), 0.06)
    lo_c = extremal_drift(mesh_c, 1.0, 1.0, "minimize")
    frac = [float(np.mean(np.abs(r.drift.magnitudes - 1.0) <= 1e-12)) for r in (lo_c, lo_f)]
    report(7, frac[0] >= 0.95 and frac[1] >= 0.98, f"saturated fraction h=0.06: {frac[0]:.4f}, h=0.03: {frac[1]:.4f}")


def test_criterion_08_faber_krahn(report):
    rep = faber_krahn(DomainSpec.ellipse(2, 0.5), 1.0, [1, 2, 5, 10, 50], 0.03)
    ok = bool(rep.certified.all())
    lines = [f"tau=1 margins {np.round(rep.margins, 4).tolist()}"]
    for text in NON_BALLS:
        r0 = faber_krahn(DomainSpec.parse(text), 0.0, DEFAULT_BETA_GRID, MATRIX_H)
        ok &= bool(r0.certified.all())
        lines.append(f"{text} tau=0 min margin/bound {np.min(r0.margins / r0.error_bound):.1f}")
    report(8, ok, "; ".join(lines))


def test_criterion_09_sandwich(report):
    bad = {}
    for text in TEST_DOMAINS:
        rep = sandwich_check(triangulate(DomainSpec.parse(text), MATRIX_H), 1.0, 1.0, n_random=20, seed=0)
        if not rep.passed or len(rep.lambdas) != 20:
            bad[text] = rep.violations
    report(9, not bad, f"20 random drifts on each of {len(TEST_DOMAINS)} domains, violations: {bad}")


def test_criterion_10_convergence_order(report):
    orders = {}
    for tau in (0.0, 1.0):
        spec = DriftSpec("radial", tau) if tau else DriftSpec()
        for bc in (BoundaryCondition.robin(1.0), BoundaryCondition.dirichlet()):
            tab = mesh_convergence(DomainSpec.disk(1), spec, bc, [0.08, 0.04, 0.02])
            orders[f"tau={tau:g},{bc}"] = round(tab.order, 3)
    report(10, min(orders.values()) >= 1.8, f"fitted orders {orders}")


DETERMINISM_RUNS = [
    ["eigen", "--domain", "ellipse(2,0.5)", "--h", "0.08", "--drift", "random:5", "--tau", "1"],
    ["sweep", "--domain", "stadium(2,0.5)", "--h", "0.08", "--drift", "random:5", "--tau", "1"],
    ["limits", "--domain", "disk(1)", "--h", "0.08", "--drift", "radial", "--tau", "1"],
    ["extremal", "--domain", "ellipse(2,0.5)", "--h", "0.08", "--tau", "1"],
    ["fk", "--domain", "ellipse(2,0.5)", "--h", "0.08", "--tau", "1", "--beta-grid", "1,10",
     "--n-random", "3", "--seed", "9"],
    ["radial", "--tau", "1", "--n", "512"],
    ["converge", "--domain", "disk(1)", "--h-list", "0.16,0.08,0.04"],
]


def test_criterion_11_determinism(report, tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"beta": 2.0, "seed": 3}))
    for run in ("a", "b"):
        for args in DETERMINISM_RUNS:
            for fmt in ("csv", "json"):
                subprocess.run([sys.executable, "-m", "robindrift", *args, "--config", str(cfg),
                                "--format", fmt, "--out", str(tmp_path / run)],
                               check=True, capture_output=True)
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", files, shallow=False)
    ok = len(files) == 2 * len(DETERMINISM_RUNS) and not mismatch and not errors
    report(11, ok, f"{len(match)}/{len(files)} output files byte-identical")
