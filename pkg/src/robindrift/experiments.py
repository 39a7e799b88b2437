"""
Experiment drivers built on the solvers.

Every driver returns a report object with a ``passed`` flag and
deterministic ``to_csv`` / ``to_json`` serializations (no timings, no
timestamps) so that identical inputs give byte-identical files.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .assembly import BoundaryCondition, assemble_parts
from .eigensolver import SolverConfig, principal_eigenpair
from .extremal import ExtremalConfig, extremal_drift
from .geometry import (
    DomainSpec,
    DriftField,
    Mesh,
    equimeasurable_ball,
    radial_drift,
    random_drift,
    triangulate,
    zero_drift,
)
from .radial import RadialProblem, radial_principal

SCHEMA_VERSION = 1
DEFAULT_BETA_GRID = tuple(float(b) for b in np.logspace(-3, 3, 13))
# FEM eigenvalue error model: |lambda_h - lambda| <= FEM_ERROR_CONSTANT * h^2 * lambda
FEM_ERROR_CONSTANT = 3.0


def _fmt(x) -> str:
    return repr(float(x))


def _finite(obj):
    """Replace non-finite floats by None so the output is strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _dump(doc: dict) -> str:
    doc = _finite({"schema_version": SCHEMA_VERSION, **doc})
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


@dataclass(frozen=True)
class DriftSpec:
    """Recipe for a drift on any mesh.

    ``kind`` is one of ``zero``, ``radial`` (tau e_r), ``inward`` (-tau e_r)
    or ``random`` (seeded directions, magnitude tau).
    """

    kind: str = "zero"
    tau: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("zero", "radial", "inward", "random"):
            raise ValueError(f"unknown drift kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str, tau: float = 1.0) -> "DriftSpec":
        """Parse ``zero``, ``radial``, ``inward`` or ``random:SEED``."""
        kind, _, seed = text.partition(":")
        if kind == "zero":
            return cls("zero", 0.0)
        return cls(kind, tau, int(seed) if seed else 0)

    def build(self, mesh: Mesh) -> DriftField:
        if self.kind == "zero":
            return zero_drift(mesh)
        if self.kind == "radial":
            return radial_drift(mesh, self.tau, +1)
        if self.kind == "inward":
            return radial_drift(mesh, self.tau, -1)
        return random_drift(mesh, self.tau, self.seed)

    def __str__(self):
        if self.kind == "zero":
            return "zero"
        suffix = f":{self.seed}" if self.kind == "random" else ""
        return f"{self.kind}{suffix}(tau={self.tau:g})"


# ---------------------------------------------------------------------------
# beta sweep
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SweepTable:
    domain: DomainSpec
    drift: str
    h: float
    betas: list
    lambdas: list
    residuals: list
    runtimes: list

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.lambdas)

    @property
    def violations(self) -> list:
        """Indices i with lambda[i+1] <= lambda[i]."""
        return [int(i) for i in np.flatnonzero(self.increments <= 0)]

    @property
    def passed(self) -> bool:
        # a decrease beyond 1e-10 would contradict monotonicity in beta
        return bool(np.all(self.increments > -1e-10))

    def to_csv(self, timing: bool = False) -> str:
        head = "beta,lambda,residual" + (",runtime" if timing else "")
        lines = [head]
        for b, lam, r, t in zip(self.betas, self.lambdas, self.residuals, self.runtimes):
            row = f"{_fmt(b)},{_fmt(lam)},{_fmt(r)}"
            lines.append(row + (f",{t:.6f}" if timing else ""))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return _dump(
            {
                "kind": "sweep",
                "domain": str(self.domain),
                "drift": self.drift,
                "h": self.h,
                "rows": [
                    {"beta": b, "lambda": lam, "residual": r}
                    for b, lam, r in zip(self.betas, self.lambdas, self.residuals)
                ],
                "passed": self.passed,
            }
        )


def beta_sweep(
    domain: DomainSpec,
    drift_spec: DriftSpec,
    betas,
    h: float,
    mesh: Mesh | None = None,
    cfg: SolverConfig | None = None,
) -> SweepTable:
    """Principal Robin eigenvalue over a sorted grid of beta on one mesh.

    The drift-dependent and drift-independent matrices are assembled once;
    only the boundary term is rescaled per beta.
    """
    betas = [float(b) for b in betas]
    if not betas or any(b <= 0 for b in betas):
        raise ValueError("beta grid must be nonempty and positive")
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("beta grid must be strictly increasing")
    mesh = mesh or triangulate(domain, h)
    parts = assemble_parts(mesh, drift_spec.build(mesh))
    lams, res, times = [], [], []
    for b in betas:
        t0 = time.perf_counter()
        eig = principal_eigenpair(parts.operator(BoundaryCondition.robin(b)), cfg)
        times.append(time.perf_counter() - t0)
        lams.append(eig.lam)
        res.append(eig.residual)
    return SweepTable(domain, str(drift_spec), mesh.h, betas, lams, res, times)


# ---------------------------------------------------------------------------
# limits in beta
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class LimitReport:
    domain: DomainSpec
    drift: str
    h: float
    lambda_dirichlet: float
    lambdas: dict  # beta -> lambda
    checks: dict  # name -> bool

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_csv(self) -> str:
        lines = ["beta,lambda,lambda_dirichlet"]
        for b, lam in self.lambdas.items():
            lines.append(f"{_fmt(b)},{_fmt(lam)},{_fmt(self.lambda_dirichlet)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return _dump(
            {
                "kind": "limits",
                "domain": str(self.domain),
                "drift": self.drift,
                "h": self.h,
                "lambda_dirichlet": self.lambda_dirichlet,
                "lambdas": [{"beta": b, "lambda": lam} for b, lam in self.lambdas.items()],
                "checks": self.checks,
                "passed": self.passed,
            }
        )


def limit_check(
    domain: DomainSpec,
    drift_spec: DriftSpec,
    h: float,
    betas=(1e-3, 1.0, 1e3),
    mesh: Mesh | None = None,
) -> LimitReport:
    """Compare Robin eigenvalues at small, moderate and large beta with the Dirichlet one.

    Checks ``lambda(beta_min) <= 1e-2``, ``lambda(beta) < lambda_D`` for every
    beta, and ``|lambda(beta_max) - lambda_D| / lambda_D <= 0.02``.
    """
    mesh = mesh or triangulate(domain, h)
    parts = assemble_parts(mesh, drift_spec.build(mesh))
    lam_d = principal_eigenpair(parts.operator(BoundaryCondition.dirichlet())).lam
    lams = {float(b): principal_eigenpair(parts.operator(BoundaryCondition.robin(b))).lam
            for b in betas}
    bmin, bmax = min(lams), max(lams)
    checks = {
        "small_beta_vanishes": lams[bmin] <= 1e-2,
        "below_dirichlet": all(lam < lam_d for lam in lams.values()),
        "large_beta_near_dirichlet": abs(lams[bmax] - lam_d) / lam_d <= 0.02,
    }
    return LimitReport(domain, str(drift_spec), mesh.h, lam_d, lams, checks)


# ---------------------------------------------------------------------------
# Faber-Krahn comparison
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class FKReport:
    """Worst-case eigenvalue on a domain against the ball with outward radial drift."""

    domain: DomainSpec
    ball: DomainSpec
    tau: float
    h: float
    betas: list
    lambda_min: list
    lambda_ref: list
    error_bound: list
    random_min: list  # smallest eigenvalue among the random sanity drifts, per beta
    sanity_violations: list  # betas where a random drift fell below lambda_min - 1e-9
    assert_beta_min: float

    @property
    def margins(self) -> np.ndarray:
        return np.asarray(self.lambda_min) - np.asarray(self.lambda_ref)

    @property
    def certified(self) -> np.ndarray:
        """Margin positive beyond the combined discretization error bound."""
        return self.margins > np.asarray(self.error_bound)

    @property
    def contradictions(self) -> list:
        """Betas in the asserted range with a negative margin beyond the error bound."""
        m, e = self.margins, np.asarray(self.error_bound)
        return [b for b, mi, ei in zip(self.betas, m, e) if b >= self.assert_beta_min and mi < -ei]

    @property
    def beta0(self) -> float | None:
        """Smallest grid beta from which every larger grid beta is certified."""
        cert = self.certified
        out = None
        for i in range(len(self.betas) - 1, -1, -1):
            if not cert[i]:
                break
            out = self.betas[i]
        return out

    @property
    def epsilon(self) -> float | None:
        b0 = self.beta0
        if b0 is None:
            return None
        return float(min(m for b, m in zip(self.betas, self.margins) if b >= b0))

    @property
    def passed(self) -> bool:
        return not self.sanity_violations and not self.contradictions

    def to_csv(self) -> str:
        lines = ["beta,lambda_min,lambda_ref,margin,error_bound,certified"]
        for i, b in enumerate(self.betas):
            lines.append(
                f"{_fmt(b)},{_fmt(self.lambda_min[i])},{_fmt(self.lambda_ref[i])},"
                f"{_fmt(self.margins[i])},{_fmt(self.error_bound[i])},{int(self.certified[i])}"
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return _dump(
            {
                "kind": "faber_krahn",
                "domain": str(self.domain),
                "ball": str(self.ball),
                "tau": self.tau,
                "h": self.h,
                "rows": [
                    {
                        "beta": b,
                        "lambda_min": self.lambda_min[i],
                        "lambda_ref": self.lambda_ref[i],
                        "margin": float(self.margins[i]),
                        "error_bound": self.error_bound[i],
                        "certified": bool(self.certified[i]),
                    }
                    for i, b in enumerate(self.betas)
                ],
                "beta0": self.beta0,
                "epsilon": self.epsilon,
                "sanity_violations": self.sanity_violations,
                "passed": self.passed,
            }
        )


def faber_krahn(
    domain: DomainSpec,
    tau: float,
    betas,
    h: float,
    n_random_drifts: int = 0,
    seed: int = 0,
    mesh: Mesh | None = None,
    assert_beta_min: float = 1.0,
    cfg: ExtremalConfig | None = None,
) -> FKReport:
    """Compare the minimal eigenvalue over drifts on ``domain`` with the radial ball value.

    For each beta the minimizing drift on ``domain`` gives ``lambda_min`` and
    the radial solver gives ``lambda_ref`` on the equimeasurable ball with
    drift ``tau e_r``. Margins are certified only beyond
    ``3 h^2 lambda_min + radial error estimate``. Random admissible drifts
    serve as sanity points and must not beat ``lambda_min``. A negative margin
    beyond the error bound at any ``beta >= assert_beta_min`` fails the report.
    """
    if domain.is_ball:
        raise ValueError("the Faber-Krahn comparison needs a domain that is not a ball")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    mesh = mesh or triangulate(domain, h)
    ball = equimeasurable_ball(domain)
    cfg = cfg or ExtremalConfig()
    base = assemble_parts(mesh, zero_drift(mesh))
    seeds = np.random.SeedSequence(seed).generate_state(max(n_random_drifts, 1))
    randoms = [random_drift(mesh, tau, int(s)) for s in seeds[:n_random_drifts]]
    rand_parts = [base.with_drift(v) for v in randoms]

    lmin, lref, bound, rmin, bad = [], [], [], [], []
    for b in (float(x) for x in betas):
        ext = extremal_drift(mesh, tau, b, "minimize", cfg)
        ref = radial_principal(RadialProblem(domain.dim, ball.params[0], tau, +1, "robin", b))
        lmin.append(ext.lam)
        lref.append(ref.lam)
        bound.append(FEM_ERROR_CONSTANT * mesh.h**2 * ext.lam + ref.err_estimate)
        bc = BoundaryCondition.robin(b)
        vals = [principal_eigenpair(p.operator(bc), cfg.solver).lam for p in rand_parts]
        rmin.append(min(vals) if vals else math.nan)
        if vals and min(vals) < ext.lam - 1e-9:
            bad.append(b)
    return FKReport(
        domain, ball, float(tau), mesh.h, [float(b) for b in betas],
        lmin, lref, bound, rmin, bad, assert_beta_min,
    )


def small_beta_study(domain: DomainSpec, tau: float, h: float, betas=None) -> FKReport:
    """Margins at small beta with error bounds; records data without asserting a sign."""
    betas = betas if betas is not None else tuple(float(b) for b in np.logspace(-3, 0, 7))
    return faber_krahn(domain, tau, betas, h, assert_beta_min=math.inf)


# ---------------------------------------------------------------------------
# mesh convergence
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class ConvergenceTable:
    domain: DomainSpec
    drift: str
    bc: str
    h_list: list
    mesh_sizes: list
    lambdas: list
    orders: list = field(default_factory=list)
    min_order: float = 1.8

    @property
    def order(self) -> float:
        """Fitted order from the finest three resolutions (measured mesh sizes)."""
        return self.orders[-1]

    @property
    def extrapolated(self) -> float:
        """Richardson extrapolation of the two finest values assuming second order."""
        r = self.mesh_sizes[-2] / self.mesh_sizes[-1]
        if r <= 1:
            return math.nan
        return self.lambdas[-1] + (self.lambdas[-1] - self.lambdas[-2]) / (r**2 - 1)

    @property
    def passed(self) -> bool:
        return bool(self.order >= self.min_order)  # False for nan

    def to_csv(self) -> str:
        lines = ["h,mesh_size,lambda"]
        for h, hm, lam in zip(self.h_list, self.mesh_sizes, self.lambdas):
            lines.append(f"{_fmt(h)},{_fmt(hm)},{_fmt(lam)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return _dump(
            {
                "kind": "convergence",
                "domain": str(self.domain),
                "drift": self.drift,
                "bc": self.bc,
                "rows": [
                    {"h": h, "mesh_size": hm, "lambda": lam}
                    for h, hm, lam in zip(self.h_list, self.mesh_sizes, self.lambdas)
                ],
                "orders": self.orders,
                "order": self.order,
                "extrapolated": self.extrapolated,
                "passed": self.passed,
            }
        )


def _fit_order(h, lam) -> float:
    """Order p with (lam0 - lam1)/(lam1 - lam2) = (h0^p - h1^p)/(h1^p - h2^p)."""
    d1, d2 = lam[0] - lam[1], lam[1] - lam[2]
    if d2 == 0 or d1 / d2 <= 0:
        return math.nan

    def f(p):
        return (h[0] ** p - h[1] ** p) / (h[1] ** p - h[2] ** p) - d1 / d2

    try:
        return float(brentq(f, 0.05, 20.0, xtol=1e-12))
    except ValueError:
        return math.nan


def mesh_convergence(
    domain: DomainSpec, drift_spec: DriftSpec, bc: BoundaryCondition, h_list
) -> ConvergenceTable:
    """Eigenvalue under uniform refinement with fitted orders from successive differences.

    Orders are fitted against the measured mesh sizes, so refinement ratios
    need not be exactly 2.
    """
    h_list = [float(h) for h in h_list]
    if len(h_list) < 3 or any(b >= a for a, b in zip(h_list, h_list[1:])):
        raise ValueError("h_list must be strictly decreasing with at least 3 entries")
    lams, sizes = [], []
    for h in h_list:
        mesh = triangulate(domain, h)
        parts = assemble_parts(mesh, drift_spec.build(mesh))
        lams.append(principal_eigenpair(parts.operator(bc)).lam)
        sizes.append(mesh.h)
    orders = [_fit_order(sizes[i : i + 3], lams[i : i + 3]) for i in range(len(h_list) - 2)]
    return ConvergenceTable(domain, str(drift_spec), str(bc), h_list, sizes, lams, orders)
