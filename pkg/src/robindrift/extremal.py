"""
Extremal drifts in a fixed domain.

Among drifts with ``|v| <= tau`` the principal Robin eigenvalue is minimized by
the field pointing against the eigenfunction gradient and maximized by the
field along it. Both are computed by fixed-point iteration

    v_{k+1} = -s τ ∇φ_k / |∇φ_k|      (s = +1 minimize, -1 maximize)

on the per-element gradients of the P1 eigenfunction, with v = 0 where the
gradient is below ``eta = 1e-8 * max |∇φ_k|``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .assembly import BoundaryCondition, assemble_parts
from .eigensolver import EigenResult, SolverConfig, principal_eigenpair
from .geometry import DriftField, Mesh, random_drift, zero_drift

_SIGN = {"minimize": 1, "maximize": -1}


class ExtremalError(RuntimeError):
    """Fixed-point iteration failed; carries the lambda trace."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = list(trace)


@dataclass(frozen=True)
class ExtremalConfig:
    lambda_tol: float = 1e-9  # relative to lambda
    opt_tol: float = 1e-6
    max_outer: int = 100
    eta_rel: float = 1e-8
    solver: SolverConfig = field(default_factory=SolverConfig)


@dataclass(frozen=True, eq=False)
class ExtremalResult:
    sense: str
    tau: float
    beta: float
    drift: DriftField
    eigen: EigenResult
    optimality_residual: float
    trace: list
    converged: bool
    small_gradient_fraction: float
    damped: bool = False

    @property
    def lam(self) -> float:
        return self.eigen.lam

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def to_dict(self) -> dict:
        return {
            "sense": self.sense,
            "tau": self.tau,
            "beta": self.beta,
            "lambda": self.lam,
            "optimality_residual": self.optimality_residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "trace": list(self.trace),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def element_gradients(mesh: Mesh, phi_nodal: np.ndarray) -> np.ndarray:
    """Constant gradient of the P1 interpolant on each element, shape (E, d)."""
    return np.einsum("ej,ejd->ed", phi_nodal[mesh.elements], mesh.basis_gradients)


def _check_sense(sense: str) -> int:
    if sense not in _SIGN:
        raise ValueError(f"sense must be 'minimize' or 'maximize', got {sense!r}")
    return _SIGN[sense]


def optimality_residual(
    mesh: Mesh, drift: DriftField, eigen: EigenResult, tau: float, sense: str
) -> float:
    """Area-weighted defect of ``v·∇φ = -s τ |∇φ|`` relative to ``∫ τ |∇φ|``.

    Zero when the identity holds on every element; 0 by convention for tau = 0.
    """
    s = _check_sense(sense)
    if tau == 0:
        return 0.0
    g = element_gradients(mesh, eigen.phi)
    gn = np.linalg.norm(g, axis=1)
    area = mesh.element_measures
    num = np.sum(area * np.abs(np.einsum("ed,ed->e", drift.values, g) + s * tau * gn))
    den = np.sum(area * tau * gn)
    return float(num / den) if den > 0 else 0.0


def _update(g: np.ndarray, tau: float, s: int, eta_rel: float) -> tuple[np.ndarray, np.ndarray]:
    gn = np.linalg.norm(g, axis=1)
    eta = eta_rel * gn.max() if gn.size else 0.0
    big = gn >= eta if eta > 0 else np.zeros_like(gn, dtype=bool)
    v = np.zeros_like(g)
    v[big] = -s * tau * g[big] / gn[big, None]
    return v, big


def _renormalize(v: np.ndarray, tau: float) -> np.ndarray:
    n = np.linalg.norm(v, axis=1)
    out = np.zeros_like(v)
    nz = n > 1e-14 * max(tau, 1.0)
    out[nz] = tau * v[nz] / n[nz, None]
    return out


def extremal_drift(
    mesh: Mesh,
    tau: float,
    beta: float,
    sense: str = "minimize",
    cfg: ExtremalConfig | None = None,
    initial: DriftField | None = None,
) -> ExtremalResult:
    """Minimizing or maximizing drift of the principal Robin eigenvalue.

    Starts from ``initial`` (default v = 0). The iteration is undamped until
    the lambda trace moves in the wrong direction, after which successive
    drifts are averaged and renormalized to magnitude ``tau``.

    Raises
    ------
    ExtremalError
        If ``cfg.max_outer`` outer iterations pass without convergence.
    """
    s = _check_sense(sense)
    cfg = cfg or ExtremalConfig()
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    bc = BoundaryCondition.robin(beta)
    drift = initial if initial is not None else zero_drift(mesh)
    if tau == 0:
        drift = zero_drift(mesh)
    if drift.values.shape != (mesh.n_elements, mesh.dim):
        raise ValueError("initial drift does not match the mesh")

    parts = assemble_parts(mesh, drift)
    eig = principal_eigenpair(parts.operator(bc), cfg.solver)
    trace = [eig.lam]
    if tau == 0:
        return ExtremalResult(sense, tau, beta, drift, eig, 0.0, trace, True, 0.0)

    damped = False
    for _ in range(cfg.max_outer - 1):
        g = element_gradients(mesh, eig.phi)
        v_new, _ = _update(g, tau, s, cfg.eta_rel)
        if damped:
            v_new = _renormalize(0.5 * (drift.values + v_new), tau)
        drift = DriftField(v_new, tau)
        parts = parts.with_drift(drift)
        eig = principal_eigenpair(parts.operator(bc), cfg.solver)
        step = eig.lam - trace[-1]
        trace.append(eig.lam)
        # the objective should decrease (minimize) or increase (maximize)
        if not damped and s * step > 1e-9 * abs(eig.lam):
            damped = True
        opt = optimality_residual(mesh, drift, eig, tau, sense)
        if abs(step) < cfg.lambda_tol * abs(eig.lam) and opt < cfg.opt_tol:
            return _result(mesh, sense, tau, beta, drift, eig, opt, trace, True, cfg, damped)
    raise ExtremalError(
        f"extremal iteration did not converge in {cfg.max_outer} outer iterations", trace
    )


def _result(mesh, sense, tau, beta, drift, eig, opt, trace, converged, cfg, damped):
    gn = np.linalg.norm(element_gradients(mesh, eig.phi), axis=1)
    small = float(np.mean(gn < cfg.eta_rel * gn.max()))
    return ExtremalResult(sense, tau, beta, drift, eig, opt, trace, converged, small, damped)


def radial_alignment(mesh: Mesh, drift: DriftField, r_min: float = 0.1) -> float:
    """Mean cosine between drift and x/|x| over elements with centroid radius > r_min."""
    c = mesh.centroids
    r = np.linalg.norm(c, axis=1)
    sel = r > r_min
    vn = np.linalg.norm(drift.values[sel], axis=1)
    ok = vn > 0
    cos = np.einsum("ed,ed->e", drift.values[sel][ok], c[sel][ok]) / (vn[ok] * r[sel][ok])
    return float(np.sum(cos) / sel.sum())


@dataclass(frozen=True, eq=False)
class SandwichReport:
    lower: float
    upper: float
    lambdas: list
    violations: list  # indices of offending random drifts

    @property
    def passed(self) -> bool:
        return not self.violations


def sandwich_check(
    mesh: Mesh,
    tau: float,
    beta: float,
    n_random: int = 20,
    seed: int = 0,
    cfg: ExtremalConfig | None = None,
) -> SandwichReport:
    """Check ``lower - 1e-9 <= lambda(v) <= upper + 1e-9`` for seeded random drifts."""
    if n_random < 1:
        raise ValueError("n_random must be at least 1")
    cfg = cfg or ExtremalConfig()
    lo = extremal_drift(mesh, tau, beta, "minimize", cfg).lam
    hi = extremal_drift(mesh, tau, beta, "maximize", cfg).lam
    bc = BoundaryCondition.robin(beta)
    base = assemble_parts(mesh, zero_drift(mesh))
    lams, bad = [], []
    seeds = np.random.SeedSequence(seed).generate_state(n_random)
    for i, sd in enumerate(seeds):
        v = random_drift(mesh, tau, int(sd))
        lam = principal_eigenpair(base.with_drift(v).operator(bc), cfg.solver).lam
        lams.append(lam)
        if not (lo - 1e-9 <= lam <= hi + 1e-9):
            bad.append(i)
    return SandwichReport(lo, hi, lams, bad)


def uniqueness_probe(mesh: Mesh, tau: float, beta: float, sense: str = "minimize", seed: int = 0,
                     cfg: ExtremalConfig | None = None):
    """Run the iteration from v0 = 0 and from a random admissible start.

    Returns ``(result_zero, result_random, l2_distance_of_drifts)``.
    """
    a = extremal_drift(mesh, tau, beta, sense, cfg)
    b = extremal_drift(mesh, tau, beta, sense, cfg, initial=random_drift(mesh, tau, seed))
    diff = a.drift.values - b.drift.values
    dist = math.sqrt(float(np.sum(mesh.element_measures * np.sum(diff**2, axis=1))))
    return a, b, dist
