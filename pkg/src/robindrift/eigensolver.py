"""
Principal eigenpair of ``A x = lambda M x`` by shift-invert power iteration.

The principal eigenvalue is real, simple and the only one with a positive
eigenvector, so inverse iteration from a positive start converges to it.
Positivity of the converged vector is checked, not assumed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .assembly import OperatorPair

EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    """Iteration did not converge; carries the last residual."""

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ShiftError(RuntimeError):
    """The shifted matrix ``A - sigma M`` could not be factorized."""


class PositivityError(RuntimeError):
    """The converged principal vector is not entrywise nonnegative."""


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 500
    sigma: float | None = None


@dataclass(frozen=True, eq=False)
class EigenResult:
    """Principal eigenpair; ``phi`` lives on the operator dofs with ``max(phi) == 1``."""

    lam: float
    phi: np.ndarray
    residual: float
    iterations: int
    tol: float
    gap_estimate: float | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "lambda": self.lam,
                "residual": self.residual,
                "iterations": self.iterations,
                "phi": self.phi.tolist(),
            }
        )

    def nodal_csv(self, pair: OperatorPair) -> str:
        """Rows ``x,y,phi`` over all mesh nodes (eliminated Dirichlet nodes get 0)."""
        rows = np.zeros((pair.mesh.n_nodes, 3))
        rows[:, : pair.mesh.dim] = pair.mesh.nodes
        rows[:, 2] = pair.to_nodal(self.phi)
        lines = ["x,y,phi"]
        lines += [",".join(map(repr, row)) for row in rows.tolist()]
        return "\n".join(lines) + "\n"


def _default_shift(pair: OperatorPair) -> float:
    return -1.0 if pair.bc.kind == "neumann" else 0.0


def factorize_shifted(A, M, sigma: float):
    """Sparse LU of ``A - sigma M``; on failure retry once with a more negative shift.

    Returns the factorization and the shift actually used.
    """
    for attempt in range(2):
        try:
            lu = splu(sp.csc_matrix(A - sigma * M))
            if not np.all(np.isfinite(lu.U.diagonal())) or np.min(np.abs(lu.U.diagonal())) == 0:
                raise RuntimeError("singular factor")
            return lu, sigma
        except RuntimeError as exc:
            if attempt == 1:
                raise ShiftError(f"shift hits spectrum: cannot factorize A - {sigma:g} M") from exc
            sigma = 2 * sigma if sigma < 0 else sigma - 1.0
    raise AssertionError("unreachable")


def _residual(A, M, x):
    Ax = A @ x
    Mx = M @ x
    nMx = np.linalg.norm(Mx)
    rq = (x @ Ax) / (x @ Mx)
    # least-squares correction of the Rayleigh quotient
    lam = rq + Mx @ (Ax - rq * Mx) / nMx**2
    r = np.linalg.norm(Ax - lam * Mx) / nMx
    # rounding level of the residual itself
    floor = 8 * EPS * np.linalg.norm(abs(A) @ np.abs(x)) / nMx
    return lam, r, floor


def _power_iteration(solve, A, M, x, tol, max_iter, project=None):
    """Normalized inverse iteration; returns (lambda, x, residual, iterations, tol_used)."""
    r = np.inf
    lam = np.nan
    for it in range(1, max_iter + 1):
        y = solve(M @ x)
        if project is not None:
            y = project(y)
        k = np.argmax(np.abs(y))
        if y[k] == 0 or not np.all(np.isfinite(y)):
            raise ConvergenceError("iteration collapsed", r, it)
        x = y / y[k]
        lam, r, floor = _residual(A, M, x)
        if r < max(tol, floor):
            return lam, x, r, it, max(tol, floor)
    raise ConvergenceError(
        f"no convergence in {max_iter} iterations (residual {r:.3e})", r, max_iter
    )


def principal_eigenpair(pair: OperatorPair, cfg: SolverConfig | None = None) -> EigenResult:
    """Principal eigenpair of ``pair`` normalized by ``max(phi) = 1``.

    The accepted residual is ``max(cfg.tol, rounding floor)``; the floor is
    ``8 eps |||A| |phi|||_2 / ||M phi||_2`` and only exceeds the default
    tolerance on very fine 1D grids.

    Raises
    ------
    ConvergenceError
        When ``cfg.max_iter`` iterations do not reach the tolerance.
    ShiftError
        When ``A - sigma M`` cannot be factorized even after the retry.
    PositivityError
        When the converged vector has entries below ``-1e-12``.
    """
    cfg = cfg or SolverConfig()
    sigma = _default_shift(pair) if cfg.sigma is None else cfg.sigma
    lu, sigma = factorize_shifted(pair.A, pair.M, sigma)
    x0 = np.ones(pair.n_dofs)
    lam, x, r, its, tol_used = _power_iteration(lu.solve, pair.A, pair.M, x0, cfg.tol, cfg.max_iter)
    if x.min() < -1e-12:
        raise PositivityError(f"principal vector has negative entries (min {x.min():.3e})")
    x = np.maximum(x, 0.0)
    return EigenResult(float(lam), x, float(r), its, float(tol_used))


def spectral_gap_probe(
    pair: OperatorPair, principal: EigenResult, cfg: SolverConfig | None = None
) -> float | None:
    """Estimate ``Re(lambda_2) - lambda_1`` by inverse iteration deflated against ``phi``.

    The iterate is kept M-orthogonal to the principal vector, which leaves
    the remaining eigenvalues of the shift-inverted operator intact. Returns
    ``None`` (gap unknown) when the deflated iteration does not converge, for
    example when the second eigenvalue is a complex pair.
    """
    cfg = cfg or SolverConfig(tol=1e-8, max_iter=1000)
    sigma = _default_shift(pair) if cfg.sigma is None else cfg.sigma
    lu, sigma = factorize_shifted(pair.A, pair.M, sigma)
    phi = principal.phi
    Mphi = pair.M @ phi
    norm = phi @ Mphi

    def project(y):
        return y - phi * (Mphi @ y) / norm

    rng = np.random.default_rng(0)
    y = project(rng.standard_normal(pair.n_dofs))
    mu_prev = np.nan
    for _ in range(cfg.max_iter):
        z = project(lu.solve(pair.M @ y))
        k = np.argmax(np.abs(z))
        if z[k] == 0 or not np.all(np.isfinite(z)):
            return None
        mu = (y @ z) / (y @ y)
        resid = np.linalg.norm(z - mu * y) / np.linalg.norm(z)
        y = z / z[k]
        # nearly degenerate second eigenvalues stall the vector residual, not mu
        if abs(mu - mu_prev) < cfg.tol * abs(mu) and resid < 1e-3:
            return float(sigma + 1.0 / mu - principal.lam)
        mu_prev = mu
    return None
