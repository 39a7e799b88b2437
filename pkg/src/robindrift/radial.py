"""
Radial reference solver for balls with drift ``sign * tau * e_r``.

For a radially symmetric eigenfunction on the ball of radius R in R^d the
eigenproblem reduces to

    -φ'' - ((d-1)/r) φ' + sign·τ φ' = λ φ   on (0, R),   φ'(0) = 0,

with ``φ'(R) + β φ(R) = 0`` (Robin) or ``φ(R) = 0`` (Dirichlet). It is
discretized by second-order finite differences on a uniform grid and the
eigenvalue is Richardson-extrapolated from resolutions n and 2n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .eigensolver import (
    ConvergenceError,
    SolverConfig,
    _power_iteration,
    factorize_shifted,
)


@dataclass(frozen=True)
class RadialProblem:
    d: int
    R: float
    tau: float = 0.0
    sign: int = 1
    bc: str = "robin"
    beta: float = 1.0
    n: int = 4096

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.d}")
        if not self.R > 0:
            raise ValueError(f"radius must be positive, got {self.R}")
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.bc not in ("robin", "dirichlet"):
            raise ValueError(f"unsupported boundary condition {self.bc!r}")
        if self.bc == "robin" and not self.beta > 0:
            raise ValueError("Robin parameter beta must be positive")
        if self.n < 4:
            raise ValueError("grid resolution n must be at least 4")


@dataclass(frozen=True, eq=False)
class RadialResult:
    lam: float
    err_estimate: float
    r: np.ndarray
    phi: np.ndarray
    monotone_violation: float
    lam_coarse: float
    lam_fine: float


def radial_matrix(p: RadialProblem, n: int) -> tuple[sp.csr_matrix, np.ndarray]:
    """Finite-difference matrix of the reduced operator on ``n`` cells and the grid."""
    d, R, b = p.d, p.R, p.sign * p.tau
    dr = R / n
    r = dr * np.arange(n + 1)
    rows, cols, vals = [], [], []

    def put(i, j, v):
        rows.append(i)
        cols.append(j)
        vals.append(v)

    # r = 0: (d-1)/r φ' -> (d-1) φ''(0) and φ'(0) = 0, with the even ghost φ(-dr) = φ(dr)
    put(0, 0, 2 * d / dr**2)
    put(0, 1, -2 * d / dr**2)

    i = np.arange(1, n)
    # conservative form r^(1-d) (r^(d-1) φ')' keeps the stencil an M-matrix in any dimension
    wp = ((r[i] + dr / 2) / r[i]) ** (d - 1) / dr**2
    wm = ((r[i] - dr / 2) / r[i]) ** (d - 1) / dr**2
    adv = b / (2 * dr)
    rows += list(i) * 3
    cols += list(i - 1) + list(i) + list(i + 1)
    vals += list(-wm - adv) + list(wp + wm) + list(-wp + adv)

    if p.bc == "robin":
        # ghost point φ_{n+1} = φ_{n-1} - 2 dr β φ_n
        beta = p.beta
        put(n, n - 1, -2 / dr**2)
        put(n, n, 2 / dr**2 + 2 * beta / dr + (d - 1) * beta / R - b * beta)
        size = n + 1
    else:
        size = n
    A = sp.csr_matrix((vals, (rows, cols)), shape=(n + 1, n + 1))[:size, :size]
    return A.tocsr(), r[:size]


def _solve_grid(p: RadialProblem, n: int, cfg: SolverConfig):
    A, r = radial_matrix(p, n)
    I = sp.identity(A.shape[0], format="csr")
    lu, _ = factorize_shifted(A, I, 0.0)
    lam, x, _, _, _ = _power_iteration(lu.solve, A, I, np.ones(A.shape[0]), cfg.tol, cfg.max_iter)
    return lam, r, x


def radial_principal(p: RadialProblem, cfg: SolverConfig | None = None) -> RadialResult:
    """Principal eigenvalue of the radial problem, extrapolated from n and 2n cells.

    Raises
    ------
    ConvergenceError
        If the inner eigen-iteration does not converge.
    """
    cfg = cfg or SolverConfig(tol=1e-10, max_iter=2000)
    lam_n, _, _ = _solve_grid(p, p.n, cfg)
    lam_2n, r, phi = _solve_grid(p, 2 * p.n, cfg)
    if phi.min() < -1e-12:
        raise ConvergenceError("radial principal vector is not positive")
    if p.bc == "dirichlet":
        r = np.append(r, p.R)
        phi = np.append(phi, 0.0)
    phi = np.maximum(phi, 0.0) / phi.max()
    lam = (4 * lam_2n - lam_n) / 3
    err = abs(lam_n - lam_2n) / 3
    viol = float(np.max(np.maximum(0.0, np.diff(phi)), initial=0.0))
    return RadialResult(float(lam), float(err), r, phi, viol, float(lam_n), float(lam_2n))


def transcendental_reference(R: float, beta: float, tol: float = 1e-15) -> float:
    """Smallest positive root of ``sqrt(l) tan(sqrt(l) R) = beta`` by bisection.

    This is the exact principal Robin eigenvalue of -u'' on (-R, R).
    """
    if not (R > 0 and beta > 0):
        raise ValueError("R and beta must be positive")

    def f(s):  # s = sqrt(lambda), in (0, pi/(2R))
        return s * math.sin(s * R) - beta * math.cos(s * R)

    lo, hi = 0.0, math.pi / (2 * R)
    # f(0) = -beta < 0 < f(pi/(2R)) = pi/(2R)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * hi:
            break
    s = 0.5 * (lo + hi)
    return s * s


def radial_table_csv(rows: list[tuple[RadialProblem, RadialResult]]) -> str:
    """CSV with columns ``d,R,tau,sign,bc,beta,lambda,err_estimate``."""
    lines = ["d,R,tau,sign,bc,beta,lambda,err_estimate"]
    for p, res in rows:
        beta = repr(p.beta) if p.bc == "robin" else ""
        lines.append(
            f"{p.d},{p.R!r},{p.tau!r},{p.sign},{p.bc},{beta},{res.lam!r},{res.err_estimate!r}"
        )
    return "\n".join(lines) + "\n"
