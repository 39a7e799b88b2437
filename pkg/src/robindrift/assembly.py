"""
P1 finite element assembly of the drifted Laplacian -Δ + v·∇.

The bilinear form is

    a(u, w) = ∫ ∇u·∇w + ∫ (v·∇u) w + β ∮ u w

with Robin (β > 0), Neumann (β = 0) or Dirichlet (boundary dofs eliminated)
boundary conditions. The mass matrix is the consistent P1 mass matrix; the
boundary term uses the trapezoidal rule on each boundary edge.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .geometry import DriftField, Mesh


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary condition descriptor: ``robin`` (with beta), ``dirichlet`` or ``neumann``."""

    kind: str
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("robin", "dirichlet", "neumann"):
            raise ValueError(f"unknown boundary condition {self.kind!r}")
        if self.kind == "robin" and not self.beta > 0:
            raise ValueError(f"Robin parameter beta must be positive, got {self.beta}")

    @classmethod
    def robin(cls, beta: float) -> "BoundaryCondition":
        return cls("robin", float(beta))

    @classmethod
    def dirichlet(cls) -> "BoundaryCondition":
        return cls("dirichlet")

    @classmethod
    def neumann(cls) -> "BoundaryCondition":
        return cls("neumann")

    def __str__(self):
        return f"robin({self.beta:g})" if self.kind == "robin" else self.kind


@dataclass(frozen=True, eq=False)
class FormParts:
    """Separately assembled pieces of the weak form on the full nodal space.

    ``K`` stiffness, ``C`` convection, ``M`` mass, ``B`` boundary mass; the
    Robin operator is ``K + C + beta * B``.
    """

    mesh: Mesh
    K: sp.csr_matrix
    C: sp.csr_matrix
    M: sp.csr_matrix
    B: sp.csr_matrix

    def with_drift(self, drift: DriftField) -> "FormParts":
        """Same mesh and drift-independent pieces with a new convection matrix."""
        return FormParts(self.mesh, self.K, assemble_convection(self.mesh, drift), self.M, self.B)

    def operator(self, bc: BoundaryCondition) -> "OperatorPair":
        n = self.mesh.n_nodes
        if bc.kind == "dirichlet":
            dof_map = np.flatnonzero(~self.mesh.boundary_flag)
            A = (self.K + self.C)[dof_map][:, dof_map]
            M = self.M[dof_map][:, dof_map]
        else:
            dof_map = np.arange(n)
            A = self.K + self.C
            if bc.kind == "robin":
                A = A + bc.beta * self.B
            M = self.M
        return OperatorPair(sp.csr_matrix(A), sp.csr_matrix(M), bc, dof_map, self.mesh)


@dataclass(frozen=True, eq=False)
class OperatorPair:
    """Generalized eigenproblem ``A x = lambda M x`` on the dofs listed in ``dof_map``."""

    A: sp.csr_matrix
    M: sp.csr_matrix
    bc: BoundaryCondition
    dof_map: np.ndarray
    mesh: Mesh

    @property
    def n_dofs(self) -> int:
        return len(self.dof_map)

    def to_nodal(self, x: np.ndarray) -> np.ndarray:
        """Extend a dof vector to all mesh nodes (zero on eliminated Dirichlet nodes)."""
        out = np.zeros(self.mesh.n_nodes)
        out[self.dof_map] = x
        return out

    def coo_text(self, which: str = "A") -> str:
        """Coordinate-format dump ``row col value`` of ``A`` or ``M``."""
        mat = sp.coo_matrix(getattr(self, which))
        order = np.lexsort((mat.col, mat.row))
        return "".join(
            f"{r} {c} {float(v)!r}\n" for r, c, v in zip(mat.row[order], mat.col[order], mat.data[order])
        )


def _scatter(mesh: Mesh, local: np.ndarray) -> sp.csr_matrix:
    e = mesh.elements
    k = e.shape[1]
    rows = np.repeat(e, k, axis=1).ravel()
    cols = np.tile(e, (1, k)).ravel()
    n = mesh.n_nodes
    return sp.csr_matrix((local.ravel(), (rows, cols)), shape=(n, n))


def assemble_convection(mesh: Mesh, drift: DriftField) -> sp.csr_matrix:
    """Convection matrix ``C_ij = ∫ (v·∇φ_j) φ_i`` for a piecewise-constant drift."""
    v = drift.values
    if v.shape != (mesh.n_elements, mesh.dim):
        raise ValueError(
            f"drift has shape {v.shape}, mesh needs ({mesh.n_elements}, {mesh.dim})"
        )
    area = mesh.element_measures
    k = mesh.dim + 1
    # v and ∇φ_j are constant on the element and ∫ φ_i = |K|/k
    vg = np.einsum("ed,ejd->ej", v, mesh.basis_gradients)
    C_loc = (area / k)[:, None, None] * np.broadcast_to(vg[:, None, :], (len(area), k, k))
    return _scatter(mesh, C_loc)


def assemble_parts(mesh: Mesh, drift: DriftField) -> FormParts:
    """Assemble stiffness, convection, mass and boundary-mass matrices."""
    C = assemble_convection(mesh, drift)
    area = mesh.element_measures
    G = mesh.basis_gradients  # (E, k, d)
    K_loc = area[:, None, None] * np.einsum("eid,ejd->eij", G, G)
    if mesh.dim == 1:
        ref = np.array([[2.0, 1.0], [1.0, 2.0]]) / 6.0
    else:
        ref = (np.ones((3, 3)) + np.eye(3)) / 12.0
    M_loc = area[:, None, None] * ref[None]

    be = mesh.boundary_edges
    w = np.repeat(mesh.boundary_lengths / be.shape[1], be.shape[1])
    n = mesh.n_nodes
    B = sp.csr_matrix((w, (be.ravel(), be.ravel())), shape=(n, n))
    return FormParts(mesh, _scatter(mesh, K_loc), C, _scatter(mesh, M_loc), B)


def assemble(mesh: Mesh, drift: DriftField, bc: BoundaryCondition) -> OperatorPair:
    """Assemble the operator pair for the given mesh, drift and boundary condition."""
    return assemble_parts(mesh, drift).operator(bc)


def apply_operator(pair: OperatorPair, x: np.ndarray) -> np.ndarray:
    """Return ``A @ x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (pair.n_dofs,):
        raise ValueError(f"vector has shape {x.shape}, operator expects ({pair.n_dofs},)")
    return pair.A @ x


def energy_terms(mesh: Mesh, drift: DriftField, x: np.ndarray) -> dict:
    """Element-by-element evaluation of the pieces of ``a(x_h, x_h)``.

    Independent of the sparse assembly; used to audit ``x^T A x``. Returns
    ``gradient`` (∫|∇x_h|²), ``boundary`` (trapezoidal ∮x_h²), ``convection``
    (∫(v·∇x_h) x_h) and ``l2`` (∫x_h²).
    """
    x = np.asarray(x, dtype=float)
    grad = np.einsum("ej,ejd->ed", x[mesh.elements], mesh.basis_gradients)
    area = mesh.element_measures
    xe = x[mesh.elements]
    mean = xe.mean(axis=1)
    if mesh.dim == 1:
        l2 = area * (xe[:, 0] ** 2 + xe[:, 0] * xe[:, 1] + xe[:, 1] ** 2) / 3.0
    else:
        l2 = area * (np.sum(xe**2, axis=1) + np.sum(xe, axis=1) ** 2) / 12.0
    xb = x[mesh.boundary_edges]
    return {
        "gradient": float(np.sum(area * np.sum(grad**2, axis=1))),
        "boundary": float(np.sum(mesh.boundary_lengths * np.mean(xb**2, axis=1))),
        "convection": float(np.sum(area * np.einsum("ed,ed->e", drift.values, grad) * mean)),
        "l2": float(np.sum(l2)),
    }
