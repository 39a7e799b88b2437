"""Principal eigenvalue of -Δ + v·∇ under Robin conditions and its extremal drifts."""
from .assembly import (
    BoundaryCondition,
    OperatorPair,
    apply_operator,
    assemble,
    assemble_parts,
    energy_terms,
)
from .eigensolver import (
    ConvergenceError,
    EigenResult,
    PositivityError,
    ShiftError,
    SolverConfig,
    principal_eigenpair,
    spectral_gap_probe,
)
from .experiments import (
    DriftSpec,
    FKReport,
    SweepTable,
    beta_sweep,
    faber_krahn,
    limit_check,
    mesh_convergence,
    small_beta_study,
)
from .extremal import (
    ExtremalConfig,
    ExtremalError,
    ExtremalResult,
    extremal_drift,
    optimality_residual,
    radial_alignment,
    sandwich_check,
)
from .geometry import (
    DomainSpec,
    DriftField,
    Mesh,
    MeshTooCoarseError,
    equimeasurable_ball,
    radial_drift,
    random_drift,
    triangulate,
    zero_drift,
)
from .radial import RadialProblem, RadialResult, radial_principal, transcendental_reference

__version__ = "0.1.0"
