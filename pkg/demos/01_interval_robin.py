"""Robin eigenvalue on (-1, 1) three ways: P1 elements, radial finite
differences and the exact root of sqrt(l) tan(sqrt(l)) = beta."""
from robindrift import (
    BoundaryCondition,
    DomainSpec,
    RadialProblem,
    assemble,
    principal_eigenpair,
    radial_principal,
    transcendental_reference,
    triangulate,
    zero_drift,
)

mesh = triangulate(DomainSpec.interval(1), 1e-3)
print(f"{'beta':>8} {'exact':>14} {'fem':>14} {'radial fd':>14}")
for beta in (0.01, 0.1, 1.0, 10.0, 100.0):
    exact = transcendental_reference(1.0, beta)
    fem = principal_eigenpair(assemble(mesh, zero_drift(mesh), BoundaryCondition.robin(beta))).lam
    fd = radial_principal(RadialProblem(1, 1.0, beta=beta)).lam
    print(f"{beta:8g} {exact:14.10f} {fem:14.10f} {fd:14.10f}")
