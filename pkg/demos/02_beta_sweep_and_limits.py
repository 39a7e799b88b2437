"""How the principal eigenvalue moves with the Robin parameter on a stadium
with a random drift: it climbs from the Neumann value 0 toward the
Dirichlet value."""
import numpy as np

from robindrift import DomainSpec, DriftSpec, beta_sweep, limit_check, triangulate

domain = DomainSpec.stadium(2, 0.5)
drift = DriftSpec("random", tau=1.0, seed=7)
mesh = triangulate(domain, 0.05)

table = beta_sweep(domain, drift, np.logspace(-3, 3, 13), 0.05, mesh=mesh)
limits = limit_check(domain, drift, 0.05, mesh=mesh)
print(table.to_csv(), end="")
print(f"Dirichlet eigenvalue: {limits.lambda_dirichlet:.6f}")
print("checks:", limits.checks)
