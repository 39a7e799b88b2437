"""Command line interface: ``robindrift <command> [options]``.

Commands: eigen, sweep, limits, extremal, fk, radial, converge. Every command
writes ``<out>/<command>.<format>`` and exits with status 0 only if all of
its checks pass. ``--config file.json`` supplies defaults for any option
(keys are option names with dashes replaced by underscores); explicit
command-line options take precedence.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assembly import BoundaryCondition, assemble
from .eigensolver import principal_eigenpair, spectral_gap_probe
from .experiments import (
    DEFAULT_BETA_GRID,
    SCHEMA_VERSION,
    DriftSpec,
    beta_sweep,
    faber_krahn,
    limit_check,
    mesh_convergence,
)
from .extremal import extremal_drift
from .geometry import DomainSpec, triangulate
from .radial import RadialProblem, radial_principal, radial_table_csv

COMMANDS = ("eigen", "sweep", "limits", "extremal", "fk", "radial", "converge")


def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def _bc(args) -> BoundaryCondition:
    if args.bc == "robin":
        return BoundaryCondition.robin(args.beta)
    return BoundaryCondition(args.bc)


def build_parser(defaults: dict | None = None) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default option values")
    common.add_argument("--domain", default="disk(1)", help="e.g. 'disk(1)', 'ellipse(2,0.5)'")
    common.add_argument("--tau", type=float, default=0.0)
    common.add_argument("--beta", type=float, default=1.0)
    common.add_argument("--beta-grid", type=_floats, default=list(DEFAULT_BETA_GRID))
    common.add_argument("--h", type=float, default=0.05)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=".")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--drift", default="zero", help="zero | radial | inward | random:SEED")
    common.add_argument("--bc", choices=("robin", "dirichlet", "neumann"), default="robin")

    parser = argparse.ArgumentParser(prog="robindrift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eigen", parents=[common], help="one principal eigenpair")
    sub.add_parser("sweep", parents=[common], help="eigenvalue over a beta grid")
    sub.add_parser("limits", parents=[common], help="small/large beta limits")
    p = sub.add_parser("extremal", parents=[common], help="minimizing or maximizing drift")
    p.add_argument("--sense", choices=("minimize", "maximize"), default="minimize")
    p = sub.add_parser("fk", parents=[common], help="Faber-Krahn comparison with the ball")
    p.add_argument("--n-random", type=int, default=0)
    p = sub.add_parser("radial", parents=[common], help="radial ball reference values")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--n", type=int, default=4096)
    p = sub.add_parser("converge", parents=[common], help="mesh convergence study")
    p.add_argument("--h-list", type=_floats, default=[0.08, 0.04, 0.02])
    if defaults:
        for choice in sub.choices.values():
            choice.set_defaults(**defaults)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    defaults = None
    if known.config:
        raw = json.loads(Path(known.config).read_text())
        defaults = {k.replace("-", "_"): v for k, v in raw.items()}
    args = build_parser(defaults).parse_args(argv)
    for key in ("beta_grid", "h_list"):
        if hasattr(args, key):
            setattr(args, key, _floats(getattr(args, key)))
    return args


def _run(args) -> tuple[bool, str, str]:
    """Execute a command; returns (passed, file content, one-line summary)."""
    cmd = args.command
    if cmd == "radial":
        rows = []
        for b in args.beta_grid if args.bc == "robin" else [None]:
            p = RadialProblem(args.d, args.R, args.tau, args.sign, args.bc,
                              b if b is not None else 1.0, args.n)
            rows.append((p, radial_principal(p)))
        ok = all(args.sign == -1 or args.bc != "robin" or r.monotone_violation <= 1e-8
                 for _, r in rows)
        if args.format == "csv":
            text = radial_table_csv(rows)
        else:
            text = json.dumps({
                "schema_version": SCHEMA_VERSION, "kind": "radial",
                "rows": [{"d": p.d, "R": p.R, "tau": p.tau, "sign": p.sign, "bc": p.bc,
                          "beta": p.beta if p.bc == "robin" else None, "lambda": r.lam,
                          "err_estimate": r.err_estimate,
                          "monotone_violation": r.monotone_violation} for p, r in rows],
                "passed": ok}, indent=1, sort_keys=True) + "\n"
        return ok, text, f"radial: {len(rows)} values, lambda[0]={rows[0][1].lam:.10g}"

    domain = DomainSpec.parse(args.domain)
    drift_spec = DriftSpec.parse(args.drift, args.tau)

    if cmd == "eigen":
        mesh = triangulate(domain, args.h)
        pair = assemble(mesh, drift_spec.build(mesh), _bc(args))
        res = principal_eigenpair(pair)
        gap = spectral_gap_probe(pair, res)
        ok = res.residual <= res.tol
        if args.format == "csv":
            text = res.nodal_csv(pair)
        else:
            doc = json.loads(res.to_json())
            doc.update(schema_version=SCHEMA_VERSION, domain=str(domain), drift=str(drift_spec),
                       bc=str(pair.bc), h=mesh.h, gap_estimate=gap, passed=ok)
            text = json.dumps(doc, sort_keys=True) + "\n"
        return ok, text, f"eigen: lambda={res.lam:.10g} residual={res.residual:.2e}"

    if cmd == "sweep":
        table = beta_sweep(domain, drift_spec, sorted(args.beta_grid), args.h)
        text = table.to_csv() if args.format == "csv" else table.to_json()
        return table.passed, text, f"sweep: {len(table.betas)} betas, violations={table.violations}"

    if cmd == "limits":
        rep = limit_check(domain, drift_spec, args.h)
        text = rep.to_csv() if args.format == "csv" else rep.to_json()
        return rep.passed, text, f"limits: {rep.checks}"

    if cmd == "extremal":
        mesh = triangulate(domain, args.h)
        res = extremal_drift(mesh, args.tau, args.beta, args.sense)
        ok = res.converged and res.optimality_residual <= 1e-6
        if args.format == "csv":
            text = res.drift.to_csv(mesh)
        else:
            doc = {"schema_version": SCHEMA_VERSION, **res.to_dict(), "passed": ok}
            text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
        return ok, text, f"extremal: lambda={res.lam:.10g} after {res.iterations} iterations"

    if cmd == "fk":
        rep = faber_krahn(domain, args.tau, sorted(args.beta_grid), args.h,
                          n_random_drifts=args.n_random, seed=args.seed)
        text = rep.to_csv() if args.format == "csv" else rep.to_json()
        return rep.passed, text, f"fk: beta0={rep.beta0} epsilon={rep.epsilon}"

    if cmd == "converge":
        tab = mesh_convergence(domain, drift_spec, _bc(args), args.h_list)
        text = tab.to_csv() if args.format == "csv" else tab.to_json()
        return tab.passed, text, f"converge: order={tab.order:.3f} extrapolated={tab.extrapolated:.10g}"

    raise ValueError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        ok, text, summary = _run(args)
    except (ValueError, RuntimeError) as exc:
        print(f"{args.command}: error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{args.command}.{args.format}").write_text(text)
    print(("PASS " if ok else "FAIL ") + summary)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
