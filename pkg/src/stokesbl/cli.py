"""Command-line pipeline: basis, cell, corrector, wall-law, regularity, verify.

Artifacts are JSON (structured results) and CSV (grids and tables), written
atomically; every run also writes a manifest recording the input hash,
package versions, wall clock and thread settings.  Identical configuration
produces byte-identical result artifacts (the manifest carries the volatile
runtime metadata).

Exit codes: 0 success, 2 invalid configuration, 3 solver failure, 4 failed
verification.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

EXIT_BAD_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# artifact plumbing
# ---------------------------------------------------------------------------

def _out_root(path: str) -> str:
    root = os.environ.get("STOKESBL_OUTPUT_ROOT")
    if root and not os.path.isabs(path):
        return os.path.join(root, path)
    return path


def write_atomic(path: str, text: str) -> str:
    path = _out_root(path)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)
    return path


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def write_manifest(base: str, config: dict, artifacts: list[str], started: float) -> str:
    import scipy

    from . import __version__

    manifest = {
        "config": config,
        "inputs_hash": hashlib.sha256(
            json.dumps(config, sort_keys=True).encode()
        ).hexdigest(),
        "artifacts": {os.path.basename(p): file_digest(p) for p in artifacts},
        "versions": {
            "stokesbl": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": sys.version.split()[0],
        },
        "wall_clock_s": time.time() - started,
        "threads": {
            var: os.environ.get(var, "")
            for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")
        },
    }
    return write_atomic(base + ".manifest.json", dump_json(manifest))


def load_geometry(path: str):
    from .geometry import BoundaryGeometry

    with open(path) as fh:
        return BoundaryGeometry.from_json_dict(json.load(fh))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_basis(args) -> int:
    from .halfspace import stokes_basis

    if args.dim < 2:
        raise ConfigError("--dim must be >= 2")
    if args.order < 1:
        raise ConfigError("--order must be >= 1")
    basis = stokes_basis(args.order, args.dim)
    payload = {
        "dim": args.dim,
        "order": args.order,
        "count": len(basis),
        "elements": [
            {
                "tag": tag,
                "grade": grade,
                "velocity": pair.velocity.to_json_dict(),
                "pressure": pair.pressure.to_json_dict(),
            }
            for pair, tag, grade in zip(basis.elements, basis.tags, basis.grades)
        ],
    }
    out = write_atomic(args.out, dump_json(payload))
    print(f"basis: {len(basis)} elements -> {out}")
    return 0


def cmd_cell(args) -> int:
    from .cell import SolverError, solve_cell

    geometry = load_geometry(args.geometry)
    if args.l < 1 or args.i not in (1, 2):
        raise ConfigError("need --l >= 1 and --i in {1, 2}")
    if args.height < 1:
        raise ConfigError("--height must be >= 1")
    try:
        sol = solve_cell(geometry, l=args.l, comp=args.i,
                         height=args.height, nx=args.nx, ny=args.ny)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    grid = sol.grid
    lines = ["x,y,u1,u2,p"]
    p_nodes = sol.pressure_nodes()
    for i in range(grid.nx):
        for j in range(grid.ny + 1):
            lines.append(
                f"{grid.x[i]!r},{grid.y_nodes[i, j]!r},{sol.u[0][i, j]!r},"
                f"{sol.u[1][i, j]!r},{p_nodes[i, j]!r}"
            )
    csv_path = write_atomic(args.out_prefix + ".csv", "\n".join(lines) + "\n")
    # wall-clock stays out of the result payload so artifacts are
    # byte-reproducible; the manifest records it
    summary = {
        "tail": [float(v) for v in sol.tail],
        "trace_modes": {
            str(k): [[float(v.real), float(v.imag)] for v in sol.trace_modes[k]]
            for k in sorted(sol.trace_modes)
        },
        "residuals": sol.diagnostics,
        "resolution": [grid.nx, grid.ny],
        "geometry_hash": geometry.digest(),
    }
    json_path = write_atomic(args.out_prefix + ".json", dump_json(summary))
    print(f"cell: tail = ({sol.tail[0]:.6g}, {sol.tail[1]:.6g}) -> {json_path}, {csv_path}")
    return 0


def cmd_corrector(args) -> int:
    from .cell import SolverError
    from .recursion import CorrectorStack, stack_from_json, stack_to_json

    geometry = load_geometry(args.geometry)
    alpha = [int(v) for v in args.alpha.split(",") if v != ""]
    if len(alpha) != 1:
        raise ConfigError("d = 2 numerics: --alpha takes one entry")
    if alpha[0] < 0 or args.l < 1 or args.i not in (1, 2):
        raise ConfigError("need alpha >= 0, --l >= 1 and --i in {1, 2}")
    if args.order_cap and alpha[0] + args.l > args.order_cap:
        raise ConfigError("|alpha| + l exceeds --order-cap")
    try:
        out_path = _out_root(args.out)
        if os.path.exists(out_path):
            # extend an existing stack so successive runs share one artifact
            with open(out_path) as fh:
                stack = stack_from_json(json.load(fh))
            if stack.geometry.digest() != geometry.digest():
                raise ConfigError("existing stack was built for another geometry")
            if (stack.grid.nx, stack.grid.ny) != (args.nx, args.ny) \
                    or stack.height != args.height:
                raise ConfigError("existing stack has a different resolution")
        else:
            stack = CorrectorStack(geometry, height=args.height, nx=args.nx, ny=args.ny)
        for beta in range(alpha[0] + 1):
            stack.level(beta, args.l, args.i)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    out = write_atomic(args.out, dump_json(stack_to_json(stack)))
    tail = stack.level(alpha[0], args.l, args.i).const
    print(f"corrector: {len(stack.levels)} levels, top tail = "
          f"({tail[0]:.6g}, {tail[1]:.6g}) -> {out}")
    return 0


def cmd_wall_law(args) -> int:
    from .cell import SolverError
    from .recursion import stack_from_json
    from .walllaw import phi_table

    with open(args.stack) as fh:
        stack = stack_from_json(json.load(fh))
    if args.order < 1:
        raise ConfigError("--order must be >= 1")
    try:
        table = phi_table(stack, args.order)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    out = write_atomic(args.out, dump_json(table.to_json_dict()))
    lines = ["order,alpha,l,row,col,x_power,value"]
    for (alpha, l), mat in sorted(table.phi.items()):
        for r in range(2):
            for c in range(2):
                for p, v in enumerate(mat[r, c]):
                    lines.append(f"{alpha + l},{alpha},{l},{r + 1},{c + 1},{p},{v!r}")
    csv_path = write_atomic(os.path.splitext(args.out)[0] + ".csv",
                            "\n".join(lines) + "\n")
    print(f"wall-law: slip length = {table.slip_length:.6g} -> {out}, {csv_path}")
    return 0


def cmd_regularity(args) -> int:
    from .cell import SolverError, StripGrid
    from .recursion import CorrectorStack
    from .regularity import (
        RegularityWorkspace,
        build_outer_solution,
        decay_experiment,
        pointwise_check,
        projected_fit,
        solution_grad_sampler,
    )

    geometry = load_geometry(args.geometry)
    if args.order < 1:
        raise ConfigError("--order must be >= 1")
    if args.R < 32 * np.pi:
        raise ConfigError("--R must be >= 32*pi so dyadic windows span a factor 16")
    try:
        stack = CorrectorStack(geometry, nx=args.nx, ny=args.stack_ny)
        grid = StripGrid(geometry, height=args.R, nx=args.nx, ny=args.ny,
                         stretch=args.stretch)
        lift_ws = RegularityWorkspace(stack, max(args.order + 1, 3), grid)
        ws = RegularityWorkspace(stack, args.order, grid)
        results = {}
        for kind in ("shear", "quadratic", "random"):
            solution = build_outer_solution(lift_ws, kind, seed=args.seed)
            rep = decay_experiment(ws, solution)
            coeffs = projected_fit(ws, lift_ws, solution_grad_sampler(solution),
                                   4 * np.pi)
            ptw = pointwise_check(ws, solution, coeffs, args.order)
            results[kind] = {
                "radii": rep.radii,
                "H": rep.H_values,
                "fitted_exponent": rep.fitted_exponent,
                "floored": rep.floored,
                "grad_norm": rep.grad_norm,
                "pressure_residuals": rep.meta.get("pressure"),
                "pointwise": ptw,
            }
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    payload = {
        "order": args.order,
        "R": args.R,
        "seed": args.seed,
        "geometry_hash": geometry.digest(),
        "data": results,
    }
    out = write_atomic(args.out, dump_json(payload))
    lines = ["data,r,H,fitted_exponent"]
    for kind, res in results.items():
        for r, h in zip(res["radii"], res["H"]):
            lines.append(f"{kind},{r!r},{h!r},{res['fitted_exponent']!r}")
    csv_path = write_atomic(os.path.splitext(args.out)[0] + ".csv",
                            "\n".join(lines) + "\n")
    for kind, res in results.items():
        print(f"regularity[{kind}]: exponent = {res['fitted_exponent']}"
              f"{' (in-space)' if res['floored'] else ''}")
    print(f"-> {out}, {csv_path}")
    return 0


def cmd_verify(args) -> int:
    checks = []
    if args.suite in ("symbolic", "all"):
        checks.extend(_verify_symbolic())
    if args.suite in ("numeric", "all"):
        checks.extend(_verify_numeric())
    failed = [name for name, ok in checks if not ok]
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    if failed:
        print(f"{len(failed)} verification check(s) failed", file=sys.stderr)
        return EXIT_VERIFY
    return 0


def _verify_symbolic() -> list[tuple[str, bool]]:
    import random
    from fractions import Fraction

    from .halfspace import (
        delta_D_inv,
        dim_stokes_space,
        stokes_basis,
        verify_stokes_pair,
    )
    from .modes import ModeData, SqrtExt, residual_check, solve_mode
    from .polynomials import ExactPolynomial

    rng = random.Random(0)
    out = []

    ok = True
    for _ in range(60):
        d = rng.choice([2, 3])
        terms = {}
        for _ in range(6):
            exp = [0] * d
            for _ in range(rng.randrange(9)):
                exp[rng.randrange(d)] += 1
            terms[tuple(exp)] = Fraction(rng.randrange(-9, 10), rng.randrange(1, 5))
        f = ExactPolynomial(d, terms)
        u = delta_D_inv(f)
        ok &= u.laplacian() == f and u.trace_at_zero().is_zero()
    out.append(("delta_D_inv contract (random polynomials)", ok))

    ok = True
    for d in (2, 3):
        for m in (1, 2, 3, 4):
            basis = stokes_basis(m, d)
            ok &= len(basis) == dim_stokes_space(m, d)
            ok &= basis.certify_rank()
            ok &= all(verify_stokes_pair(p).ok for p in basis.elements)
    out.append(("Stokes basis dimensions and exact residuals", ok))

    ok = True
    for _ in range(30):
        d = rng.choice([2, 3])
        k = tuple(rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(d - 1))
        F = [[SqrtExt.of(Fraction(rng.randrange(-4, 5), rng.randrange(1, 4)),
                         Fraction(rng.randrange(-4, 5), rng.randrange(1, 4)))
              for _ in range(rng.randrange(1, 5))] for _ in range(d)]
        b = [SqrtExt.of(rng.randrange(-3, 4), rng.randrange(-3, 4)) for _ in range(d)]
        data = ModeData(k, F, b)
        ok &= residual_check(k, F, solve_mode(data), b).ok
    out.append(("mode residual oracle (random sources)", ok))
    return out


def _verify_numeric() -> list[tuple[str, bool]]:
    from .cell import solve_cell
    from .geometry import BoundaryGeometry

    out = []
    flat = solve_cell(BoundaryGeometry.flat(), l=1, comp=1, nx=16, ny=20)
    out.append(("flat-wall annihilation", float(np.abs(flat.u).max()) < 1e-10))
    shifted = solve_cell(BoundaryGeometry.flat(0.25), l=1, comp=1, nx=16, ny=20)
    out.append((
        "shifted-flat wall exact tail",
        abs(shifted.tail[0] - 0.25) < 1e-10 and abs(shifted.tail[1]) < 1e-10,
    ))
    rough = solve_cell(BoundaryGeometry.from_fourier({0: -0.5, 1: -0.25}),
                       l=1, comp=1, nx=24, ny=32)
    out.append(("positive slip length on cosine wall", rough.tail[0] > 0))
    out.append(("divergence residual at solver precision",
                rough.diagnostics["divergence_residual"] < 1e-9))
    return out


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stokesbl",
        description="Boundary-layer correctors, wall laws and regularity "
                    "diagnostics for Stokes flow over rough periodic walls.",
    )
    parser.add_argument("--threads", type=int, default=None,
                        help="cap BLAS/OpenMP threads (recorded in the manifest)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="exact Stokes polynomial basis")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--out", default="basis.json")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("cell", help="solve one cell corrector problem")
    p.add_argument("--geometry", required=True)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--height", type=float, default=3.0)
    p.add_argument("--nx", type=int, default=32)
    p.add_argument("--ny", type=int, default=40)
    p.add_argument("--out-prefix", default="cell")
    p.set_defaults(func=cmd_cell)

    p = sub.add_parser("corrector", help="build the corrector stack")
    p.add_argument("--geometry", required=True)
    p.add_argument("--alpha", default="0", help="horizontal multi-index (one entry for d=2)")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--order-cap", type=int, default=0)
    p.add_argument("--height", type=float, default=3.0)
    p.add_argument("--nx", type=int, default=32)
    p.add_argument("--ny", type=int, default=40)
    p.add_argument("--out", default="stack.json")
    p.set_defaults(func=cmd_corrector)

    p = sub.add_parser("wall-law", help="wall-law coefficient table from a stack")
    p.add_argument("--stack", required=True)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--out", default="walllaw.json")
    p.set_defaults(func=cmd_wall_law)

    p = sub.add_parser("regularity", help="excess decay and pointwise checks")
    p.add_argument("--geometry", required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--R", type=float, default=64 * np.pi)
    p.add_argument("--nx", type=int, default=24)
    p.add_argument("--ny", type=int, default=320)
    p.add_argument("--stack-ny", type=int, default=32)
    p.add_argument("--stretch", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="report.json")
    p.set_defaults(func=cmd_regularity)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=("symbolic", "numeric", "all"), default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    started = time.time()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    config = {k: v for k, v in vars(args).items() if k != "func" and not callable(v)}
    try:
        code = args.func(args)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except FileNotFoundError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    if code == 0 and args.command != "verify":
        base = None
        for attr in ("out", "out_prefix"):
            if hasattr(args, attr):
                base = _out_root(getattr(args, attr))
                break
        artifacts = []
        root = os.path.splitext(base)[0]
        for cand in (base, root + ".json", root + ".csv"):
            if cand and os.path.exists(cand) and not cand.endswith(".manifest.json"):
                artifacts.append(cand)
        write_manifest(root, config, sorted(set(artifacts)), started)
    return code


if __name__ == "__main__":
    sys.exit(main())
