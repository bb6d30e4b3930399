"""Command-line driver: run, verify, convergence, ledger.

Exit codes: 0 success, 1 validation failure, 2 runtime abort (NaN or lost
positivity during a run).
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import convergence as conv
from . import diagnostics, io, solver, verify
from .config import RunConfig, load

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2

OVERRIDE_FLAGS = (
    ("--problem", "problem", str),
    ("--flux", "flux", str),
    ("--source", "source", str),
    ("--glm", "glm", str),
    ("--degree", "degree", int),
    ("--tfinal", "t_final", float),
    ("--cfl", "cfl", float),
    ("--ce", "c_e", float),
    ("--mass", "mass", str),
    ("--out", "out_dir", str),
    ("--seed", "seed", int),
)


def _add_override_flags(p):
    p.add_argument("--config", help="TOML run configuration")
    for flag, _, typ in OVERRIDE_FLAGS:
        p.add_argument(flag, type=typ)
    p.add_argument("--cells", help="N or N,M")
    p.add_argument("--visc", dest="visc_mode",
                   choices=("none", "first_order", "rv"))


def _config_from_args(args):
    cfg = load(args.config) if args.config else RunConfig()
    upd = {}
    for flag, field, _ in OVERRIDE_FLAGS:
        v = getattr(args, flag.lstrip("-").replace("-", "_"), None)
        if v is not None:
            upd[field] = v
    if args.cells:
        upd["cells"] = tuple(int(c) for c in args.cells.split(","))
    if getattr(args, "visc_mode", None):
        upd["visc_mode"] = args.visc_mode
    return replace(cfg, **upd)


def _cmd_run(args):
    cfg = _config_from_args(args).resolved()
    np.random.seed(cfg.seed)
    out_dir = cfg.out_dir or "out"
    try:
        art = solver.run(replace(cfg, out_dir=out_dir),
                         log=lambda msg: print(msg, flush=True)
                         if args.verbose else None)
    except solver.SolverAbort as exc:
        print(f"runtime abort: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        # positivity loss inside assembly is a runtime abort, not bad input
        if "nonpositive density" in str(exc):
            print(f"runtime abort: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        raise
    paths = io.save_run(out_dir, art)
    print(f"run complete: t={art.t:.6g} steps={art.steps} "
          f"dofs={art.space.n_dofs}")
    for kind, path in sorted(paths.items()):
        print(f"  {kind}: {path}")
    return EXIT_OK


def _cmd_verify(args):
    rows = verify.run_suite(args.suite, samples=args.samples, seed=args.seed)
    print(verify.format_table(rows))
    bad = [r for r in rows if not r["ok"]]
    print(f"{len(rows) - len(bad)}/{len(rows)} identities behaved as expected")
    return EXIT_OK if not bad else EXIT_VALIDATION


def _cmd_convergence(args):
    cfg = _config_from_args(args)
    cfg = replace(cfg, cells=None).resolved()
    from .problems import make_problem
    prob = make_problem(cfg.problem)
    base = (prob.default_cells if not args.base_cells
            else [int(c) for c in args.base_cells.split(",")])
    ladder = [tuple(int(c) * 2**lev for c in base) for lev in range(args.levels)]
    if cfg.problem == "vortex":
        quantities = ("u", "B")

        def ref_factory(art):
            gamma = art.config.gamma

            def ref_at(pts):
                rho, u, p, B = prob.exact(pts, art.t)
                return conv.conserved_from_primitive(rho, u, p, B, gamma)
            return ref_at
    elif cfg.problem == "briowu":
        quantities = ("rho", "E", "B")
        x_ref, U_ref = conv.briowu_reference()
        ref = conv.interp_reference(x_ref, U_ref)

        def ref_factory(art):
            return ref
    else:
        print("convergence supports the vortex and briowu problems",
              file=sys.stderr)
        return EXIT_VALIDATION
    try:
        rows = conv.convergence_table(cfg, ladder, ref_factory, quantities)
    except solver.SolverAbort as exc:
        print(f"runtime abort: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    norm_keys = [(q, n) for q in quantities for n in conv.NORMS]
    hdr = f"{'dofs':>8s}" + "".join(f" {q}:{n:<3s}{'rate':>6s}"
                                    for q, n in norm_keys)
    print(hdr)
    for r in rows:
        line = f"{r['dofs']:8d}"
        for q, n in norm_keys:
            line += f" {r['errors'][q][n]:9.2e} {r['rates'][q][n]:5.2f}"
        print(line)
    return EXIT_OK


def _cmd_ledger(args):
    header, rows = diagnostics.read_ledger(args.file)
    if not rows:
        print("empty ledger", file=sys.stderr)
        return EXIT_VALIDATION
    first, last = np.asarray(rows[0]), np.asarray(rows[-1])
    print(f"{'column':>12s} {'initial':>14s} {'final':>14s} {'drift':>10s}")
    for k, name in enumerate(header):
        if name == "t":
            continue
        a, b = first[k], last[k]
        if np.isnan(a) or np.isnan(b):
            continue
        scale = max(abs(a), 1.0)
        print(f"{name:>12s} {a:14.6e} {b:14.6e} {abs(b - a) / scale:10.2e}")
    return EXIT_OK


def main(argv=None):
    parser = argparse.ArgumentParser(prog="viscmhd")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a configured benchmark run")
    _add_override_flags(p)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("verify", help="randomized invariance sweeps")
    p.add_argument("--suite", default="all", choices=verify.SUITES)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("convergence", help="run a refinement ladder")
    _add_override_flags(p)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--base-cells", help="coarsest ladder entry, N or N,M")
    p.set_defaults(fn=_cmd_convergence)

    p = sub.add_parser("ledger", help="summarize a diagnostics ledger CSV")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_ledger)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
