"""Command-line driver.

Verbs: run, reference, compare, list-cases, convergence.
Exit codes: 0 ok, 1 usage error, 2 numerical failure, 3 tolerance gate
failed.  EULER_BENCH_THREADS caps the numeric-library thread pools.
"""

from __future__ import annotations

import argparse
import os
import sys

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_TOLERANCE = 0, 1, 2, 3


def _apply_thread_cap():
    cap = os.environ.get("EULER_BENCH_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
            os.environ.setdefault(var, cap)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_mesh(text: str) -> int:
    """Accept '400' (cells) or '1/400' (spacing on a unit extent)."""
    if "/" in text:
        num, _, den = text.partition("/")
        return round(float(den) / float(num))
    return int(text)


def _parse_lambda(text: str):
    """WENO-Z+ lambda rule: 'dx^<p>' or a number."""
    if text.startswith("dx^"):
        return ("mesh", float(text[3:]))
    return ("const", float(text))


def _load_config_file(path: str) -> dict:
    """Flat key-value config: one `key = value` per line, '#' comments."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _add_common_case_args(p):
    p.add_argument("--case", required=True, help="case identifier (see list-cases)")
    p.add_argument("--cells", type=int, help="override cell count (nx; ny follows)")
    p.add_argument("--mesh", help="override spacing, e.g. 1/400 (unit-extent reciprocal)")


def _build_parser():
    top = _Parser(prog="euler-bench",
                  description="Structured-grid gas-kinetic Euler benchmark suite")
    sub = top.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", help="run a benchmark case")
    _add_common_case_args(run)
    run.add_argument("--config", help="flat key=value config file (flags override)")
    run.add_argument("--weno", choices=["js", "z", "z+"], default="z")
    run.add_argument("--lambda", dest="lam", default="dx^0.75",
                     help="WENO-Z+ amplification: dx^<p> or a constant")
    run.add_argument("--characteristic", action="store_true",
                     help="reconstruct in local characteristic variables")
    run.add_argument("--cfl", type=float)
    run.add_argument("--t-end", type=float)
    run.add_argument("--tau-eps", type=float, help="collision-time base fraction")
    run.add_argument("--tau-c", type=float, help="collision-time jump coefficient")
    run.add_argument("--output-times", help="comma-separated snapshot times")
    run.add_argument("--out", default=None, help="output directory (default out/<case>)")
    run.add_argument("--format", choices=["csv", "bin"], default=None)
    run.add_argument("--figures", action="store_true",
                     help="render density figures next to the delimited output")

    ref = sub.add_parser("reference", help="emit a closed-form reference field")
    _add_common_case_args(ref)
    ref.add_argument("--t", type=float, help="evaluation time (default: case t_end)")
    ref.add_argument("--out", default=None, help="output file (.csv or .bin)")

    cmp_ = sub.add_parser("compare", help="error norms between two snapshots")
    cmp_.add_argument("file_a")
    cmp_.add_argument("file_b")
    cmp_.add_argument("--tol", type=float, help="gate: fail (exit 3) if the "
                      "checked component's L1 difference exceeds this")
    cmp_.add_argument("--component", default="rho", choices=["rho", "u", "v", "p"])

    sub.add_parser("list-cases", help="list case identifiers")

    conv = sub.add_parser("convergence", help="mesh- or dt-refinement study")
    _add_common_case_args(conv)
    conv.add_argument("--meshes", default="32,64,128",
                      help="comma-separated cell counts (spatial mode)")
    conv.add_argument("--mode", choices=["spatial", "temporal"], default="spatial")
    conv.add_argument("--levels", type=int, default=4,
                      help="number of dt halvings (temporal mode)")
    conv.add_argument("--weno", choices=["js", "z", "z+"], default="z")
    return top


def _resolve_case(args):
    from .cases import get_case

    case = get_case(args.case)
    if getattr(args, "cells", None):
        case = case.with_mesh(args.cells)
    elif getattr(args, "mesh", None):
        n = _parse_mesh(args.mesh)
        if case.is_1d:
            n = round(n * (case.xlim[1] - case.xlim[0]))
            case = case.with_mesh(n, 1)
        else:
            nx = round(n * (case.xlim[1] - case.xlim[0]))
            ny = round(n * (case.ylim[1] - case.ylim[0]))
            case = case.with_mesh(nx, ny)
    return case


def _cmd_run(args) -> int:
    from dataclasses import replace

    from .cases import get_case
    from .gks import CollisionTimeModel
    from .runner import run_case, build_grid
    from .state import AdmissibilityError
    from .weno import WenoConfig

    if args.config:
        file_vals = _load_config_file(args.config)
        coerce = {"cells": int, "cfl": float, "t_end": float,
                  "tau_eps": float, "tau_c": float,
                  "characteristic": lambda v: v.lower() in ("1", "true", "yes"),
                  "figures": lambda v: v.lower() in ("1", "true", "yes")}
        for key, val in file_vals.items():
            if key == "case" and args.case is None:
                args.case = val
            elif hasattr(args, key) and getattr(args, key) in (None, False):
                setattr(args, key, coerce.get(key, str)(val))

    case = _resolve_case(args)
    if args.cfl is not None:
        case = replace(case, cfl=args.cfl)
    if args.t_end is not None:
        case = replace(case, t_end=args.t_end)
    if args.tau_eps is not None or args.tau_c is not None:
        tm = case.tau_model
        case = replace(case, tau_model=CollisionTimeModel(
            eps_base=tm.eps_base if args.tau_eps is None else args.tau_eps,
            c_jump=tm.c_jump if args.tau_c is None else args.tau_c))

    kind, value = _parse_lambda(args.lam)
    cfg = WenoConfig(args.weno, characteristic=args.characteristic)
    grid = build_grid(case)
    if kind == "mesh":
        cfg = cfg.with_mesh(min(grid.dx, grid.dy), lam_exponent=value)
    else:
        cfg = WenoConfig(args.weno, lam=value, characteristic=args.characteristic)

    times = None
    if args.output_times:
        times = [float(v) for v in args.output_times.split(",")]
    outdir = args.out or os.path.join("out", case.name.replace(":", "_"))

    try:
        result = run_case(case, outdir, weno=cfg, output_times=times,
                          snapshot_format=args.format or "csv", figures=args.figures)
    except AdmissibilityError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    m = result.manifest
    print(f"{case.name}: {m['steps']} steps to t={m['t_reached']:g}, "
          f"{m['positivity_fallbacks']} positivity fallbacks -> {outdir}")
    return EXIT_OK


def _cmd_reference(args) -> int:
    from .io import write_snapshot
    from .runner import reference_snapshot

    case = _resolve_case(args)
    if case.oracle is None:
        from .cases import get_case, list_case_names
        backed = [n for n in list_case_names() if get_case(n).oracle is not None]
        print(f"case {case.name} has no closed-form reference; "
              f"oracle-backed cases: {', '.join(backed)}", file=sys.stderr)
        return EXIT_USAGE
    t = args.t if args.t is not None else case.t_end
    snap = reference_snapshot(case, t)
    out = args.out or f"reference_{case.name.replace(':', '_')}_t{t:g}.csv"
    write_snapshot(out, snap)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    from .io import compare_snapshots, read_snapshot

    try:
        a = read_snapshot(args.file_a)
        b = read_snapshot(args.file_b)
        norms = compare_snapshots(a, b)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for name, vals in norms.items():
        print(f"{name}: L1={vals['l1']:.12e}  Linf={vals['linf']:.12e}")
    if args.tol is not None:
        value = norms[args.component]["l1"]
        if value > args.tol:
            print(f"tolerance gate failed: L1({args.component})={value:.6e} "
                  f"> {args.tol:.6e}", file=sys.stderr)
            return EXIT_TOLERANCE
        print(f"tolerance gate passed: L1({args.component})={value:.6e} "
              f"<= {args.tol:.6e}")
    return EXIT_OK


def _cmd_list_cases(_args) -> int:
    from .cases import get_case, list_case_names

    for name in list_case_names():
        c = get_case(name)
        dim = "1D" if c.is_1d else "2D"
        oracle = " [oracle]" if c.oracle is not None else ""
        print(f"{name:34s} {dim}  {c.nx}x{c.ny}  t_end={c.t_end:g}{oracle}")
    return EXIT_OK


def _cmd_convergence(args) -> int:
    from .runner import spatial_convergence, temporal_convergence
    from .weno import WenoConfig

    case = _resolve_case(args)
    cfg = WenoConfig(args.weno)
    if case.oracle is None and args.mode == "spatial":
        print(f"case {case.name} has no oracle", file=sys.stderr)
        return EXIT_USAGE
    if args.mode == "spatial":
        meshes = [int(v) for v in args.meshes.split(",")]
        errs, orders = spatial_convergence(case, meshes, weno=cfg)
        for n, e in zip(meshes, errs):
            print(f"n={n:5d}  L1(rho)={e:.6e}")
    else:
        mesh = args.cells or case.nx
        base = case.t_end / 8.0
        dts = [base / 2**k for k in range(args.levels)]
        errs, orders = temporal_convergence(case, mesh, dts, weno=cfg)
        for dt, e in zip(dts, errs):
            print(f"dt={dt:.6e}  L1(rho)={e:.6e}")
    print("observed orders:", ", ".join(f"{o:.2f}" for o in orders))
    return EXIT_OK


def main(argv=None) -> int:
    _apply_thread_cap()
    args = _build_parser().parse_args(argv)
    handler = {
        "run": _cmd_run,
        "reference": _cmd_reference,
        "compare": _cmd_compare,
        "list-cases": _cmd_list_cases,
        "convergence": _cmd_convergence,
    }[args.verb]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
