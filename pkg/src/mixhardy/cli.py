"""Command-line harness: reproducible sharp-constant experiments with JSON/CSV reports.

Exit status: 0 all checks pass, 1 a tolerance check failed (the report is still
written), 2 invalid configuration, 3 I/O failure.

Default quadrature tolerances can be overridden with the environment variables
MIXHARDY_REL_TOL, MIXHARDY_ABS_TOL, MIXHARDY_MAX_SUBDIVISIONS and MIXHARDY_TAIL_TOL;
explicit flags win over the environment.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import sharpness as sh
from .errors import DomainError, QuadratureError
from .quadrature import QuadratureSpec

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

CSV_COLUMNS = [
    "command", "n", "p", "q", "pbar1", "pbar2", "beta", "family_param",
    "numerical_ratio", "closed_form_constant", "lower_bound", "relative_gap", "anchor",
]

# |1/p - 1/q - β/n| below this is treated as rounding in user input and snapped
SNAP_TOL = 1e-8


def _float_list(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


# -- commands --------------------------------------------------------------------


def _hardy_cfg(args):
    return sh.HardyConfig(args.n, args.p, args.pbar1, args.pbar2)


def _hardy_constants(cfg):
    return {
        "hardy": sh.sharp_hardy_constant(cfg),
        "dual": sh.sharp_dual_constant(cfg),
        "weak": sh.sharp_weak_constant(cfg),
    }


def _check_bracket(rows, tol, failures):
    for r in rows:
        lo = -math.inf if r.lower_bound is None else r.lower_bound - tol
        if not (lo <= r.numerical_ratio <= r.closed_form_constant + tol):
            failures.append(f"{r.operator} param={r.family_param:g}: ratio {r.numerical_ratio:.12g} "
                            f"outside [{lo:.12g}, {r.closed_form_constant + tol:.12g}]")


def _check_convergence(rows, args, failures):
    fam = sorted(rows, key=lambda r: -r.family_param)
    for a, b in zip(fam, fam[1:]):
        if b.numerical_ratio < a.numerical_ratio - args.bound_tol:
            failures.append(f"ratio not increasing as eps decreases: eps={a.family_param:g} -> "
                            f"{b.family_param:g}")
    last = fam[-1]
    if last.family_param <= 1e-3 and last.relative_gap > args.gap_tol:
        failures.append(f"gap {last.relative_gap:.4g} at eps={last.family_param:g} exceeds "
                        f"{args.gap_tol:g}")


def cmd_verify_hardy(args, spec):
    cfg = _hardy_cfg(args)
    rows = sh.hardy_eps_rows(cfg, args.eps, spec)
    failures = []
    _check_bracket(rows, args.bound_tol, failures)
    _check_convergence(rows, args, failures)
    if args.random:
        extra = sh.random_bound_rows("H", cfg, args.random, args.seed, spec)
        _check_bracket(extra, args.bound_tol, failures)
        rows += extra
    return rows, {"hardy": sh.sharp_hardy_constant(cfg)}, failures


def cmd_verify_dual(args, spec):
    cfg = _hardy_cfg(args)
    rows = sh.dual_eps_rows(cfg, args.eps, spec)
    failures = []
    _check_bracket(rows, args.bound_tol, failures)
    _check_convergence(rows, args, failures)
    extra = sh.random_bound_rows("H*", cfg, args.random, args.seed, spec) if args.random else []
    _check_bracket(extra, args.bound_tol, failures)
    return rows + extra, {"dual": sh.sharp_dual_constant(cfg)}, failures


def fractional_config(n, beta, p, q, pbar, qbar):
    """Build a fractional config, deriving ``q`` when absent and snapping rounded ``p``."""
    if q is None:
        return sh.FractionalConfig.from_p_beta(n, beta, p, pbar, qbar)
    gap = 1.0 / p - 1.0 / q - beta / n
    if abs(gap) > SNAP_TOL:
        raise DomainError(f"scaling relation 1/p - 1/q = beta/n violated by {gap:.3e}")
    if gap != 0.0:
        inv_p = 1.0 / q + beta / n
        if inv_p <= 0:
            raise DomainError("scaling relation has no admissible p")
        p = 1.0 / inv_p
    return sh.FractionalConfig(n, beta, p, q, pbar, qbar)


def cmd_verify_fractional(args, spec):
    cfg = fractional_config(args.n, args.beta, args.p, args.q, args.pbar, args.qbar)
    rows = [sh.fractional_row(cfg, spec)]
    consts = {"fractional_core": sh.fractional_core_constant(cfg.p, cfg.q, cfg.n, cfg.beta),
              "fractional": sh.sharp_fractional_constant(cfg)}
    if args.dual:
        rows.append(sh.dual_fractional_row(cfg, spec))
        consts["dual_fractional"] = sh.sharp_dual_fractional_constant(cfg)
    failures = [f"{r.operator}: relative gap {r.relative_gap:.3e} exceeds {args.equal_tol:g}"
                for r in rows if abs(r.relative_gap) > args.equal_tol]
    return rows, consts, failures


def cmd_verify_weak(args, spec):
    cfg = _hardy_cfg(args)
    rows = sh.weak_rows(cfg, args.r, spec)
    failures = [f"r={r.family_param:g}: relative gap {r.relative_gap:.3e} exceeds {args.equal_tol:g}"
                for r in rows if abs(r.relative_gap) > args.equal_tol]
    return rows, {"weak": sh.sharp_weak_constant(cfg)}, failures


def cmd_check_rotation(args, spec):
    rows = sh.rotation_oracle_rows(spec, args.probes)
    failures = []
    for r in rows:
        diff = abs(r.numerical_ratio - r.closed_form_constant)
        if diff > args.oracle_tol:
            failures.append(f"{r.anchor}: direct and reduced values differ by {diff:.3e}")
    holder = sh.holder_rows(args.count, args.seed, spec)
    for r in holder:
        if r.numerical_ratio > 1.0 + args.holder_tol:
            failures.append(f"field {r.family_param:g}: averaged norm ratio {r.numerical_ratio:.12g} > 1")
    return rows + holder, {}, failures


def cmd_constants(args, spec):
    consts = _hardy_constants(_hardy_cfg(args))
    if args.beta is not None:
        fcfg = fractional_config(args.n, args.beta, args.p, args.q, args.pbar1, args.pbar2)
        consts["fractional_core"] = sh.fractional_core_constant(fcfg.p, fcfg.q, fcfg.n, fcfg.beta)
        consts["fractional"] = sh.sharp_fractional_constant(fcfg)
        consts["dual_fractional"] = sh.sharp_dual_fractional_constant(fcfg)
    for name, value in consts.items():
        print(f"{name} = {value:.17g}")
    return [], consts, []


def cmd_sweep(args, spec):
    cfgs = [sh.HardyConfig(args.n, p, args.pbar1, args.pbar2) for p in sorted(args.p_list)]
    runner = sh.hardy_eps_rows if args.operator == "H" else sh.dual_eps_rows
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(lambda c: runner(c, args.eps, spec), cfgs))
    rows, failures, consts = [], [], {}
    for cfg, part in zip(cfgs, results):
        part = sorted(part, key=lambda r: -r.family_param)
        _check_bracket(part, args.bound_tol, failures)
        rows += part
        consts[f"p={cfg.p:g}"] = part[0].closed_form_constant
    return rows, consts, failures


COMMANDS = {
    "verify-hardy": cmd_verify_hardy,
    "verify-dual": cmd_verify_dual,
    "verify-fractional": cmd_verify_fractional,
    "verify-weak": cmd_verify_weak,
    "check-rotation": cmd_check_rotation,
    "constants": cmd_constants,
    "sweep": cmd_sweep,
}


# -- parser ----------------------------------------------------------------------


def _add_common(sp):
    g = sp.add_argument_group("output and reproducibility")
    g.add_argument("--output", "-o", default=None, help="report path (default: stdout)")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--seed", type=int, default=20240601)
    q = sp.add_argument_group("quadrature (defaults from MIXHARDY_* env vars)")
    q.add_argument("--rel-tol", type=float, default=None)
    q.add_argument("--abs-tol", type=float, default=None)
    q.add_argument("--max-subdivisions", type=int, default=None)
    q.add_argument("--tail-tol", type=float, default=None)
    c = sp.add_argument_group("check tolerances")
    c.add_argument("--bound-tol", type=float, default=1e-6, help="slack on upper/lower bounds")
    c.add_argument("--gap-tol", type=float, default=0.02,
                   help="max relative gap of the smallest eps (when eps <= 1e-3)")
    c.add_argument("--equal-tol", type=float, default=None,
                   help="relative tolerance for exact attainment")
    c.add_argument("--oracle-tol", type=float, default=1e-7)
    c.add_argument("--holder-tol", type=float, default=1e-9)
    sp.add_argument("--verbose", "-v", action="store_true")


def _add_hardy_exps(sp):
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--pbar1", type=float, required=True)
    sp.add_argument("--pbar2", type=float, required=True)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mixhardy",
        description="Verify sharp Hardy-operator constants on mixed radial-angular spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verify-hardy", help="Hardy operator on the truncated power family")
    _add_hardy_exps(sp)
    sp.add_argument("--eps", type=_float_list, default=[0.5, 0.1, 0.01, 0.001])
    sp.add_argument("--random", type=int, default=0, help="also check N seeded random profiles")
    _add_common(sp)

    sp = sub.add_parser("verify-dual", help="dual operator: random bound checks and power family")
    _add_hardy_exps(sp)
    sp.add_argument("--eps", type=_float_list, default=[0.1, 0.01, 0.001])
    sp.add_argument("--random", type=int, default=30)
    _add_common(sp)

    sp = sub.add_parser("verify-fractional", help="fractional operator on its exact extremizer")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, default=None, help="derived from the scaling relation if omitted")
    sp.add_argument("--pbar", type=float, required=True)
    sp.add_argument("--qbar", type=float, required=True)
    sp.add_argument("--dual", action="store_true", help="also check the adjoint operator")
    _add_common(sp)

    sp = sub.add_parser("verify-weak", help="weak-type bound on ball indicators")
    _add_hardy_exps(sp)
    sp.add_argument("--r", type=_float_list, default=[0.5, 1.0, 4.0])
    _add_common(sp)

    sp = sub.add_parser("check-rotation", help="spherical-average reduction against direct quadrature")
    sp.add_argument("--count", type=int, default=20, help="random separable fields for the norm check")
    sp.add_argument("--probes", type=int, default=20)
    _add_common(sp)

    sp = sub.add_parser("constants", help="print the closed-form sharp constants")
    _add_hardy_exps(sp)
    sp.add_argument("--beta", type=float, default=None,
                    help="also print fractional constants (pbar1/pbar2 act as pbar/qbar)")
    sp.add_argument("--q", type=float, default=None)
    _add_common(sp)

    sp = sub.add_parser("sweep", help="Hardy or dual ratios over a grid of p and eps")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p-list", type=_float_list, required=True)
    sp.add_argument("--pbar1", type=float, required=True)
    sp.add_argument("--pbar2", type=float, required=True)
    sp.add_argument("--eps", type=_float_list, default=[0.5, 0.1, 0.01, 0.001])
    sp.add_argument("--operator", choices=("H", "H*"), default="H")
    sp.add_argument("--jobs", type=int, default=1)
    _add_common(sp)
    return parser


# -- report ----------------------------------------------------------------------


def _header(args, spec, consts):
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("output", "format", "verbose", "rel_tol", "abs_tol",
                           "max_subdivisions", "tail_tol")}
    return {
        "command": args.command,
        "parameters": params,
        "quadrature": {"rel_tol": spec.rel_tol, "abs_tol": spec.abs_tol,
                       "max_subdivisions": spec.max_subdivisions, "tail_tol": spec.tail_tol},
        "seed": args.seed,
        "constants": consts,
    }


def render(command, header, rows, fmt, failures):
    records = []
    for r in rows:
        d = r.as_dict()
        rec = {"command": command}
        rec.update({k: d.get(k) for k in CSV_COLUMNS[1:]})
        rec["pbar1"], rec["pbar2"] = d["pbar1"], d["pbar2"]
        records.append(rec)
    if fmt == "json":
        doc = {"header": header, "rows": records, "passed": not failures, "failures": failures}
        return json.dumps(_sanitize(doc), separators=(",", ":"), allow_nan=False) + "\n"
    buf = io.StringIO()
    for key, value in header.items():
        buf.write(f"# {key}: {json.dumps(value, separators=(',', ':'), default=str)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow([_fmt(rec[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _sanitize(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.equal_tol is None:
        args.equal_tol = 1e-8 if args.command == "verify-weak" else 1e-6
    try:
        spec = QuadratureSpec.from_env(
            rel_tol=args.rel_tol, abs_tol=args.abs_tol,
            max_subdivisions=args.max_subdivisions, tail_tol=args.tail_tol,
        )
        rows, consts, failures = COMMANDS[args.command](args, spec)
    except DomainError as exc:
        msg = str(exc)
        if "inf" in msg and "(1, inf)" in msg:
            msg += " (endpoint exponents 1 and inf are unsupported)"
        print(f"mixhardy: invalid configuration: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"mixhardy: quadrature failed: {exc}", file=sys.stderr)
        return EXIT_FAIL

    header = _sanitize(_header(args, spec, consts))
    text = render(args.command, header, rows, args.format, failures)
    if args.command != "constants" or args.output:
        try:
            if args.output in (None, "-"):
                sys.stdout.write(text)
            else:
                with open(args.output, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
        except OSError as exc:
            print(f"mixhardy: cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
    for msg in failures:
        print(f"FAIL {msg}", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
