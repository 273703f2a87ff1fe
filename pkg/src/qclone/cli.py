"""Command-line interface: optimize, sweep, oracle, verify.

All numeric output is formatted with 12 significant digits and is a pure
function of the arguments (plus the oracle seed), so repeated runs are
byte-identical.  Usage problems exit with status 64; verification failures
with 1; oracle disagreement beyond tolerance with 2; an infeasible oracle
with 3.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from .family import build_family, denseness, shannon_entropy
from .forms import continuum_form, discrete_form
from .oracle import (
    OracleInfeasibleError,
    constraint_residuals,
    oracle_optimize,
    symmetry_report,
)
from .reduced import InternalConsistencyError, Optimum, optimize_reduced

USAGE_EXIT = 64
CSV_HEADER = "phi,n_states,fidelity,eta,xi,c,c_sign"
_ORACLE_TOL = 1e-4


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit with status 64."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    """12 significant digits, trailing zeros kept."""
    return f"{x:#.12g}"


def _json_value(x: float):
    if math.isinf(x):
        return "inf"
    return float(f"{x:.12g}")


def _phi_arg(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else float(value)


def _parse_n_list(text: str) -> list[int]:
    try:
        values = sorted({int(part) for part in text.split(",") if part != ""})
    except ValueError as exc:
        raise ValueError(f"bad --n-states list {text!r}") from exc
    if not values or any(v < 2 for v in values):
        raise ValueError("--n-states needs integers >= 2")
    return values


def _optimize_single(n_states: int, phi: float) -> Optimum:
    fam = build_family(n_states, phi)
    form = None if phi == 0.0 else discrete_form(fam)
    return optimize_reduced(form, fam)


def _report_lines(items: list[tuple[str, object]]) -> str:
    return "\n".join(
        f"{key} {value if isinstance(value, str) else _fmt(value) if isinstance(value, float) else value}"
        for key, value in items
    )


def cmd_optimize(args: argparse.Namespace) -> int:
    phi = _phi_arg(args.phi, args.degrees)
    opt = _optimize_single(args.n_states, phi)
    fam = build_family(args.n_states, phi)
    items: list[tuple[str, object]] = [
        ("phi", phi),
        ("n_states", args.n_states),
        ("fidelity", opt.fidelity),
        ("eta", opt.params.eta),
        ("xi", opt.params.xi),
        ("c", opt.params.c),
        ("c_sign", opt.c_sign),
        ("denseness", denseness(fam)),
        ("shannon_entropy", shannon_entropy(args.n_states)),
        ("method_agreement", opt.method_agreement),
        ("root_residual", opt.root_residual),
    ]
    if args.json:
        payload = {
            k: _json_value(v) if isinstance(v, float) else v for k, v in items
        }
        print(json.dumps(payload))
    else:
        print(_report_lines(items))
    return 0


def _sweep_row(n_label: str, n_states: int | None, phi: float) -> str:
    if n_states is None:
        form = None if phi == 0.0 else continuum_form(phi)
        opt = optimize_reduced(form, phi)
    else:
        opt = _optimize_single(n_states, phi)
    fields = (
        _fmt(phi),
        n_label,
        _fmt(opt.fidelity),
        _fmt(opt.params.eta),
        _fmt(opt.params.xi),
        _fmt(opt.params.c),
        str(opt.c_sign),
    )
    return ",".join(fields)


def cmd_sweep(args: argparse.Namespace) -> int:
    ns = _parse_n_list(args.n_states) if args.n_states else []
    if not ns and not args.continuum:
        raise ValueError("nothing to sweep: pass --n-states and/or --continuum")
    start = _phi_arg(args.phi_start, args.degrees)
    end = _phi_arg(args.phi_end, args.degrees)
    if args.steps < 2:
        raise ValueError("--steps must be >= 2")
    for value in (start, end):
        if not 0.0 <= value < math.pi:
            raise ValueError("phi range must lie within [0, pi)")
    if end < start:
        raise ValueError("--phi-end must not precede --phi-start")
    step = (end - start) / (args.steps - 1)
    grid = [start + i * step for i in range(args.steps)]

    tasks: list[tuple[str, int | None, float]] = []
    for n in ns:
        tasks.extend((str(n), n, phi) for phi in grid)
    if args.continuum:
        tasks.extend(("cont", None, phi) for phi in grid)

    with ThreadPoolExecutor(max_workers=8) as pool:
        rows = list(pool.map(lambda t: _sweep_row(*t), tasks))

    text = CSV_HEADER + "\n" + "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    phi = _phi_arg(args.phi, args.degrees)
    fam = build_family(args.n_states, phi)
    reduced_opt = optimize_reduced(discrete_form(fam), fam)
    params, oracle_f = oracle_optimize(fam, starts=args.starts, seed=args.seed)
    report = symmetry_report(params, fam)
    max_residual = max(abs(r) for r in constraint_residuals(params, fam))
    diff = oracle_f - reduced_opt.fidelity
    items: list[tuple[str, object]] = [
        ("phi", phi),
        ("n_states", args.n_states),
        ("starts", args.starts),
        ("seed", args.seed),
        ("oracle_fidelity", oracle_f),
        ("reduced_fidelity", reduced_opt.fidelity),
        ("difference", diff),
        ("max_residual", max_residual),
        ("xi_gap", report.xi_gap),
        ("eta_gap", report.eta_gap),
        ("c_gap", report.c_gap),
        ("offdiag", report.offdiag),
        ("max_imag", report.max_imag),
    ]
    if args.json:
        payload = {
            k: _json_value(v) if isinstance(v, float) else v for k, v in items
        }
        print(json.dumps(payload))
    else:
        print(_report_lines(items))
    if abs(diff) > _ORACLE_TOL:
        print(
            f"oracle and reduced fidelities differ by {abs(diff):.3e} "
            f"(tolerance {_ORACLE_TOL:g})",
            file=sys.stderr,
        )
        return 2
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    from .verify import run_verification

    results = run_verification()
    failed = 0
    for result in results:
        status = "PASS" if result.ok else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
        failed += 0 if result.ok else 1
    if failed:
        print(f"{failed} of {len(results)} checks failed", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qclone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="best machine for one family")
    p_opt.add_argument("--n-states", type=int, required=True)
    p_opt.add_argument("--phi", type=float, required=True)
    p_opt.add_argument("--degrees", action="store_true")
    p_opt.add_argument("--json", action="store_true")
    p_opt.set_defaults(func=cmd_optimize)

    p_sweep = sub.add_parser("sweep", help="fidelity curves over a phi grid")
    p_sweep.add_argument("--n-states", type=str, default="",
                         help="comma-separated list, e.g. 2,3,4,6,10")
    p_sweep.add_argument("--phi-start", type=float, required=True)
    p_sweep.add_argument("--phi-end", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--continuum", action="store_true")
    p_sweep.add_argument("--out", type=str, default=None)
    p_sweep.add_argument("--degrees", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="brute-force cross-check")
    p_oracle.add_argument("--n-states", type=int, required=True)
    p_oracle.add_argument("--phi", type=float, required=True)
    p_oracle.add_argument("--starts", type=int, default=32)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--degrees", action="store_true")
    p_oracle.add_argument("--json", action="store_true")
    p_oracle.set_defaults(func=cmd_oracle)

    p_verify = sub.add_parser("verify", help="cross-module invariant suite")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OracleInfeasibleError as exc:
        print(f"qclone: oracle infeasible: {exc}", file=sys.stderr)
        return 3
    except InternalConsistencyError as exc:
        print(f"qclone: internal consistency failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"qclone: error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
