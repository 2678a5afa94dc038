"""Command-line front end: compute, curves, thresholds, phase scans and verification.

Reports go to stdout as JSON (or to ``--out``); logs go to stderr. Exit codes:
0 success, 1 failed verification or numerical failure, 2 domain or usage
error, 3 unwritable output.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Any, Callable, Optional, Sequence

import mpmath

from .config import get_settings
from .curve import build_curve
from .dsbs_core import Order, renyi_ci
from .errors import DomainError, RootBracketError
from .extended import renyi_ci_mp
from .lemma_suite import SUITES, run_suites
from .manifest import (
    CURVE_HEADER,
    ComputeRecord,
    RunManifest,
    manifest_path,
    render_json,
    schemas,
    write_csv,
    write_json,
)
from .negative_orders import condition1_holds, epsilon0, gamma_ub_negative, phase_scan


logger = logging.getLogger(__name__)

_NEGATIVE_VALUE_OPTIONS = ("--alpha", "--alpha-min", "--alpha-max")
_EXTENDED_DIGITS = 30

__all__ = ["main"]


class _Run:
    """Per-invocation context handed to every subcommand."""

    def __init__(self, argv: Sequence[str], args: argparse.Namespace) -> None:
        self.argv = list(argv)
        self.args = args
        self.settings = get_settings()
        self.seed = self.settings.search.seed if args.seed is None else args.seed
        self.started = time.monotonic()

    def manifest(self, **grids: float) -> RunManifest:
        return RunManifest.build(self.argv, self.settings, self.seed, self.started, grids=grids)

    def emit(self, payload: dict[str, Any], **grids: float) -> None:
        payload = {**payload, "manifest": self.manifest(**grids).model_dump()}
        out = getattr(self.args, "out", None)
        if out:
            write_json(out, payload)
        else:
            print(render_json(payload))


# Subcommands --------------------------------------------------------------
def _cmd_compute(run: _Run) -> int:
    args = run.args
    order = Order.parse(args.alpha)
    if args.upper_bound:
        if not order.is_negative:
            raise DomainError("--upper-bound applies to negative orders only")
        result = gamma_ub_negative(args.epsilon, order, args.grid)
    else:
        result = renyi_ci(args.epsilon, order)

    extended = None
    if args.extended:
        extended = mpmath.nstr(renyi_ci_mp(args.epsilon, order), _EXTENDED_DIGITS)
    record = ComputeRecord(
        value=result.value,
        alpha=order.label(),
        regime=order.regime,
        epsilon=result.epsilon,
        exact=result.exact,
        witness=result.witness,
        extended_value=extended,
        extras=result.extras,
    )
    run.emit(record.model_dump(), **_overrides(r_points=args.grid))
    return 0


def _cmd_curve(run: _Run) -> int:
    args = run.args
    rows = build_curve(
        args.epsilon,
        alpha_min=float(Order.parse(args.alpha_min).value),
        alpha_max=float(Order.parse(args.alpha_max).value),
        points=args.points,
        grid=args.grid,
    )
    path = write_csv(args.out, CURVE_HEADER, (row.csv_fields() for row in rows))
    manifest = run.manifest(**_overrides(curve_points=args.points, r_points=args.grid))
    write_json(manifest_path(path), manifest.model_dump())
    print(json.dumps({"out": str(path), "rows": len(rows)}, sort_keys=True))
    return 0


def _cmd_epsilon0(run: _Run) -> int:
    args = run.args
    value = epsilon0(tolerance=args.tol, low=args.low, high=args.high, grid=args.grid)
    run.emit({"epsilon0": value, "tolerance": args.tol}, **_overrides(omega_points=args.grid))
    return 0


def _cmd_condition1(run: _Run) -> int:
    report = condition1_holds(run.args.epsilon, run.args.grid)
    run.emit(report.to_dict(), **_overrides(omega_points=run.args.grid))
    return 0


def _cmd_phase_scan(run: _Run) -> int:
    args = run.args
    points = phase_scan(args.eps_min, args.eps_max, args.points, grid=args.grid)
    run.emit(
        {"points": [point.to_dict() for point in points]},
        **_overrides(phase_points=args.points, r_points=args.grid),
    )
    return 0


def _cmd_verify(run: _Run) -> int:
    names = run.args.suite or ["all"]
    selected = list(SUITES) if "all" in names else list(dict.fromkeys(names))
    reports = run_suites(selected, seed=run.seed)
    passed = all(report.passed for report in reports)
    run.emit({"passed": passed, "reports": [report.to_dict() for report in reports]})
    return 0 if passed else 1


def _cmd_schema(run: _Run) -> int:  # noqa: ARG001
    print(json.dumps(schemas(), indent=2, sort_keys=True))
    return 0


# Parser -------------------------------------------------------------------
def _overrides(**grids: Optional[int]) -> dict[str, float]:
    """Grid sizes given on the command line, for the manifest."""

    return {name: float(value) for name, value in grids.items() if value is not None}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="Write the report to this path instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="renyi-ci", description="Rényi common information of the DSBS")
    parser.add_argument("--schema", action="store_true", help="Print the output schemas and exit")
    parser.add_argument("--seed", type=int, default=None, help="Seed for randomized sweeps (default: config)")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level for stderr (default: WARNING)",
    )
    subparsers = parser.add_subparsers(dest="command")

    compute = subparsers.add_parser("compute", help="Γ_α of DSBS(ε)")
    compute.add_argument("--epsilon", type=float, required=True, help="Crossover probability in [0, 1/2]")
    compute.add_argument("--alpha", required=True, help="Order: decimal, inf or -inf")
    compute.add_argument("--upper-bound", action="store_true", help="Report Γ^UB for a negative order")
    compute.add_argument("--grid", type=_positive_int, help="r-grid size for --upper-bound")
    compute.add_argument("--extended", action="store_true", help="Add a 30-digit mpmath re-evaluation")
    _common(compute)
    compute.set_defaults(func=_cmd_compute)

    curve = subparsers.add_parser("curve", help="Write the Γ_α curve as CSV")
    curve.add_argument("--epsilon", type=float, required=True)
    curve.add_argument("--alpha-min", default="-inf")
    curve.add_argument("--alpha-max", default="inf")
    curve.add_argument("--points", type=_positive_int, default=None)
    curve.add_argument("--grid", type=_positive_int, help="r-grid size for upper-bound rows")
    curve.add_argument("--out", required=True, help="CSV path; the manifest is written next to it")
    curve.set_defaults(func=_cmd_curve)

    threshold = subparsers.add_parser("epsilon0", help="Threshold where Condition 1 starts to hold")
    threshold.add_argument("--tol", type=float, default=1e-6)
    threshold.add_argument("--low", type=float, default=None)
    threshold.add_argument("--high", type=float, default=None)
    threshold.add_argument("--grid", type=_positive_int, help="ω-grid size per verdict")
    _common(threshold)
    threshold.set_defaults(func=_cmd_epsilon0)

    condition = subparsers.add_parser("condition1", help="Condition 1 verdict at ε")
    condition.add_argument("--epsilon", type=float, required=True)
    condition.add_argument("--grid", type=_positive_int)
    _common(condition)
    condition.set_defaults(func=_cmd_condition1)

    scan = subparsers.add_parser("phase-scan", help="Γ^UB_{-inf} - C_W across an ε range")
    scan.add_argument("--eps-min", type=float, required=True)
    scan.add_argument("--eps-max", type=float, required=True)
    scan.add_argument("--points", type=_positive_int, default=10)
    scan.add_argument("--grid", type=_positive_int, help="r-grid size per point")
    _common(scan)
    scan.set_defaults(func=_cmd_phase_scan)

    verify = subparsers.add_parser("verify", help="Run verification suites")
    verify.add_argument("--suite", action="append", choices=["all", *SUITES], help="Suite name (repeatable)")
    _common(verify)
    verify.set_defaults(func=_cmd_verify)

    schema = subparsers.add_parser("schema", help="Print the output schemas")
    schema.set_defaults(func=_cmd_schema)
    return parser


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--alpha -inf`` as ``--alpha=-inf`` so argparse keeps the value."""

    joined: list[str] = []
    tokens = list(argv)
    index = 0
    while index < len(tokens):
        token = tokens[index]
        if token in _NEGATIVE_VALUE_OPTIONS and index + 1 < len(tokens) and tokens[index + 1].startswith("-"):
            joined.append(f"{token}={tokens[index + 1]}")
            index += 2
            continue
        joined.append(token)
        index += 1
    return joined


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(_join_negative_values(argv))
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    if args.schema:
        print(json.dumps(schemas(), indent=2, sort_keys=True))
        return 0
    if args.command is None:
        parser.error("a subcommand is required")

    func: Callable[[_Run], int] = args.func
    try:
        return func(_Run(argv, args))
    except ValueError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except RootBracketError as exc:
        print(f"{parser.prog}: numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{parser.prog}: cannot write output: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover - CLI entry
    sys.exit(main())
