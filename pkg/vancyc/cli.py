"""Command-line entry point: ``vancyc --input problem.yaml`` or ``vancyc --expr "x^2+y^3"``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

from .config import Settings, configure_logging
from .errors import EXIT_INTERNAL, EXIT_OK, InvalidProblem, VanishingCycleError
from .pipeline import run
from .report import ProblemSpec, Report, load_problem, problem_from_mapping
from .selftest import SelftestSummary, run_selftest

LOGGER = logging.getLogger("vancyc.cli")


class _Parser(argparse.ArgumentParser):
    """Usage errors become InvalidProblem so they exit with code 1 and a JSON line."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise InvalidProblem(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="vancyc",
        description="Exact vanishing-cycle data of a polynomial from its Gauss-Manin system",
    )
    source = parser.add_argument_group("problem")
    source.add_argument("--input", help="Path to a YAML or JSON problem file")
    source.add_argument("--expr", help="Polynomial given inline instead of a file")
    source.add_argument("--variables", help="Comma-separated variable order, e.g. x,y")
    source.add_argument("--mode", choices=("isolated", "nc-monomial"), help="Override the mode")
    source.add_argument("--precision", type=int, help="Force the truncation order N")
    source.add_argument("--window", help="Eigenvalue window a,b for nc-monomial mode")
    source.add_argument("--extension", choices=("off", "one"), help="Number field policy")
    source.add_argument("--check", choices=("none", "basic", "full"), help="Cross-check level")

    output = parser.add_argument_group("output")
    output.add_argument("--format", choices=("json", "text"), default="json")
    output.add_argument("--timing", action="store_true", help="Record wall time in the report")
    output.add_argument("--log-level", help="Logging level (default: VANCYC_LOG_LEVEL or WARNING)")
    output.add_argument("-v", "--verbose", action="store_true", help="Shortcut for --log-level INFO")
    output.add_argument("--threads", type=int, help="Worker threads (default: VANCYC_THREADS or 1)")

    check = parser.add_argument_group("self-check")
    check.add_argument("--selftest", action="store_true", help="Run invariant suites and corpus")
    check.add_argument("--perturb", help="Corpus entry to break deliberately (negative control)")
    return parser


# ---------------------------------------------------------------------------
# problem assembly
# ---------------------------------------------------------------------------


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    changes: Dict[str, Any] = {}
    if args.expr is not None:
        changes["f"] = args.expr
    if args.variables is not None:
        changes["variables"] = [v.strip() for v in args.variables.split(",") if v.strip()]
    for key in ("mode", "precision", "window", "extension", "check"):
        value = getattr(args, key)
        if value is not None:
            changes[key] = value
    return changes


def problem_from_args(args: argparse.Namespace) -> ProblemSpec:
    """File fields first, then CLI flags on top."""

    if args.input is None and args.expr is None:
        raise InvalidProblem("give --input PATH or --expr EXPRESSION")
    base: Dict[str, Any] = {}
    if args.input is not None:
        base = load_problem(Path(args.input)).model_dump(exclude_unset=True)
    base.update(_overrides(args))
    return problem_from_mapping(base)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def render_text(report: Report) -> str:
    lines: List[str] = []
    spec = report.input
    if report.isolated is not None:
        iso = report.isolated
        lines.append(f"f = {spec.f}    variables: {', '.join(iso.variables)}")
        lines.append(
            f"mu = {iso.mu}    degree k = {iso.degree}    precision N = {iso.precision}"
            f"    stabilized: {'yes' if iso.stabilized else 'no'}"
        )
        if not iso.factors:
            lines.append("no critical points")
        for factor in iso.factors:
            value = factor.critical_value
            if factor.minimal_polynomial:
                value = f"{value}  where {factor.minimal_polynomial} = 0 (orbit {factor.orbit_size})"
            lines.append("")
            lines.append(f"c = {value}    dim = {factor.dimension}    route: {factor.route}")
            lines.append(f"  {'exponent':>10}  {'rotation':>9}  {'order':>5}  blocks")
            for entry in factor.monodromy:
                sizes = " ".join(str(s) for s in entry.sizes)
                lines.append(f"  {entry.exponent:>10}  {entry.rotation:>9}  {entry.order:>5}  {sizes}")
            if factor.shift:
                lines.append(f"  spectrum {' '.join(factor.spectrum)} (shifted by {factor.shift})")
            if factor.residue:
                lines.append("  residue R' =")
                width = max(len(v) for row in factor.residue for v in row)
                for row in factor.residue:
                    lines.append("    [ " + "  ".join(v.rjust(width) for v in row) + " ]")
    if report.nc is not None:
        nc = report.nc
        boundary = ", ".join(nc.boundary) or "none"
        lines.append(f"f = {spec.f or spec.exponents}    i0 = {nc.i0}    boundary: {boundary}")
        lines.append(f"{nc.complex} complex")
        lines.append(f"  {'eigenvalue':>10}  {'degree':>6}  {'mult':>4}")
        for row in nc.table:
            lines.append(f"  {row.eigenvalue:>10}  {row.degree:>6}  {row.multiplicity:>4}")
    if report.timing:
        lines.append("")
        lines.append(f"time: {report.timing['seconds']:.3f}s")
    return "\n".join(lines) + "\n"


def render_selftest(summary: SelftestSummary, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(summary.to_dict(), sort_keys=True, indent=2) + "\n"
    lines = [f"{'PASS' if r.ok else 'FAIL'}  {r.name}  {r.detail}".rstrip() for r in summary.results]
    lines.append(f"{summary.passed} passed, {len(summary.failed)} failed")
    return "\n".join(lines) + "\n"


def _emit_error(exc: VanishingCycleError, stream: TextIO) -> int:
    stream.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
    return exc.exit_code


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def main(argv: Optional[Sequence[str]] = None) -> int:
    out = sys.stdout
    try:
        args = build_parser().parse_args(argv)
        level = "INFO" if args.verbose and not args.log_level else args.log_level
        settings = Settings.from_env().with_overrides(threads=args.threads, log_level=level)
        configure_logging(settings.log_level)

        if args.selftest:
            summary = run_selftest(settings, perturb=args.perturb)
            out.write(render_selftest(summary, args.format))
            return EXIT_OK if summary.ok else EXIT_INTERNAL

        spec = problem_from_args(args)
        report = run(spec, settings, timing=args.timing)
        out.write(render_text(report) if args.format == "text" else report.to_json())
        return EXIT_OK
    except VanishingCycleError as exc:
        LOGGER.info("%s: %s", exc.reason, exc.message)
        return _emit_error(exc, out)
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to exit code 3
        LOGGER.exception("unexpected failure")
        payload = {"status": "error", "reason": "internal_error", "message": str(exc)}
        out.write(json.dumps(payload, sort_keys=True) + "\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
