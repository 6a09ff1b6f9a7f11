"""End to end: problem in, report out."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .brieskorn import t_matrix
from .config import Settings, default_precision
from .errors import (
    ConsistencyError,
    InvalidProblem,
    NoStabilization,
    PrecisionExhausted,
)
from .field.linalg import ExtensionPolicy
from .groebner import MilnorData, jacobian_ideal, milnor_data
from .logmonomial import NCProblem, i0_independent, nc_spectrum
from .microdiff import ECFactor, analyze_module
from .mpoly import MPoly, parse
from .report import (
    DEFAULT_WINDOW,
    FactorReport,
    IsolatedResult,
    MonodromyEntry,
    NCResult,
    NCRow,
    ProblemSpec,
    Report,
)

LOGGER = logging.getLogger("vancyc.pipeline")


@dataclass(frozen=True)
class IsolatedRun:
    polynomial: MPoly
    milnor: MilnorData
    factors: Tuple[ECFactor, ...]
    precision: int
    stabilized: bool


def _policy(spec: ProblemSpec) -> ExtensionPolicy:
    return ExtensionPolicy.ALLOW_ONE_EXTENSION if spec.extension == "one" else ExtensionPolicy.RATIONAL_ONLY


def _factors_at(
    f: MPoly, md: MilnorData, precision: int, spec: ProblemSpec, settings: Settings
) -> List[ECFactor]:
    module = t_matrix(
        f, precision, md=md, threads=settings.threads, cross_check=spec.check != "none"
    )
    return analyze_module(module, _policy(spec), degree=f.nvars, threads=settings.threads)


def _canonical(factors: Sequence[ECFactor]) -> List[tuple]:
    return [factor.canonical() for factor in factors]


def run_isolated(spec: ProblemSpec, settings: Optional[Settings] = None) -> IsolatedRun:
    """Factors of ``f`` with precision retries and the N / 2N certificate."""

    settings = settings or Settings()
    f = parse(spec.f or "", spec.variables)
    if f.nvars == 0:
        raise InvalidProblem("the expression has no variables")
    md = milnor_data(jacobian_ideal(f))
    if spec.check == "full" and not md.gb.check_cofactors():
        raise ConsistencyError("groebner cofactors do not reproduce the basis")
    if md.mu == 0:
        return IsolatedRun(f, md, (), spec.precision or default_precision(0, f.nvars), True)

    forced = spec.precision is not None
    precision = spec.precision if forced else default_precision(md.mu, f.nvars)
    attempts = 0
    while True:
        try:
            factors = _factors_at(f, md, precision, spec, settings)
            break
        except (PrecisionExhausted, NoStabilization) as exc:
            if forced or attempts >= settings.max_doublings:
                raise
            attempts += 1
            LOGGER.warning("%s at precision %d; retrying at %d", exc.reason, precision, 2 * precision)
            precision *= 2

    total = sum(factor.dimension * factor.orbit_size for factor in factors)
    if total != md.mu:
        raise ConsistencyError(f"factor dimensions add up to {total}, expected mu={md.mu}")

    stabilized = False
    if spec.check != "none":
        try:
            doubled = _factors_at(f, md, 2 * precision, spec, settings)
            stabilized = _canonical(doubled) == _canonical(factors)
        except (PrecisionExhausted, NoStabilization):
            stabilized = False
        if not stabilized:
            LOGGER.warning("results at precision %d and %d differ", precision, 2 * precision)
    return IsolatedRun(f, md, tuple(factors), precision, stabilized)


def factor_report(factor: ECFactor) -> FactorReport:
    payload = factor.to_dict()
    return FactorReport(
        critical_value=payload["critical_value"],
        minimal_polynomial=payload.get("minimal_polynomial"),
        power_basis=payload.get("power_basis"),
        orbit_size=factor.orbit_size,
        dimension=factor.dimension,
        degree=factor.degree,
        monodromy=[MonodromyEntry(**entry) for entry in payload["monodromy"]],
        exponents=payload["exponents"],
        spectrum=payload["spectrum"],
        shift=factor.shift,
        route=factor.route,  # type: ignore[arg-type]
        residue=payload.get("residue"),
    )


def nc_problem(spec: ProblemSpec) -> Tuple[NCProblem, List[str]]:
    """Translate a named nc-monomial problem into an index-based problem."""

    if spec.exponents is not None:
        variables = list(spec.variables or [])
        exponents = dict(spec.exponents)
    else:
        f = parse(spec.f or "", spec.variables)
        if len(f.terms) != 1:
            raise InvalidProblem("nc-monomial mode needs a single monomial f")
        variables = list(f.variables)
        (mono,) = f.terms
        exponents = {name: e for name, e in zip(variables, mono) if e}
    for name in list(exponents) + list(spec.boundary) + list(spec.residues):
        if name not in variables:
            raise InvalidProblem(f"unknown variable {name!r}")
    index = {name: k + 1 for k, name in enumerate(variables)}
    j = [index[name] for name, e in exponents.items() if e]
    j_prime = sorted(set(j) | {index[name] for name in spec.boundary})
    window = spec.window_bounds()
    if window is None and spec.degree_bound is None:
        window = (Fraction(DEFAULT_WINDOW[0]), Fraction(DEFAULT_WINDOW[1]))
    problem = NCProblem(
        n=len(variables),
        j=tuple(j),
        j_prime=tuple(j_prime),
        exponents={index[name]: e for name, e in exponents.items() if e},
        residues={index[name]: Fraction(a) for name, a in spec.residues.items()},
        window=window,
        degree_bound=spec.degree_bound,
        i0=None if spec.i0 is None else index.get(spec.i0, -1),
        complex=spec.complex,
    )
    return problem, variables


def run_nc(spec: ProblemSpec) -> NCResult:
    problem, variables = nc_problem(spec)
    spectrum = nc_spectrum(problem)
    if spec.check == "full" and not i0_independent(problem):
        raise ConsistencyError("normal-crossing spectrum depends on the choice of i0")
    return NCResult(
        i0=variables[spectrum.i0 - 1],
        complex=spectrum.complex,  # type: ignore[arg-type]
        boundary=[variables[i - 1] for i in problem.j_prime if i not in problem.j],
        table=[NCRow(eigenvalue=str(v), degree=p, multiplicity=m) for v, p, m in spectrum.table()],
    )


def run(spec: ProblemSpec, settings: Optional[Settings] = None, *, timing: bool = False) -> Report:
    """Deterministic report for one problem."""

    settings = settings or Settings()
    started = time.perf_counter()
    if spec.mode == "isolated":
        outcome = run_isolated(spec, settings)
        result = IsolatedResult(
            mu=outcome.milnor.mu,
            degree=outcome.polynomial.nvars,
            variables=list(outcome.polynomial.variables),
            milnor_basis=outcome.milnor.labels(),
            precision=outcome.precision,
            stabilized=outcome.stabilized,
            factors=[factor_report(factor) for factor in outcome.factors],
        )
        report = Report(input=spec, isolated=result)
    else:
        report = Report(input=spec, nc=run_nc(spec))
    if timing:
        report.timing = {"seconds": round(time.perf_counter() - started, 6)}
    return report


__all__ = ["IsolatedRun", "factor_report", "nc_problem", "run", "run_isolated", "run_nc"]
