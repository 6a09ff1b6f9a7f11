"""Invariant suites and the golden corpus, runnable without pytest.

``vancyc --selftest`` calls :func:`run_selftest`. Failures are collected, never
raised; the CLI turns a non-empty failure list into a nonzero exit code.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import yaml

from .brieskorn import MicroModule, t_matrix
from .config import Settings
from .errors import VanishingCycleError
from .field.linalg import char_poly, evaluate_at_matrix, jordan_data, solve_sylvester
from .field.matrix import Matrix
from .groebner import jacobian_ideal, milnor_data, milnor_number_oracle
from .logmonomial import NCProblem, i0_independent, koszul_oracle, nc_spectrum
from .microdiff import analyze_module, desresonate, monodromy
from .mpoly import MPoly, parse
from .pipeline import run
from .report import Report, problem_from_mapping
from .series import MatrixSeries, gauge, polynomial_gauge, shear, shear_gauge

LOGGER = logging.getLogger("vancyc.selftest")

CORPUS_PATH = Path(__file__).resolve().parent / "corpus" / "golden.yaml"
SEED = 20240611

Check = Callable[[random.Random], None]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"name": self.name, "ok": self.ok}
        if self.detail:
            payload["detail"] = self.detail
        return payload


@dataclass(frozen=True)
class SelftestSummary:
    results: Tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.ok)

    @property
    def failed(self) -> List[CheckResult]:
        return [r for r in self.results if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": "ok" if self.ok else "failed",
            "passed": self.passed,
            "failed": len(self.failed),
            "results": [r.to_dict() for r in self.results],
        }


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _random_fraction(rng: random.Random, bound: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def _random_matrix(rng: random.Random, n: int, m: Optional[int] = None) -> Matrix:
    m = n if m is None else m
    return Matrix.from_rows([[_random_fraction(rng) for _ in range(m)] for _ in range(n)], m)


def _random_invertible(rng: random.Random, n: int) -> Matrix:
    while True:
        candidate = _random_matrix(rng, n)
        if candidate.is_invertible():
            return candidate


def _random_poly(rng: random.Random, variables: Sequence[str], terms: int = 4) -> MPoly:
    out = MPoly.zero(variables)
    for _ in range(terms):
        mono = tuple(rng.randint(0, 3) for _ in variables)
        out = out + MPoly.monomial(mono, variables, _random_fraction(rng))
    return out


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise AssertionError(message)


# ---------------------------------------------------------------------------
# invariant suites
# ---------------------------------------------------------------------------


def check_cayley_hamilton(rng: random.Random) -> None:
    for n in (1, 2, 3, 4):
        m = _random_matrix(rng, n)
        _expect(evaluate_at_matrix(char_poly(m), m).is_zero(), f"χ(M) != 0 for {m}")


def check_sylvester(rng: random.Random) -> None:
    for _ in range(3):
        q = _random_invertible(rng, 2)
        a = q.inverse() @ Matrix.from_rows([[1, _random_fraction(rng)], [0, 2]]) @ q
        b = Matrix.from_rows([[-1, 0], [_random_fraction(rng), 3]])
        c = _random_matrix(rng, 2)
        x = solve_sylvester(a, b, c)
        _expect(a @ x - x @ b == c, "Sylvester residual is nonzero")


def check_jordan(rng: random.Random) -> None:
    q = _random_invertible(rng, 3)
    m = q.inverse() @ Matrix.from_rows([[2, 1, 0], [0, 2, 0], [0, 0, 5]]) @ q
    sizes = {str(e.eigenvalue): e.sizes for e in jordan_data(m)}
    _expect(sizes == {"2": (2,), "5": (1,)}, f"unexpected Jordan data {sizes}")


def check_polynomial_text(rng: random.Random) -> None:
    variables = ("x", "y", "z")
    for _ in range(5):
        p = _random_poly(rng, variables)
        _expect(parse(str(p), variables) == p, f"printing and parsing changed {p}")


def check_leibniz(rng: random.Random) -> None:
    variables = ("x", "y")
    for _ in range(5):
        p, q = _random_poly(rng, variables), _random_poly(rng, variables)
        for i in range(2):
            lhs = (p * q).partial_derivative(i)
            rhs = p.partial_derivative(i) * q + p * q.partial_derivative(i)
            _expect(lhs == rhs, "product rule fails")


GROEBNER_CASES = ("x^2 + y^3", "x^3 + x*y^2", "x^3 - 3*x", "x^4 + y^2 + x*y", "x^2 + y^2 + z^2")


def check_groebner_cofactors(rng: random.Random) -> None:
    for text in GROEBNER_CASES:
        _expect(jacobian_ideal(parse(text)).check_cofactors(), f"cofactors fail for {text}")


def check_milnor_number_oracle(rng: random.Random) -> None:
    for text in GROEBNER_CASES:
        gb = jacobian_ideal(parse(text))
        md = milnor_data(gb)
        oracle = milnor_number_oracle(gb.generators, md.max_degree())
        _expect(oracle == md.mu, f"mu={md.mu} but linear algebra gives {oracle} for {text}")


def check_series_inverse(rng: random.Random) -> None:
    n, precision = 2, 5
    g = MatrixSeries.from_list(
        [_random_invertible(rng, n), _random_matrix(rng, n), _random_matrix(rng, n)], precision
    )
    product = g @ g.inverse()
    _expect(product.agrees_with(MatrixSeries.identity(n), precision), "G G^-1 != I")


def check_gauge_round_trip(rng: random.Random) -> None:
    n, precision = 3, 6
    a = MatrixSeries.from_list([_random_matrix(rng, n) for _ in range(4)], precision)
    g = polynomial_gauge(_random_matrix(rng, n), rng.randint(1, 2), n)
    g_inverse = g.inverse_to(precision)
    back = gauge(gauge(a, g, g_inverse), g_inverse, g)
    _expect(back.agrees_with(a, precision), "gauge by G then G^-1 is not the identity")


def check_shear_is_gauge(rng: random.Random) -> None:
    n, precision = 3, 5
    a0 = Matrix.from_rows([[0, 0, 0], [_random_fraction(rng), 0, 0], [_random_fraction(rng), 0, 0]])
    a = MatrixSeries.from_list([a0] + [_random_matrix(rng, n) for _ in range(3)], precision)
    lowered = [1, 2]
    via_gauge = gauge(a, shear_gauge(n, lowered), shear_gauge(n, lowered, power=1))
    _expect(via_gauge.agrees_with(shear(a, lowered), precision - 1), "shear != diagonal gauge")


def check_quasi_homogeneous(rng: random.Random) -> None:
    for text in ("x^2 + y^3", "x^3 + x*y^2", "x^3 + y^4", "x^2 + y^2 + z^2"):
        f = parse(text)
        module = t_matrix(f, 4, cross_check=True)
        _expect(module.a0.is_zero(), f"A_0 != 0 for quasi-homogeneous {text}")


def check_synthetic_resonance(rng: random.Random) -> None:
    r = Matrix.from_rows([[Fraction(-1, 4), 1], [0, Fraction(3, 4)]])
    result = desresonate(r, MatrixSeries.monomial(r, 1).with_precision(6))
    _expect(result.spectrum == (Fraction(-1, 4), Fraction(3, 4)), "wrong spectrum")
    _expect(result.shift == 1, f"shift {result.shift} != 1")
    _expect(result.residue == Matrix.scalar(2, Fraction(-1, 4)), f"residue {result.residue}")
    factor = monodromy(result.residue, Fraction(0), 1)
    _expect([(b.rotation, b.multiplicity) for b in factor.monodromy] == [(Fraction(3, 4), 2)], "T")


GAUGE_CASES = ("x^2 + y^3", "x^3 - 3*x")
GAUGE_TRIALS = 100


def random_integer_invertible(rng: random.Random, n: int, bound: int = 3) -> Matrix:
    """Invertible matrix with entries in ``[-bound, bound]``."""

    while True:
        candidate = Matrix.from_rows(
            [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)], n
        )
        if candidate.is_invertible():
            return candidate


def check_gauge_invariance(rng: random.Random, trials: int = GAUGE_TRIALS) -> None:
    for text in GAUGE_CASES:
        module = t_matrix(parse(text))
        n, precision = module.dim, module.precision
        before = [factor.canonical() for factor in analyze_module(module)]
        for trial in range(trials):
            q = MatrixSeries.constant(random_integer_invertible(rng, n))
            g = q @ polynomial_gauge(_random_matrix(rng, n), 1, n)
            moved = module.with_series(gauge(module.series, g, g.inverse_to(precision)))
            after = [factor.canonical() for factor in analyze_module(moved)]
            _expect(before == after, f"{text}: factors depend on the lattice basis (trial {trial})")


def check_nc_i0_independence(rng: random.Random) -> None:
    for _ in range(4):
        n = rng.randint(1, 3)
        exps = {i: rng.randint(1, 4) for i in range(1, n + 1)}
        prob = NCProblem(n, tuple(exps), tuple(exps), exps, window=(Fraction(0), Fraction(1)))
        _expect(i0_independent(prob), f"spectrum depends on i0 for {exps}")


def check_nc_koszul(rng: random.Random) -> None:
    cases = [
        NCProblem(1, (1,), (1,), {1: 3}, window=(Fraction(0), Fraction(1))),
        NCProblem(2, (1, 2), (1, 2), {1: 2, 2: 3}, window=(Fraction(0), Fraction(1))),
        NCProblem(3, (1, 2), (1, 2, 3), {1: 1, 2: 1}, window=(Fraction(0), Fraction(1))),
    ]
    for prob in cases:
        spectrum = nc_spectrum(prob)
        truncation = max(prob.exponents.values())
        for value in sorted({v for v, _, _ in spectrum.table()}):
            dims = koszul_oracle(prob, value, truncation)
            for p, dim in dims.items():
                _expect(
                    dim == spectrum.multiplicity(p, value),
                    f"Koszul dimension {dim} != {spectrum.multiplicity(p, value)} at {value}, p={p}",
                )


SUITES: Tuple[Tuple[str, Check], ...] = (
    ("field.cayley_hamilton", check_cayley_hamilton),
    ("field.sylvester", check_sylvester),
    ("field.jordan", check_jordan),
    ("mpoly.text", check_polynomial_text),
    ("mpoly.leibniz", check_leibniz),
    ("groebner.cofactors", check_groebner_cofactors),
    ("groebner.milnor_oracle", check_milnor_number_oracle),
    ("series.inverse", check_series_inverse),
    ("series.gauge_round_trip", check_gauge_round_trip),
    ("series.shear", check_shear_is_gauge),
    ("brieskorn.quasi_homogeneous", check_quasi_homogeneous),
    ("microdiff.resonance", check_synthetic_resonance),
    ("microdiff.gauge_invariance", check_gauge_invariance),
    ("logmonomial.i0", check_nc_i0_independence),
    ("logmonomial.koszul", check_nc_koszul),
)


# ---------------------------------------------------------------------------
# golden corpus
# ---------------------------------------------------------------------------


def load_corpus(path: Optional[Path] = None) -> List[Dict[str, Any]]:
    path = path or CORPUS_PATH
    with path.open("r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle) or {}
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise ValueError(f"{path} has no 'entries' list")
    return entries


def _fractions(values: Sequence[Any]) -> List[Fraction]:
    return sorted(Fraction(str(v)) for v in values)


def perturb_entry(entry: Mapping[str, Any]) -> Dict[str, Any]:
    """Copy of ``entry`` with its first expected eigenvalue moved by 1/1000."""

    expect = yaml.safe_load(yaml.safe_dump(dict(entry.get("expect", {}))))
    bump = Fraction(1, 1000)
    if expect.get("factors"):
        values = expect["factors"][0]["exponents"]
        values[0] = str(Fraction(values[0]) + bump)
    elif expect.get("table"):
        expect["table"][0][0] = str(Fraction(expect["table"][0][0]) + bump)
    else:
        expect["mu"] = expect.get("mu", 0) + 1
    return {**entry, "expect": expect}


def _compare_factor(index: int, got: Any, want: Mapping[str, Any]) -> List[str]:
    problems: List[str] = []
    if "critical_value" in want and got.critical_value != str(want["critical_value"]):
        problems.append(f"factor {index}: critical value {got.critical_value}")
    if "dimension" in want and got.dimension != want["dimension"]:
        problems.append(f"factor {index}: dimension {got.dimension}")
    if "exponents" in want and _fractions(got.exponents) != _fractions(want["exponents"]):
        problems.append(f"factor {index}: exponents {got.exponents}")
    if "rotations" in want:
        rotations = _fractions([m.rotation for m in got.monodromy])
        if rotations != _fractions(want["rotations"]):
            problems.append(f"factor {index}: rotations {rotations}")
    if "minimal_polynomial" in want and got.minimal_polynomial != want["minimal_polynomial"]:
        problems.append(f"factor {index}: minimal polynomial {got.minimal_polynomial}")
    if "orbit_size" in want and got.orbit_size != want["orbit_size"]:
        problems.append(f"factor {index}: orbit size {got.orbit_size}")
    for exponent, sizes in want.get("blocks", []):
        found = [m.sizes for m in got.monodromy if Fraction(m.exponent) == Fraction(str(exponent))]
        if found != [list(sizes)]:
            problems.append(f"factor {index}: Jordan blocks at {exponent} are {found}")
    return problems


def compare_report(report: Report, expect: Mapping[str, Any]) -> List[str]:
    problems: List[str] = []
    if report.isolated is not None:
        iso = report.isolated
        if not iso.stabilized:
            problems.append(f"precision {iso.precision} did not stabilize against {2 * iso.precision}")
        if "mu" in expect and iso.mu != expect["mu"]:
            problems.append(f"mu {iso.mu} != {expect['mu']}")
        wanted = expect.get("factors", [])
        if len(iso.factors) != len(wanted):
            problems.append(f"{len(iso.factors)} factors, expected {len(wanted)}")
        for k, (got, want) in enumerate(zip(iso.factors, wanted)):
            problems.extend(_compare_factor(k, got, want))
    if report.nc is not None and "table" in expect:
        got_rows = sorted((Fraction(r.eigenvalue), r.degree, r.multiplicity) for r in report.nc.table)
        want_rows = sorted((Fraction(str(v)), int(p), int(m)) for v, p, m in expect["table"])
        if got_rows != want_rows:
            problems.append(f"table {[(str(v), p, m) for v, p, m in got_rows]}")
    return problems


def check_corpus_entry(entry: Mapping[str, Any], settings: Settings) -> CheckResult:
    name = f"corpus.{entry.get('name', '?')}"
    expect = entry.get("expect", {})
    try:
        report = run(problem_from_mapping(dict(entry["problem"])), settings)
    except VanishingCycleError as exc:
        if expect.get("error") == exc.reason:
            return CheckResult(name, True, f"expected {exc.reason}")
        return CheckResult(name, False, f"{exc.reason}: {exc.message}")
    if "error" in expect:
        return CheckResult(name, False, f"expected {expect['error']}, run succeeded")
    if Report.from_json(report.to_json()) != report:
        return CheckResult(name, False, "report does not survive a JSON round trip")
    problems = compare_report(report, expect)
    return CheckResult(name, not problems, "; ".join(problems))


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _run_check(name: str, check: Check, rng: random.Random) -> CheckResult:
    try:
        check(rng)
    except Exception as exc:  # noqa: BLE001 - failures are reported, not raised
        LOGGER.debug("check %s failed", name, exc_info=True)
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, True)


def run_selftest(
    settings: Optional[Settings] = None,
    corpus_path: Optional[Path] = None,
    perturb: Optional[str] = None,
    *,
    suites: bool = True,
) -> SelftestSummary:
    """Run every invariant suite and corpus entry.

    ``perturb`` names a corpus entry whose expectation is deliberately broken;
    that entry must then fail while the rest pass.
    """

    settings = settings or Settings()
    rng = random.Random(SEED)
    results: List[CheckResult] = []
    if suites:
        results.extend(_run_check(name, check, rng) for name, check in SUITES)
    try:
        entries = load_corpus(corpus_path)
    except (OSError, ValueError, yaml.YAMLError) as exc:
        results.append(CheckResult("corpus.load", False, str(exc)))
        entries = []
    for entry in entries:
        if perturb is not None and entry.get("name") == perturb:
            entry = perturb_entry(entry)
        try:
            results.append(check_corpus_entry(entry, settings))
        except Exception as exc:  # noqa: BLE001
            results.append(CheckResult(f"corpus.{entry.get('name', '?')}", False, repr(exc)))
    summary = SelftestSummary(tuple(results))
    LOGGER.info("selftest: %d passed, %d failed", summary.passed, len(summary.failed))
    return summary


__all__ = [
    "CORPUS_PATH",
    "GAUGE_CASES",
    "CheckResult",
    "SUITES",
    "SelftestSummary",
    "compare_report",
    "load_corpus",
    "perturb_entry",
    "random_integer_invertible",
    "run_selftest",
]
