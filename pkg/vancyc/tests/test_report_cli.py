"""Problem documents, the pipeline and the command line."""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from pathlib import Path

import pytest

from vancyc import pipeline
from vancyc.cli import main
from vancyc.config import Settings, default_precision
from vancyc.errors import InvalidProblem, NoStabilization, ProblemIOError
from vancyc.pipeline import nc_problem, run
from vancyc.report import Report, load_problem, problem_from_mapping


def _run_cli(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------


def test_problem_defaults_and_window_text() -> None:
    spec = problem_from_mapping({"mode": "nc-monomial", "f": "x*y", "window": "0, 1/2"})
    assert spec.window == ["0", "1/2"]
    assert spec.extension == "off"
    assert spec.check == "basic"


def test_problem_validation_errors() -> None:
    with pytest.raises(InvalidProblem):
        problem_from_mapping({"mode": "isolated"})
    with pytest.raises(InvalidProblem):
        problem_from_mapping({"f": "x^2", "variables": ["x", "x"]})
    with pytest.raises(InvalidProblem):
        problem_from_mapping({"f": "x^2", "colour": "blue"})
    with pytest.raises(InvalidProblem):
        problem_from_mapping(["x^2"])


def test_load_problem_from_yaml(tmp_path: Path) -> None:
    path = tmp_path / "cusp.yaml"
    path.write_text("mode: isolated\nf: x^2 + y^3\nvariables: [x, y]\n", encoding="utf-8")
    spec = load_problem(path)
    assert spec.f == "x^2 + y^3"
    with pytest.raises(ProblemIOError):
        load_problem(tmp_path / "missing.yaml")


def test_nc_problem_from_a_monomial() -> None:
    spec = problem_from_mapping(
        {"mode": "nc-monomial", "variables": ["x", "y", "z"], "f": "x^2*y", "boundary": ["z"]}
    )
    prob, variables = nc_problem(spec)
    assert variables == ["x", "y", "z"]
    assert prob.j == (1, 2)
    assert prob.j_prime == (1, 2, 3)
    assert prob.exponents == {1: 2, 2: 1}


def test_nc_mode_needs_a_monomial() -> None:
    with pytest.raises(InvalidProblem):
        nc_problem(problem_from_mapping({"mode": "nc-monomial", "f": "x + y"}))


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


def test_cusp_report() -> None:
    report = run(problem_from_mapping({"f": "x^2 + y^3"}))
    iso = report.isolated
    assert iso is not None
    assert iso.mu == 2
    assert iso.degree == 2
    assert iso.stabilized
    (factor,) = iso.factors
    assert factor.critical_value == "0"
    assert factor.exponents == ["5/6", "7/6"]
    assert [m.sizes for m in factor.monodromy] == [[1], [1]]


def test_report_round_trip_and_determinism() -> None:
    spec = problem_from_mapping({"f": "x^3 - 3*x"})
    first = run(spec).to_json()
    second = run(spec, Settings(threads=3)).to_json()
    assert first == second
    assert first.endswith("\n")
    assert Report.from_json(first).to_json() == first


def test_factor_dimensions_add_up_to_mu() -> None:
    report = run(problem_from_mapping({"f": "x^3 - 6*x", "extension": "one"}))
    iso = report.isolated
    assert iso is not None
    assert sum(f.dimension * f.orbit_size for f in iso.factors) == iso.mu


def test_no_critical_points() -> None:
    report = run(problem_from_mapping({"f": "x + x^2*y"}))
    assert report.isolated is not None
    assert report.isolated.mu == 0
    assert report.isolated.factors == []


def test_unstable_first_attempt_doubles_the_precision(monkeypatch: pytest.MonkeyPatch) -> None:
    seen: list = []
    original = pipeline._factors_at

    def flaky(f, md, precision, spec, settings):
        seen.append(precision)
        if len(seen) == 1:
            raise NoStabilization("saturation did not stabilize", precision=precision)
        return original(f, md, precision, spec, settings)

    monkeypatch.setattr(pipeline, "_factors_at", flaky)
    iso = run(problem_from_mapping({"f": "x^2 + y^3"})).isolated
    assert iso is not None
    first = default_precision(2, 2)
    assert seen == [first, 2 * first, 4 * first]
    assert iso.precision == 2 * first
    assert iso.stabilized
    assert iso.factors[0].exponents == ["5/6", "7/6"]


def _diagonal_spectrum(exponents: tuple) -> list:
    """Multiset ``{Σ (ν_i + 1)/a_i : 0 <= ν_i <= a_i - 2}``."""

    ranges = [range(a - 1) for a in exponents]
    return sorted(
        sum((Fraction(nu + 1, a) for nu, a in zip(point, exponents)), Fraction(0))
        for point in itertools.product(*ranges)
    )


@pytest.mark.parametrize(
    "text, exponents",
    [
        ("x^6 + y^6", (6, 6)),
        ("x^4 + y^6", (4, 6)),
        ("x^3 + y^3 + z^3", (3, 3, 3)),
        ("x^4 + y^4 + z^4", (4, 4, 4)),
        pytest.param("x^6 + y^6 + z^6", (6, 6, 6), marks=pytest.mark.slow),
    ],
)
def test_diagonal_polynomial_spectrum(text: str, exponents: tuple) -> None:
    iso = run(problem_from_mapping({"f": text})).isolated
    assert iso is not None
    expected = _diagonal_spectrum(exponents)
    assert iso.mu == len(expected)
    got = sorted(Fraction(e) for factor in iso.factors for e in factor.spectrum)
    assert got == expected
    assert iso.stabilized


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


def test_cli_expression_json(capsys: pytest.CaptureFixture[str]) -> None:
    code, out = _run_cli(capsys, "--expr", "x^2 + y^3")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_id"] == "vancyc.report/1"
    assert payload["isolated"]["factors"][0]["exponents"] == ["5/6", "7/6"]


def test_cli_input_file_with_overrides(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = tmp_path / "problem.json"
    path.write_text(json.dumps({"mode": "isolated", "f": "x^3 - 6*x"}), encoding="utf-8")
    code, out = _run_cli(capsys, "--input", str(path), "--extension", "one")
    assert code == 0
    (factor,) = json.loads(out)["isolated"]["factors"]
    assert factor["minimal_polynomial"] == "s^2 - 32"


def test_cli_text_format(capsys: pytest.CaptureFixture[str]) -> None:
    code, out = _run_cli(capsys, "--expr", "x^2 + y^3", "--format", "text")
    assert code == 0
    assert "mu = 2" in out
    assert "5/6" in out and "7/6" in out


def test_cli_nc_mode(capsys: pytest.CaptureFixture[str]) -> None:
    code, out = _run_cli(capsys, "--expr", "x*y", "--mode", "nc-monomial", "--window", "0,1")
    assert code == 0
    table = json.loads(out)["nc"]["table"]
    assert [(r["eigenvalue"], r["degree"], r["multiplicity"]) for r in table] == [
        ("0", 0, 1),
        ("0", 1, 1),
    ]


@pytest.mark.parametrize(
    "argv, code, reason",
    [
        (["--expr", "x + *y"], 1, "syntax_error"),
        (["--expr", "x^2", "--variables", "x,y"], 2, "not_isolated"),
        (["--expr", "x^3 - 6*x"], 2, "irreducible_factor"),
        (["--expr", "x^2 + y^3", "--precision", "1"], 3, "precision_exhausted"),
        (["--input", "/nonexistent/problem.yaml"], 1, "io_error"),
        ([], 1, "invalid_problem"),
        (["--bogus"], 1, "invalid_problem"),
    ],
)
def test_cli_errors(
    capsys: pytest.CaptureFixture[str], argv: list, code: int, reason: str
) -> None:
    exit_code, out = _run_cli(capsys, *argv)
    assert exit_code == code
    payload = json.loads(out.strip().splitlines()[-1])
    assert payload["status"] == "error"
    assert payload["reason"] == reason


def test_cli_reads_thread_count_from_environment(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    monkeypatch.setenv("VANCYC_THREADS", "2")
    assert Settings.from_env().threads == 2
    code, out = _run_cli(capsys, "--expr", "x^3 - 3*x")
    assert code == 0
    monkeypatch.delenv("VANCYC_THREADS")
    assert _run_cli(capsys, "--expr", "x^3 - 3*x")[1] == out
