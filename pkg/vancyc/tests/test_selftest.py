"""The self-check harness and the golden corpus."""

from __future__ import annotations

import json
import random

import pytest

from vancyc.cli import main
from vancyc.config import Settings
from vancyc.pipeline import run
from vancyc.report import problem_from_mapping
from vancyc.selftest import (
    SUITES,
    check_corpus_entry,
    compare_report,
    load_corpus,
    perturb_entry,
    run_selftest,
)

CORPUS = load_corpus()


@pytest.mark.parametrize("entry", CORPUS, ids=[e["name"] for e in CORPUS])
def test_golden_corpus_entry(entry: dict) -> None:
    result = check_corpus_entry(entry, Settings())
    assert result.ok, result.detail


@pytest.mark.parametrize("name, check", SUITES, ids=[name for name, _ in SUITES])
def test_invariant_suite(name: str, check) -> None:
    check(random.Random(0))


def test_perturbed_entry_fails_alone() -> None:
    summary = run_selftest(perturb="cusp", suites=False)
    failed = [r.name for r in summary.failed]
    assert failed == ["corpus.cusp"]
    assert summary.passed == len(CORPUS) - 1


def test_perturbation_moves_the_expected_exponent() -> None:
    (cusp,) = [e for e in CORPUS if e["name"] == "cusp"]
    changed = perturb_entry(cusp)
    assert changed["expect"]["factors"][0]["exponents"][0] == "2503/3000"
    assert cusp["expect"]["factors"][0]["exponents"][0] == "5/6"


def test_forced_low_precision_is_a_controlled_failure() -> None:
    entry = {
        "name": "cusp-n1",
        "problem": {"mode": "isolated", "f": "x^2 + y^3", "precision": 1},
        "expect": {"mu": 2},
    }
    result = check_corpus_entry(entry, Settings())
    assert not result.ok
    assert result.detail.startswith("precision_exhausted")


def test_cli_selftest(capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["--selftest"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0, [r for r in payload["results"] if not r["ok"]]
    assert payload["status"] == "ok"
    assert payload["failed"] == 0


def test_unstabilized_isolated_report_is_a_failure() -> None:
    (cusp,) = [e for e in CORPUS if e["name"] == "cusp"]
    report = run(problem_from_mapping(dict(cusp["problem"])))
    assert report.isolated is not None
    assert compare_report(report, cusp["expect"]) == []
    shaky = report.model_copy(
        update={"isolated": report.isolated.model_copy(update={"stabilized": False})}
    )
    (problem,) = compare_report(shaky, cusp["expect"])
    assert "did not stabilize" in problem
