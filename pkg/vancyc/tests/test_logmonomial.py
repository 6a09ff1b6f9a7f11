"""Tests for the normal-crossing monomial spectrum."""

from __future__ import annotations

from fractions import Fraction

import pytest

from vancyc.errors import EmptyJ, InvalidProblem, WindowUnbounded
from vancyc.logmonomial import (
    NCProblem,
    i0_independent,
    koszul_oracle,
    nc_spectrum,
    psi_stalk_dims,
)

F = Fraction
UNIT = (F(0), F(1))


@pytest.mark.parametrize("e", [1, 2, 3, 4, 5, 6, 7])
def test_power_of_one_variable(e: int) -> None:
    spectrum = nc_spectrum(NCProblem(1, (1,), (1,), {1: e}, window=UNIT))
    assert spectrum.eigenvalues(0) == [F(k, e) for k in range(e)]
    assert all(m == 1 for _, _, m in spectrum.table())
    assert spectrum.eigenvalues(1) == []


def test_product_of_two_variables() -> None:
    spectrum = nc_spectrum(NCProblem(2, (1, 2), (1, 2), {1: 1, 2: 1}, window=UNIT))
    assert spectrum.table() == [(F(0), 0, 1), (F(0), 1, 1)]


def test_boundary_divisor_adds_a_wedge_factor() -> None:
    spectrum = nc_spectrum(NCProblem(3, (1, 2), (1, 2, 3), {1: 1, 2: 1}, window=UNIT))
    assert spectrum.table() == [(F(0), 0, 1), (F(0), 1, 2), (F(0), 2, 1)]


def test_twisted_boundary_kills_the_cohomology() -> None:
    prob = NCProblem(2, (1,), (1, 2), {1: 2}, residues={2: F(1, 3)}, window=UNIT)
    assert nc_spectrum(prob).table() == []


def test_residues_on_the_monomial_shift_eigenvalues() -> None:
    prob = NCProblem(1, (1,), (1,), {1: 2}, residues={1: F(1, 2)}, window=UNIT)
    assert nc_spectrum(prob).eigenvalues(0) == [F(1, 4), F(3, 4)]


def test_absolute_complex_shifts_degree_and_eigenvalue() -> None:
    prob = NCProblem(1, (1,), (1,), {1: 2}, window=UNIT, complex="absolute")
    spectrum = nc_spectrum(prob)
    assert spectrum.eigenvalues(1) == [F(-1), F(-1, 2)]
    assert spectrum.eigenvalues(0) == []


def test_degree_bound_instead_of_window() -> None:
    prob = NCProblem(1, (1,), (1,), {1: 3}, degree_bound=4)
    assert nc_spectrum(prob).eigenvalues(0) == [F(k, 3) for k in range(5)]


def test_unbounded_enumeration_is_rejected() -> None:
    with pytest.raises(WindowUnbounded):
        nc_spectrum(NCProblem(1, (1,), (1,), {1: 2}))


def test_nearby_cycle_stalks_of_a_cusp_monomial() -> None:
    prob = NCProblem(2, (1, 2), (1, 2), {1: 2, 2: 3}, window=UNIT)
    assert psi_stalk_dims(prob, F(0)) == {0: 1, 1: 1}
    assert psi_stalk_dims(prob, F(1, 2)) == {0: 0, 1: 0}
    with pytest.raises(InvalidProblem):
        psi_stalk_dims(prob, F(1))


@pytest.mark.parametrize(
    "exponents",
    [{1: 2, 2: 3}, {1: 4, 2: 6}, {1: 1, 2: 2, 3: 3}, {1: 5}],
)
def test_choice_of_i0_does_not_matter(exponents: dict) -> None:
    j = tuple(exponents)
    prob = NCProblem(len(j), j, j, exponents, window=UNIT)
    assert i0_independent(prob)
    for i in j:
        assert nc_spectrum(prob.with_i0(i)).same_spectrum(nc_spectrum(prob))


def test_scaling_the_exponents_rescales_the_eigenvalues() -> None:
    for prob in (
        NCProblem(1, (1,), (1,), {1: 3}, window=UNIT),
        NCProblem(2, (1, 2), (1, 2), {1: 2, 2: 4}, window=UNIT),
    ):
        scaled = prob.scaled(2)
        expected = [(v / 2, p, m) for v, p, m in nc_spectrum(prob).table()]
        assert nc_spectrum(scaled).table() == expected


@pytest.mark.parametrize(
    "prob",
    [
        NCProblem(1, (1,), (1,), {1: 3}, window=UNIT),
        NCProblem(2, (1, 2), (1, 2), {1: 2, 2: 2}, window=UNIT),
        NCProblem(3, (1, 2), (1, 2, 3), {1: 1, 2: 1}, window=UNIT),
    ],
)
def test_koszul_complex_agrees_with_the_formula(prob: NCProblem) -> None:
    spectrum = nc_spectrum(prob)
    truncation = max(prob.exponents.values())
    for value, degree, mult in spectrum.table():
        assert koszul_oracle(prob, value, truncation)[degree] == mult


def test_invalid_problems() -> None:
    with pytest.raises(EmptyJ):
        NCProblem(2, (), (1,), {})
    with pytest.raises(InvalidProblem):
        NCProblem(1, (1,), (1,), {1: 0}, window=UNIT)
    with pytest.raises(InvalidProblem):
        NCProblem(1, (1,), (1,), {1: 2}, residues={1: F(3, 2)}, window=UNIT)
    with pytest.raises(InvalidProblem):
        NCProblem(2, (1,), (1,), {1: 2}, i0=2, window=UNIT)
    with pytest.raises(InvalidProblem):
        NCProblem(1, (1,), (1,), {1: 2}, window=(F(1), F(0)))
