"""Tests for sparse polynomials and the expression grammar."""

from __future__ import annotations

from fractions import Fraction

import pytest
from sympy.polys.domains import QQ
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement

from vancyc.errors import PolynomialSyntaxError, UnknownVariable
from vancyc.mpoly import MPoly, degrevlex_key, infer_variables, parse


def test_parse_and_print_canonically() -> None:
    f = parse("x^3 - 3*x")
    assert f.variables == ("x",)
    assert str(f) == "x^3 - 3*x"
    g = parse("1/2 * x*y", ["x", "y"])
    assert str(g) == "1/2*x*y"
    assert parse(str(g), ["x", "y"]) == g


def test_rational_literals_allow_spaces() -> None:
    assert parse("3 / 4 * x") == parse("3/4*x")
    assert parse("x").coefficient((1,)) == 1


def test_unicode_minus_and_unary_signs() -> None:
    assert parse("x − y") == parse("x - y")
    assert parse("-(-x)") == parse("x")
    assert parse("+x^2") == parse("x^2")


def test_variables_inferred_in_order_of_appearance() -> None:
    assert infer_variables("y^2 + x^3 + y") == ["y", "x"]
    f = parse("y^2 + x^3")
    assert f.variables == ("y", "x")


def test_explicit_variable_order() -> None:
    f = parse("x^2 + y^3", ["x", "y", "z"])
    assert f.nvars == 3
    assert f.degree_in(2) == 0


def test_syntax_error_reports_offset() -> None:
    with pytest.raises(PolynomialSyntaxError) as info:
        parse("x + *y")
    assert info.value.position == 4
    assert info.value.reason == "syntax_error"


@pytest.mark.parametrize(
    "text",
    ["", "x +", "x^y", "x^-1", "x/y", "(x + y", "2x$", "x^(2)"],
)
def test_malformed_expressions_are_rejected(text: str) -> None:
    with pytest.raises(PolynomialSyntaxError):
        parse(text, ["x", "y"])


def test_unknown_variable() -> None:
    with pytest.raises(UnknownVariable) as info:
        parse("x + w", ["x", "y"])
    assert info.value.name == "w"
    assert info.value.position == 4


def test_ring_operations() -> None:
    x = MPoly.variable("x", ["x", "y"])
    y = MPoly.variable("y", ["x", "y"])
    f = (x + y) ** 3
    assert f == parse("x^3 + 3*x^2*y + 3*x*y^2 + y^3", ["x", "y"])
    assert (f - f).is_zero()
    assert (x * y).total_degree() == 2
    assert (x + 1) * (x - 1) == x**2 - 1


def test_derivatives_and_evaluation() -> None:
    f = parse("x^2*y + y^3")
    assert f.partial_derivative("x") == parse("2*x*y", ["x", "y"])
    assert f.partial_derivative(1) == parse("x^2 + 3*y^2", ["x", "y"])
    assert f.evaluate({"x": 2, "y": 1}) == 5
    assert f.evaluate([Fraction(1, 2), 2]) == Fraction(17, 2)


def test_degrevlex_order() -> None:
    # x^2 > xy > y^2 > x > y > 1; ties broken against the last variable
    monos = [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    ordered = sorted(monos, key=degrevlex_key, reverse=True)
    assert ordered == [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]
    f = parse("y^3 + x*y*z + x^2*z", ["x", "y", "z"])
    assert f.leading_monomial() == (0, 3, 0)


def test_zero_coefficients_are_dropped() -> None:
    f = MPoly(("x",), {(1,): 0, (2,): Fraction(3)})
    assert f.terms == {(2,): Fraction(3)}
    with pytest.raises(ValueError):
        MPoly(("x",), {(1, 2): 1})


def test_polynomials_live_in_a_degrevlex_sympy_ring() -> None:
    f = parse("x^2*z + y^3 + x*y*z", ["x", "y", "z"])
    assert isinstance(f.rep, PolyElement)
    assert f.rep.ring.order == grevlex
    assert f.rep.ring.domain == QQ
    assert [m for m, _ in f.sorted_terms()] == [m for m, _ in f.rep.terms()]
    g = parse("x + y", ["x", "y", "z"])
    assert (f * g).rep == f.rep * g.rep
