"""Tests for the t-action on the Brieskorn lattice."""

from __future__ import annotations

from fractions import Fraction

import pytest

from vancyc.brieskorn import (
    MicroModule,
    multiplication_matrix,
    quasi_homogeneous_exponents,
    quasi_homogeneous_weights,
    reduce_form,
    t_matrix,
)
from vancyc.field import Matrix
from vancyc.groebner import jacobian_ideal, milnor_data
from vancyc.mpoly import parse

F = Fraction


def test_cusp_t_matrix() -> None:
    module = t_matrix(parse("x^2 + y^3"), 4)
    assert module.dim == 2
    assert module.labels == ("1", "y")
    assert module.a0.is_zero()
    assert module.a(1) == Matrix.diagonal([F(5, 6), F(7, 6)])
    for k in range(2, 5):
        assert module.a(k).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_morse_residue_is_half_the_dimension(n: int) -> None:
    names = ["x", "y", "z", "w"][:n]
    f = parse(" + ".join(f"{v}^2" for v in names), names)
    module = t_matrix(f, 3)
    assert module.dim == 1
    assert module.a(1) == Matrix.scalar(1, F(n, 2))


def test_two_critical_points() -> None:
    module = t_matrix(parse("x^3 - 3*x"), 6, cross_check=False)
    assert module.a0 == Matrix.from_rows([[0, -2], [-2, 0]])
    assert module.a(1) == Matrix.diagonal([F(1, 3), F(2, 3)])


def test_order_zero_is_multiplication_by_f() -> None:
    f = parse("x^4 + y^2 + x*y")
    md = milnor_data(jacobian_ideal(f))
    module = t_matrix(f, 3, md=md, cross_check=False)
    assert module.a0 == multiplication_matrix(f, md)


def test_reduce_form_of_a_jacobian_multiple() -> None:
    f = parse("x^2 + y^3")
    md = milnor_data(jacobian_ideal(f))
    # x * f_x = 2x^2 reduces to u * d/dx(x) = u
    result = reduce_form(parse("2*x^2", ["x", "y"]), md, 3)
    assert result.order(0) == [0, 0]
    assert result.order(1) == [1, 0]
    assert result.order(2) == [0, 0]


def test_reduction_is_linear() -> None:
    f = parse("x^3 + x*y^2")
    md = milnor_data(jacobian_ideal(f))
    g1 = parse("x^3*y + y^4", ["x", "y"])
    g2 = parse("x^2*y^2 - x", ["x", "y"])
    lhs = reduce_form(g1 + g2.scale(3), md, 4)
    rhs = reduce_form(g1, md, 4) + reduce_form(g2, md, 4).scale(3)
    assert lhs == rhs


def test_quasi_homogeneous_weights() -> None:
    assert quasi_homogeneous_weights(parse("x^2 + y^3")) == (F(1, 2), F(1, 3))
    assert quasi_homogeneous_weights(parse("x^3 + x*y^2")) == (F(1, 3), F(1, 3))
    assert quasi_homogeneous_weights(parse("x^3 - 3*x")) is None
    f = parse("x^3 + x*y^2")
    md = milnor_data(jacobian_ideal(f))
    exponents = quasi_homogeneous_exponents((F(1, 3), F(1, 3)), md)
    assert sorted(exponents) == [F(2, 3), F(1), F(1), F(4, 3)]


@pytest.mark.parametrize("text", ["x^3 + y^4", "x^3 + x*y^2", "x^5 + y^2", "x^2*y + y^4"])
def test_quasi_homogeneous_cross_check_passes(text: str) -> None:
    module = t_matrix(parse(text), 5, cross_check=True)
    assert module.a0.is_zero()
    assert module.a(1).is_diagonal()


def test_threads_do_not_change_the_result() -> None:
    f = parse("x^4 + y^2 + x*y")
    assert t_matrix(f, 5, threads=1, cross_check=False) == t_matrix(
        f, 5, threads=3, cross_check=False
    )


def test_no_critical_points_gives_empty_module() -> None:
    module = t_matrix(parse("x + x^2*y"), 4)
    assert module.dim == 0
    assert module == MicroModule.empty(4, 2)
