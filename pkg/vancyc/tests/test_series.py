"""Tests for truncated matrix series and the gauge action of ``t = A + u²∂_u``."""

from __future__ import annotations

from fractions import Fraction

import pytest

from vancyc.errors import PrecisionExhausted
from vancyc.field import Matrix
from vancyc.series import (
    MatrixSeries,
    conjugate_constant,
    gauge,
    naive_conjugate,
    polynomial_gauge,
    shear,
    shear_gauge,
)

F = Fraction


def _series(precision: int = 6) -> MatrixSeries:
    return MatrixSeries.from_list(
        [
            Matrix.from_rows([[0, 0], [1, 0]]),
            Matrix.from_rows([[F(1, 3), 2], [0, F(2, 3)]]),
            Matrix.from_rows([[1, -1], [F(1, 2), 0]]),
        ],
        precision,
    )


def test_precision_is_tracked_through_products() -> None:
    a = _series(4)
    b = MatrixSeries.from_list([Matrix.identity(2), Matrix.identity(2)], 3)
    assert (a @ b).precision == 3
    assert (a.shift(2) @ b).precision == 5
    assert (a + b).precision == 3
    with pytest.raises(PrecisionExhausted):
        b.coefficient(4)


def test_exact_series_stay_exact() -> None:
    g = polynomial_gauge(Matrix.identity(2), 1, 2)
    assert (g @ g).precision is None
    assert (g @ g).coefficient(2) == Matrix.identity(2)


def test_inverse_to_precision() -> None:
    g = MatrixSeries.from_list([Matrix.from_rows([[2, 1], [1, 1]]), Matrix.from_rows([[0, 1], [1, 0]])], 6)
    product = g @ g.inverse()
    assert product.agrees_with(MatrixSeries.identity(2), 6)


def test_gauge_round_trip() -> None:
    a = _series()
    g = polynomial_gauge(Matrix.from_rows([[1, 2], [0, -1]]), 1, 2)
    g_inverse = g.inverse_to(6)
    moved = gauge(a, g, g_inverse)
    assert not moved.agrees_with(a, 6)
    assert gauge(moved, g_inverse, g).agrees_with(a, 6)


def test_naive_conjugation_misses_the_derivative_term() -> None:
    a = _series()
    g = polynomial_gauge(Matrix.from_rows([[0, 1], [0, 0]]), 1, 2)
    g_inverse = g.inverse_to(6)
    correct = gauge(a, g, g_inverse)
    naive = naive_conjugate(a, g, g_inverse)
    assert correct.coefficient(1) == naive.coefficient(1)
    assert correct.coefficient(2) != naive.coefficient(2)


def test_constant_gauge_is_plain_conjugation() -> None:
    a = _series()
    q = Matrix.from_rows([[1, 1], [1, -1]])
    via_gauge = gauge(a, MatrixSeries.constant(q), MatrixSeries.constant(q.inverse()))
    assert via_gauge.agrees_with(conjugate_constant(a, q), 6)


def test_shear_matches_diagonal_gauge() -> None:
    a = _series()
    lowered = [1]
    sheared = shear(a, lowered)
    assert sheared.precision == 5
    via_gauge = gauge(a, shear_gauge(2, lowered), shear_gauge(2, lowered, power=1))
    assert via_gauge.agrees_with(sheared, 5)
    # the lowered direction loses one from its residue
    assert sheared.coefficient(1)[1, 1] == F(2, 3) - 1


def test_shear_refuses_to_create_a_pole() -> None:
    a = _series()
    with pytest.raises(ValueError):
        shear(a, [0])


def test_synthetic_shear_removes_resonance() -> None:
    # t = R u with R = [[-1/4, 1], [0, 3/4]]; lowering e2 gives R' = -1/4 I
    r = Matrix.from_rows([[F(-1, 4), 1], [0, F(3, 4)]])
    a = MatrixSeries.monomial(r, 1).with_precision(4)
    q = Matrix.from_rows([[1, 1], [0, 1]])
    diagonal = conjugate_constant(a, q)
    assert diagonal.coefficient(1) == Matrix.diagonal([F(-1, 4), F(3, 4)])
    result = shear(diagonal, [1])
    assert result.coefficient(0).is_zero()
    assert result.coefficient(1) == Matrix.scalar(2, F(-1, 4))
