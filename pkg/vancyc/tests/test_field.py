"""Unit tests for exact scalars, matrices and spectral linear algebra."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from sympy import Poly
from sympy.polys.domains import QQ
from sympy.polys.domains.algebraicfield import AlgebraicField
from sympy.polys.matrices import DomainMatrix

from vancyc.errors import IrreducibleFactor, SingularSylvester
from vancyc.field import (
    ExtensionPolicy,
    Matrix,
    NumberField,
    UPoly,
    char_poly,
    evaluate_at_matrix,
    factor_over_rationals,
    format_scalar,
    fractional_part,
    jordan_data,
    rational_roots,
    solve_sylvester,
    split_spectrum,
)
from vancyc.field.upoly import extended_gcd, from_roots, poly_gcd

F = Fraction


def _random_matrix(rng: random.Random, n: int) -> Matrix:
    return Matrix.from_rows(
        [[F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
    )


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def test_upoly_arithmetic_and_text() -> None:
    p = UPoly((F(-1), F(0), F(1)))
    q = UPoly.linear_factor(1)
    assert str(p) == "λ^2 - 1"
    quotient, remainder = divmod(p, q)
    assert quotient == UPoly((F(1), F(1)))
    assert remainder.is_zero()
    assert p(F(3)) == 8
    assert p.derivative() == UPoly((0, 2))


def test_gcd_and_bezout() -> None:
    a = from_roots([1, 2, 3])
    b = from_roots([2, 3, 5])
    g = poly_gcd(a, b)
    assert g == from_roots([2, 3])
    g2, x, y = extended_gcd(a, b)
    assert g2 == g
    assert a * x + b * y == g


def test_factor_over_rationals_is_sorted_and_monic() -> None:
    poly = UPoly((F(-64), 0, F(2))) * UPoly.linear_factor(F(1, 2)) ** 2
    factors = factor_over_rationals(poly)
    assert factors == [(UPoly.linear_factor(F(1, 2)), 2), (UPoly((F(-32), 0, 1)), 1)]
    assert rational_roots(poly) == [(F(1, 2), 2)]


# ---------------------------------------------------------------------------
# number fields
# ---------------------------------------------------------------------------


def test_number_field_arithmetic() -> None:
    field = NumberField(UPoly((F(-2), 0, 1)))
    s = field.generator
    assert s * s == 2
    assert (s + 1) * (s - 1) == 1
    inverse = (s + 3).inverse()
    assert (s + 3) * inverse == 1
    assert format_scalar(s * 3 - F(1, 2)) == "3*s - 1/2"
    assert hash(field.element((F(5),))) == hash(F(5))
    assert field.minimal_polynomial_text() == "s^2 - 2"


def test_number_field_rejects_bad_modulus() -> None:
    with pytest.raises(ValueError):
        NumberField(UPoly((F(1), F(2))))


def test_fractional_part_of_negative_values() -> None:
    assert fractional_part(F(-1, 4)) == F(3, 4)
    assert fractional_part(F(7, 6)) == F(1, 6)
    assert fractional_part(F(2)) == 0


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def test_matrix_inverse_and_kernel() -> None:
    m = Matrix.from_rows([[1, 2], [3, 4]])
    assert m @ m.inverse() == Matrix.identity(2)
    singular = Matrix.from_rows([[1, 2], [2, 4]])
    assert singular.rank() == 1
    assert singular.kernel() == [(F(1), F(-1, 2))]
    with pytest.raises(ZeroDivisionError):
        singular.inverse()


def test_matrix_blocks() -> None:
    a = Matrix.diagonal([1, 2])
    b = Matrix.scalar(1, 7)
    block = Matrix.block_diagonal([a, b])
    assert block.shape == (3, 3)
    assert block.diagonal_entries() == (1, 2, 7)
    assert block.submatrix([0, 2], [0, 2]) == Matrix.diagonal([1, 7])


# ---------------------------------------------------------------------------
# spectral tools
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cayley_hamilton(n: int) -> None:
    rng = random.Random(n)
    m = _random_matrix(rng, n)
    chi = char_poly(m)
    assert chi.degree == n and chi.is_monic()
    assert evaluate_at_matrix(chi, m).is_zero()


def test_char_poly_of_triangular_matrix() -> None:
    m = Matrix.from_rows([[2, 5, 1], [0, 3, 4], [0, 0, 2]])
    assert char_poly(m) == from_roots([2, 2, 3])


def test_split_spectrum_rational() -> None:
    m = Matrix.from_rows([[0, -2], [-2, 0]])
    split = split_spectrum(m)
    assert split.eigenvalues == (F(-2), F(2))
    q = split.change_of_basis()
    assert (q.inverse() @ m @ q).is_diagonal()


def test_split_spectrum_needs_extension() -> None:
    m = Matrix.from_rows([[0, -8], [-4, 0]])
    with pytest.raises(IrreducibleFactor):
        split_spectrum(m)
    split = split_spectrum(m, ExtensionPolicy.ALLOW_ONE_EXTENSION)
    assert split.field is not None
    assert split.field.minimal_polynomial_text() == "s^2 - 32"
    assert split.eigenvalues == (split.field.generator,)
    assert split.remainder.cols == 1


def test_split_spectrum_refuses_second_extension() -> None:
    m = Matrix.block_diagonal(
        [Matrix.from_rows([[0, 2], [1, 0]]), Matrix.from_rows([[0, 3], [1, 0]])]
    )
    with pytest.raises(IrreducibleFactor):
        split_spectrum(m, ExtensionPolicy.ALLOW_ONE_EXTENSION)


def test_sylvester_solution() -> None:
    a = Matrix.from_rows([[1, 1], [0, 2]])
    b = Matrix.from_rows([[-1, 0], [3, 4]])
    c = Matrix.from_rows([[1, F(1, 2)], [0, 5]])
    x = solve_sylvester(a, b, c)
    assert a @ x - x @ b == c


def test_sylvester_with_shared_eigenvalue_is_singular() -> None:
    a = Matrix.diagonal([1, 2])
    b = Matrix.diagonal([2, 3])
    with pytest.raises(SingularSylvester):
        solve_sylvester(a, b, Matrix.identity(2))


def test_sylvester_empty_blocks() -> None:
    x = solve_sylvester(Matrix.zeros(0, 0), Matrix.scalar(1, 1), Matrix.zeros(0, 1))
    assert x.shape == (0, 1)


def test_jordan_data_counts_blocks() -> None:
    m = Matrix.from_rows([[3, 1, 0, 0], [0, 3, 0, 0], [0, 0, 3, 0], [0, 0, 0, 5]])
    data = jordan_data(m)
    assert [(e.eigenvalue, e.sizes) for e in data] == [(F(3), (2, 1)), (F(5), (1,))]


# ---------------------------------------------------------------------------
# sympy backing
# ---------------------------------------------------------------------------


def test_arithmetic_runs_in_sympy_domains() -> None:
    m = Matrix.from_rows([[1, F(1, 2)], [0, 3]])
    assert isinstance(m.rep, DomainMatrix)
    assert m.rep.domain == QQ
    p = UPoly((F(-2), 0, 1))
    assert isinstance(p.rep, Poly)
    assert p.rep.get_domain() == QQ
    field = NumberField(p)
    assert isinstance(field.domain, AlgebraicField)
    assert field.domain.mod.to_list() == [QQ(1), QQ(0), QQ(-2)]
    lifted = m.lift(field)
    assert lifted.rep.domain == field.domain
    assert lifted.field == field
    assert lifted == m


def test_number_field_rejects_reducible_modulus() -> None:
    with pytest.raises(ValueError, match="reducible"):
        NumberField(UPoly((F(-4), 0, 1)))


def test_mixed_rational_and_extension_arithmetic() -> None:
    field = NumberField(UPoly((F(-2), 0, 1)))
    s = field.generator
    m = Matrix.from_rows([[0, 2], [1, 0]])
    shifted = m.minus_scalar(s)
    assert shifted.field == field
    assert shifted.rank() == 1
    assert shifted.kernel() == [(F(1), s / 2)]
    assert (m.scale(s) @ Matrix.identity(2)).trace() == 0
    poly = UPoly((F(-2), 0, 1)) // UPoly.linear_factor(s)
    assert poly == UPoly.linear_factor(-s)
    assert str(poly) == "λ + s"
