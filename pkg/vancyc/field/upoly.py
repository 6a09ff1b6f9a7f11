"""Univariate polynomials over the active scalar field, backed by ``sympy.Poly``.

The public face is a low-first coefficient tuple of :data:`Scalar` values; the
arithmetic (division, gcd, extended gcd, factorization) is sympy's, over
``QQ`` or over the extension's ``AlgebraicField``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, List, Optional, Sequence, Tuple

from sympy import Poly, Symbol
from sympy.polys.domains import QQ

from .scalars import (
    NumberField,
    Scalar,
    domain_of,
    field_of,
    from_domain,
    join_fields,
    poly_text,
    to_domain,
)

_X = Symbol("x")


class UPoly:
    """Immutable univariate polynomial; ``coeffs[k]`` is the coefficient of ``var**k``."""

    __slots__ = ("rep", "number_field", "var")

    def __init__(self, coeffs: Sequence[Any] = (), var: str = "λ") -> None:
        values = tuple(coeffs)
        field = field_of(values)
        high = [to_domain(c, field) for c in reversed(values)]
        self.rep = Poly(high or [0], _X, domain=domain_of(field))
        self.number_field = field
        self.var = var

    @classmethod
    def from_poly(cls, rep: Poly, field: Optional[NumberField], var: str = "λ") -> "UPoly":
        obj = cls.__new__(cls)
        obj.rep = rep
        obj.number_field = field
        obj.var = var
        return obj

    def _new(self, rep: Poly, field: Optional[NumberField]) -> "UPoly":
        return UPoly.from_poly(rep, field, self.var)

    def renamed(self, var: str) -> "UPoly":
        return UPoly.from_poly(self.rep, self.number_field, var)

    # ------------------------------------------------------------------
    @classmethod
    def constant(cls, value: Any, var: str = "λ") -> "UPoly":
        return cls((value,), var)

    @classmethod
    def monomial(cls, degree: int, coefficient: Any = 1, var: str = "λ") -> "UPoly":
        return cls(tuple([0] * degree + [coefficient]), var)

    @classmethod
    def linear_factor(cls, root: Any, var: str = "λ") -> "UPoly":
        """Return ``var - root``."""

        return cls((-root, 1), var)

    # ------------------------------------------------------------------
    @property
    def coeffs(self) -> Tuple[Scalar, ...]:
        high = [] if self.rep.is_zero else self.rep.rep.to_list()
        return tuple(from_domain(c, self.number_field) for c in reversed(high))

    @property
    def degree(self) -> int:
        return -1 if self.rep.is_zero else int(self.rep.degree())

    @property
    def leading(self) -> Any:
        return from_domain(self.rep.LC(), self.number_field)

    def is_zero(self) -> bool:
        return bool(self.rep.is_zero)

    def is_monic(self) -> bool:
        return not self.rep.is_zero and self.rep.LC() == self.rep.get_domain().one

    def is_rational(self) -> bool:
        if self.number_field is None:
            return True
        return all(c.is_ground for c in self.rep.rep.to_list())

    def coefficient(self, k: int) -> Any:
        coeffs = self.coeffs
        return coeffs[k] if 0 <= k < len(coeffs) else Fraction(0)

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        return self._new(self.rep.monic(), self.number_field)

    # ------------------------------------------------------------------
    def _unify(self, other: Any) -> Tuple[Poly, Poly, Optional[NumberField]]:
        if not isinstance(other, UPoly):
            other = UPoly((other,), self.var)
        field = join_fields(self.number_field, other.number_field)
        domain = domain_of(field)
        return self.rep.set_domain(domain), other.rep.set_domain(domain), field

    def __add__(self, other: Any) -> "UPoly":
        a, b, field = self._unify(other)
        return self._new(a + b, field)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return self._new(-self.rep, self.number_field)

    def __sub__(self, other: Any) -> "UPoly":
        a, b, field = self._unify(other)
        return self._new(a - b, field)

    def __rsub__(self, other: Any) -> "UPoly":
        a, b, field = self._unify(other)
        return self._new(b - a, field)

    def __mul__(self, other: Any) -> "UPoly":
        a, b, field = self._unify(other)
        return self._new(a * b, field)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "UPoly":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        return self._new(self.rep**exponent, self.number_field)

    def __divmod__(self, other: "UPoly") -> Tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a, b, field = self._unify(other)
        quotient, remainder = a.div(b)
        return self._new(quotient, field), self._new(remainder, field)

    def __floordiv__(self, other: "UPoly") -> "UPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UPoly") -> "UPoly":
        return divmod(self, other)[1]

    def __call__(self, x: Any) -> Any:
        result: Any = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def derivative(self) -> "UPoly":
        return self._new(self.rep.diff(_X), self.number_field)

    # ------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        return poly_text(self.coeffs, self.var)

    def __repr__(self) -> str:
        return f"UPoly({self})"


def poly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic greatest common divisor."""

    pa, pb, field = a._unify(b)
    if pa.is_zero and pb.is_zero:
        return a._new(pa, field)
    return a._new(pa.gcd(pb).monic(), field)


def extended_gcd(a: UPoly, b: UPoly) -> Tuple[UPoly, UPoly, UPoly]:
    """Return ``(g, x, y)`` with ``a*x + b*y = g`` and ``g`` monic."""

    pa, pb, field = a._unify(b)
    if pa.is_zero and pb.is_zero:
        zero = a._new(pa, field)
        return zero, zero, zero
    x, y, g = pa.gcdex(pb)
    return a._new(g, field), a._new(x, field), a._new(y, field)


def factor_over_rationals(poly: UPoly) -> List[Tuple[UPoly, int]]:
    """Factor a polynomial with rational coefficients into monic irreducibles over ℚ.

    Output is sorted by degree, then by coefficients, so callers see a
    deterministic order.
    """

    if not poly.is_rational():
        raise ValueError("factor_over_rationals needs rational coefficients")
    if poly.degree < 1:
        return []
    rational = Poly([to_domain(c, None) for c in reversed(poly.coeffs)], _X, domain=QQ)
    _, factors = rational.factor_list()
    out: List[Tuple[UPoly, int]] = []
    for factor, multiplicity in factors:
        monic = UPoly.from_poly(factor.set_domain(QQ).monic(), None, poly.var)
        out.append((monic, int(multiplicity)))
    out.sort(key=lambda item: (item[0].degree, tuple(item[0].coeffs)))
    return out


def rational_roots(poly: UPoly) -> List[Tuple[Fraction, int]]:
    """Rational roots with multiplicity, ascending."""

    roots = [
        (-factor.coeffs[0], mult) for factor, mult in factor_over_rationals(poly) if factor.degree == 1
    ]
    return sorted(roots)


def from_roots(roots: Iterable[Any], var: str = "λ") -> UPoly:
    result = UPoly((1,), var)
    for root in roots:
        result = result * UPoly.linear_factor(root, var)
    return result


__all__ = [
    "UPoly",
    "extended_gcd",
    "factor_over_rationals",
    "from_roots",
    "poly_gcd",
    "rational_roots",
]
