"""Exact scalars: rationals and one simple algebraic extension ℚ[s]/(p).

Rationals surface as :class:`fractions.Fraction` values. Internally every
computation runs in a sympy domain: ``QQ`` for rationals, and a sympy
``AlgebraicField`` for the extension, whose elements (``ANP``) are wrapped
by :class:`AlgebraicElement`. Mixed arithmetic promotes rationals into the
extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Any, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import CRootOf, Poly, Symbol
from sympy.polys.domains import QQ
from sympy.polys.domains.algebraicfield import AlgebraicField
from sympy.polys.polyclasses import ANP

if TYPE_CHECKING:
    from .upoly import UPoly

GENERATOR_NAME = "s"
GENERATOR = Symbol(GENERATOR_NAME)


# ---------------------------------------------------------------------------
# conversions between Fraction and sympy domain elements
# ---------------------------------------------------------------------------


def qq(value: Any) -> Any:
    """Return ``value`` as an element of sympy's ``QQ``."""

    if isinstance(value, AlgebraicElement):
        value = value.to_fraction()
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if QQ.of_type(value):
        return value
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def from_qq(value: Any) -> Fraction:
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


@lru_cache(maxsize=None)
def _extension(modulus: Tuple[Fraction, ...]) -> Tuple[AlgebraicField, Poly]:
    poly = Poly([qq(c) for c in reversed(modulus)], GENERATOR, domain=QQ)
    if not poly.is_irreducible:
        raise ValueError(f"extension modulus {poly.as_expr()} is reducible over the rationals")
    domain = QQ.algebraic_field((poly, CRootOf(poly, 0)), alias=GENERATOR_NAME)
    return domain, poly


# ---------------------------------------------------------------------------
# number field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumberField:
    """ℚ[s]/(modulus) for a monic irreducible ``modulus`` of degree ≥ 2."""

    modulus: "UPoly"

    def __post_init__(self) -> None:
        if not self.modulus.is_monic() or self.modulus.degree < 2:
            raise ValueError("extension modulus must be monic of degree >= 2")
        if not self.modulus.is_rational():
            raise ValueError("nested extensions are not supported")
        object.__setattr__(self, "modulus", self.modulus.renamed(GENERATOR_NAME))
        _extension(self._key)

    @property
    def _key(self) -> Tuple[Fraction, ...]:
        return tuple(to_fraction(c) for c in self.modulus.coeffs)

    @property
    def domain(self) -> AlgebraicField:
        """The sympy ``AlgebraicField`` doing the arithmetic."""

        return _extension(self._key)[0]

    @property
    def degree(self) -> int:
        return self.modulus.degree

    @property
    def generator(self) -> "AlgebraicElement":
        return AlgebraicElement(self, self.domain.unit)

    @property
    def zero(self) -> "AlgebraicElement":
        return AlgebraicElement(self, self.domain.zero)

    @property
    def one(self) -> "AlgebraicElement":
        return AlgebraicElement(self, self.domain.one)

    def element(self, coeffs: Iterable[Any]) -> "AlgebraicElement":
        """Element with power-basis coordinates ``coeffs`` (low first), reduced."""

        high = [qq(c) for c in reversed(tuple(coeffs))]
        if len(high) > self.degree:
            modulus = _extension(self._key)[1]
            high = Poly(high, GENERATOR, domain=QQ).rem(modulus).rep.to_list()
        return AlgebraicElement(self, self.domain.new(high))

    def wrap(self, rep: ANP) -> "AlgebraicElement":
        return AlgebraicElement(self, rep)

    def __call__(self, value: Any) -> "AlgebraicElement":
        return lift(value, self)

    def minimal_polynomial_text(self) -> str:
        return str(self.modulus)


@dataclass(frozen=True, eq=False)
class AlgebraicElement:
    """Element of a :class:`NumberField`, a thin wrapper over a sympy ``ANP``."""

    field: NumberField
    rep: ANP

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        """Power-basis coordinates, low first, padded to the field degree."""

        low = [from_qq(c) for c in reversed(self.rep.to_list())]
        low.extend([Fraction(0)] * (self.field.degree - len(low)))
        return tuple(low)

    # ------------------------------------------------------------------
    def _coerce(self, other: Any) -> Any:
        if isinstance(other, AlgebraicElement):
            if other.field != self.field:
                raise ValueError("elements of different extensions cannot be combined")
            return other.rep
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.domain.convert_from(qq(other), QQ)
        return None

    # ------------------------------------------------------------------
    def __add__(self, other: Any) -> "AlgebraicElement":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return AlgebraicElement(self.field, self.rep + rhs)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraicElement":
        return AlgebraicElement(self.field, -self.rep)

    def __sub__(self, other: Any) -> "AlgebraicElement":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return AlgebraicElement(self.field, self.rep - rhs)

    def __rsub__(self, other: Any) -> "AlgebraicElement":
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return AlgebraicElement(self.field, lhs - self.rep)

    def __mul__(self, other: Any) -> "AlgebraicElement":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return AlgebraicElement(self.field, self.rep * rhs)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicElement":
        if not self:
            raise ZeroDivisionError("inverse of zero in number field")
        return AlgebraicElement(self.field, self.field.domain.one / self.rep)

    def __truediv__(self, other: Any) -> "AlgebraicElement":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if not rhs:
            raise ZeroDivisionError("division by zero in number field")
        return AlgebraicElement(self.field, self.rep / rhs)

    def __rtruediv__(self, other: Any) -> "AlgebraicElement":
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return AlgebraicElement(self.field, lhs) * self.inverse()

    def __pow__(self, exponent: int) -> "AlgebraicElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return AlgebraicElement(self.field, self.rep**exponent)

    # ------------------------------------------------------------------
    def __bool__(self) -> bool:
        return not self.rep.is_zero

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AlgebraicElement):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.to_fraction())
        return hash((self.field.modulus, self.coeffs))

    def is_rational(self) -> bool:
        return bool(self.rep.is_ground)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        coeffs = self.rep.to_list()
        return from_qq(coeffs[0]) if coeffs else Fraction(0)

    def sort_key(self) -> Tuple[Fraction, ...]:
        return tuple(reversed(self.coeffs))

    def __str__(self) -> str:
        return poly_text(self.coeffs, GENERATOR_NAME)

    def __repr__(self) -> str:
        return f"AlgebraicElement({self}; {self.field.modulus} = 0)"


Scalar = Union[Fraction, AlgebraicElement]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def as_scalar(value: Any) -> Scalar:
    """Promote ints (and rational strings) to Fraction; pass extension elements through."""

    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, AlgebraicElement):
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if QQ.of_type(value):
        return from_qq(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def is_rational(value: Any) -> bool:
    if isinstance(value, AlgebraicElement):
        return value.is_rational()
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def to_fraction(value: Any) -> Fraction:
    if isinstance(value, AlgebraicElement):
        return value.to_fraction()
    return Fraction(value)


def lift(value: Any, field: Optional[NumberField]) -> Scalar:
    """Embed ``value`` in ``field`` (``None`` means ℚ)."""

    if field is None:
        if isinstance(value, AlgebraicElement):
            return value.to_fraction()
        return as_scalar(value)
    if isinstance(value, AlgebraicElement):
        if value.field != field:
            raise ValueError("elements of different extensions cannot be combined")
        return value
    return field.element((Fraction(value),))


def field_of(values: Iterable[Any]) -> Optional[NumberField]:
    """Return the extension the values live in, or ``None`` for ℚ."""

    found: Optional[NumberField] = None
    for value in values:
        if isinstance(value, AlgebraicElement):
            if found is None:
                found = value.field
            elif found != value.field:
                raise ValueError("values from different extensions")
    return found


def join_fields(*fields: Optional[NumberField]) -> Optional[NumberField]:
    found: Optional[NumberField] = None
    for candidate in fields:
        if candidate is None:
            continue
        if found is not None and found != candidate:
            raise ValueError("values from different extensions")
        found = candidate
    return found


def domain_of(field: Optional[NumberField]) -> Any:
    """The sympy domain for ``field``: ``QQ`` or the algebraic field."""

    return QQ if field is None else field.domain


def to_domain(value: Any, field: Optional[NumberField]) -> Any:
    """Convert a scalar to an element of :func:`domain_of` ``field``."""

    if field is None:
        return qq(value)
    if isinstance(value, AlgebraicElement):
        if value.field != field:
            raise ValueError("elements of different extensions cannot be combined")
        return value.rep
    if isinstance(value, ANP):
        return value
    return field.domain.convert_from(qq(value), QQ)


def from_domain(value: Any, field: Optional[NumberField]) -> Scalar:
    """Inverse of :func:`to_domain`."""

    if field is None:
        return from_qq(value)
    return AlgebraicElement(field, value)


def format_scalar(value: Any) -> str:
    """Exact text: ``"5/6"``, ``"-2"`` or a polynomial in ``s``."""

    if isinstance(value, AlgebraicElement):
        if value.is_rational():
            return str(value.to_fraction())
        return str(value)
    return str(Fraction(value))


def poly_text(coeffs: Sequence[Any], var: str) -> str:
    """Render low-first coefficients as ``"λ^2 - (s + 1)*λ + 3"``."""

    parts: List[str] = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        text = format_scalar(c)
        negative = text.startswith("-") and " " not in text
        magnitude = text[1:] if negative else text
        if " " in magnitude:
            magnitude = f"({magnitude})"
        if k == 0:
            term = magnitude
        else:
            mono = var if k == 1 else f"{var}^{k}"
            term = mono if magnitude == "1" else f"{magnitude}*{mono}"
        if not parts:
            parts.append(f"-{term}" if negative else term)
        else:
            parts.append(f"- {term}" if negative else f"+ {term}")
    return " ".join(parts) if parts else "0"


def scalar_sort_key(value: Any) -> Tuple[int, Tuple[Fraction, ...]]:
    """Rationals first (by value), extension elements after (by coordinates)."""

    if is_rational(value):
        return (0, (to_fraction(value),))
    return (1, value.sort_key())


def fractional_part(value: Fraction) -> Fraction:
    return value - (value.numerator // value.denominator)


__all__ = [
    "AlgebraicElement",
    "NumberField",
    "Scalar",
    "as_scalar",
    "domain_of",
    "field_of",
    "format_scalar",
    "fractional_part",
    "from_domain",
    "from_qq",
    "is_rational",
    "join_fields",
    "lift",
    "parse_rational",
    "poly_text",
    "qq",
    "scalar_sort_key",
    "to_domain",
    "to_fraction",
]
