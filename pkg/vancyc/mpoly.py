"""Sparse multivariate polynomials over exact scalars, with a small text grammar.

Arithmetic is sympy's sparse ``PolyElement`` in a ring built with
``ring(variables, QQ, grevlex)`` (or over the extension's ``AlgebraicField``).
The single monomial order is degrevlex, used both by the Gröbner engine and by
the printer (terms are printed from the largest monomial down).

Grammar::

    expr  := term (('+' | '-') term)*
    term  := unary ('*' unary)*
    unary := ('+' | '-') unary | power
    power := atom ('^' INTEGER)?
    atom  := NUMBER ('/' NUMBER)? | NAME | '(' expr ')'
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing, ring

from .errors import PolynomialSyntaxError, UnknownVariable
from .field.scalars import (
    NumberField,
    Scalar,
    as_scalar,
    domain_of,
    field_of,
    format_scalar,
    from_domain,
    join_fields,
    to_domain,
)

Monomial = Tuple[int, ...]

MAX_EXPONENT = 2**31 - 1


def degrevlex_key(mono: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Sort key: larger key means larger monomial in degrevlex."""

    return grevlex(mono)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    out = tuple(x + y for x, y in zip(a, b))
    if out and max(out) > MAX_EXPONENT:
        raise OverflowError("monomial exponent overflow")
    return out


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when ``a`` divides ``b``."""

    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_str(mono: Monomial, variables: Sequence[str]) -> str:
    parts = []
    for name, e in zip(variables, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


@lru_cache(maxsize=None)
def polynomial_ring(variables: Tuple[str, ...], field: Optional[NumberField] = None) -> PolyRing:
    """The degrevlex ring over ℚ (or ``field``) in ``variables``."""

    return ring(variables, domain_of(field), grevlex)[0]


class MPoly:
    """Immutable sparse polynomial in the named ``variables``."""

    __slots__ = ("variables", "rep", "number_field")

    variables: Tuple[str, ...]
    rep: PolyElement
    number_field: Optional[NumberField]

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, Any]) -> None:
        variables = tuple(variables)
        n = len(variables)
        values: Dict[Monomial, Scalar] = {}
        for mono, coeff in terms.items():
            if len(mono) != n:
                raise ValueError(f"exponent vector {mono} does not match {n} variables")
            if any(e < 0 for e in mono):
                raise ValueError("negative exponents are not polynomial")
            if max(mono, default=0) > MAX_EXPONENT:
                raise OverflowError("monomial exponent overflow")
            values[tuple(mono)] = as_scalar(coeff)
        field = field_of(values.values())
        R = polynomial_ring(variables, field)
        rep = R.from_dict({m: to_domain(c, field) for m, c in values.items()})
        self._set(variables, rep, field)

    def _set(self, variables: Tuple[str, ...], rep: PolyElement, field: Optional[NumberField]) -> None:
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "rep", rep)
        object.__setattr__(self, "number_field", field)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("MPoly is immutable")

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def from_element(
        cls, variables: Tuple[str, ...], rep: PolyElement, field: Optional[NumberField] = None
    ) -> "MPoly":
        obj = object.__new__(cls)
        obj._set(variables, rep, field)
        return obj

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        return cls.from_element(variables, polynomial_ring(variables).zero)

    @classmethod
    def constant(cls, value: Any, variables: Sequence[str]) -> "MPoly":
        return cls(tuple(variables), {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, mono: Monomial, variables: Sequence[str], coeff: Any = 1) -> "MPoly":
        return cls(tuple(variables), {tuple(mono): coeff})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        idx = variables.index(name)
        return cls.from_element(variables, polynomial_ring(variables).gens[idx])

    @classmethod
    def parse(cls, text: str, variables: Optional[Sequence[str]] = None) -> "MPoly":
        return parse(text, variables)

    def _wrap(self, rep: PolyElement, field: Optional[NumberField] = None) -> "MPoly":
        return MPoly.from_element(self.variables, rep, self.number_field if field is None else field)

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Scalar]:
        field = self.number_field
        return {mono: from_domain(c, field) for mono, c in self.rep.items()}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def field(self) -> Optional[NumberField]:
        return self.number_field

    def is_zero(self) -> bool:
        return not self.rep

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.rep)

    def __bool__(self) -> bool:
        return bool(self.rep)

    def __len__(self) -> int:
        return len(self.rep)

    def coefficient(self, mono: Monomial) -> Scalar:
        value = self.rep.get(tuple(mono))
        return Fraction(0) if value is None else from_domain(value, self.number_field)

    def sorted_terms(self, descending: bool = True) -> List[Tuple[Monomial, Scalar]]:
        field = self.number_field
        ordered = [(m, from_domain(c, field)) for m, c in self.rep.terms(grevlex)]
        return ordered if descending else ordered[::-1]

    def leading_monomial(self) -> Monomial:
        if not self.rep:
            raise ValueError("zero polynomial has no leading term")
        return self.rep.LM

    def leading_coefficient(self) -> Scalar:
        if not self.rep:
            raise ValueError("zero polynomial has no leading term")
        return from_domain(self.rep.LC, self.number_field)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.rep), default=-1)

    def degree_in(self, index: int) -> int:
        return max((m[index] for m in self.rep), default=-1)

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------
    def _check(self, other: "MPoly") -> None:
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def _lift(self, other: Any) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return MPoly.constant(other, self.variables)

    def _pair(self, other: Any) -> Tuple[PolyElement, PolyElement, Optional[NumberField]]:
        rhs = self._lift(other)
        field = join_fields(self.number_field, rhs.number_field)
        R = polynomial_ring(self.variables, field)
        return self.rep.set_ring(R), rhs.rep.set_ring(R), field

    def lifted(self, field: Optional[NumberField]) -> PolyElement:
        """``rep`` moved into the ring over ``field``."""

        return self.rep.set_ring(polynomial_ring(self.variables, field))

    def __add__(self, other: Any) -> "MPoly":
        a, b, field = self._pair(other)
        return self._wrap(a + b, field)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return self._wrap(-self.rep)

    def __sub__(self, other: Any) -> "MPoly":
        a, b, field = self._pair(other)
        return self._wrap(a - b, field)

    def __rsub__(self, other: Any) -> "MPoly":
        a, b, field = self._pair(other)
        return self._wrap(b - a, field)

    def scale(self, factor: Any) -> "MPoly":
        factor = as_scalar(factor)
        field = join_fields(self.number_field, field_of([factor]))
        return self._wrap(self.lifted(field).mul_ground(to_domain(factor, field)), field)

    def mul_term(self, mono: Monomial, coeff: Any) -> "MPoly":
        """Multiply by the single term ``coeff * x^mono``."""

        coeff = as_scalar(coeff)
        top = max((max(m, default=0) for m in self.rep), default=0)
        if top + max(mono, default=0) > MAX_EXPONENT:
            raise OverflowError("monomial exponent overflow")
        field = join_fields(self.number_field, field_of([coeff]))
        rep = self.lifted(field).mul_term((tuple(mono), to_domain(coeff, field)))
        return self._wrap(rep, field)

    def __mul__(self, other: Any) -> "MPoly":
        if not isinstance(other, MPoly):
            return self.scale(other)
        a, b, field = self._pair(other)
        return self._wrap(a * b, field)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MPoly":
        if exponent < 0:
            raise ValueError("negative powers are not polynomial")
        top = max((max(m, default=0) for m in self.rep), default=0)
        if top * exponent > MAX_EXPONENT:
            raise OverflowError("monomial exponent overflow")
        return self._wrap(self.rep**exponent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MPoly):
            if self.variables != other.variables:
                return False
            a, b, _ = self._pair(other)
            return a == b
        if isinstance(other, (int, Fraction)):
            return self == MPoly.constant(other, self.variables)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # ------------------------------------------------------------------
    # calculus and evaluation
    # ------------------------------------------------------------------
    def partial_derivative(self, index: Union[int, str]) -> "MPoly":
        i = self.variables.index(index) if isinstance(index, str) else index
        if not 0 <= i < self.nvars:
            raise IndexError(f"no variable with index {index}")
        return self._wrap(self.rep.diff(self.rep.ring.gens[i]))

    def gradient(self) -> List["MPoly"]:
        return [self.partial_derivative(i) for i in range(self.nvars)]

    def evaluate(self, values: Union[Sequence[Any], Mapping[str, Any]]) -> Scalar:
        if isinstance(values, Mapping):
            point = [as_scalar(values[name]) for name in self.variables]
        else:
            point = [as_scalar(v) for v in values]
        if len(point) != self.nvars:
            raise ValueError("point dimension does not match variable count")
        total: Scalar = Fraction(0)
        for mono, coeff in self.terms.items():
            term: Scalar = coeff
            for v, e in zip(point, mono):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def weighted_degrees(self, weights: Sequence[Fraction]) -> set:
        return {sum((w * e for w, e in zip(weights, mono)), Fraction(0)) for mono in self.rep}

    # ------------------------------------------------------------------
    # printing
    # ------------------------------------------------------------------
    def __iter__(self) -> Iterator[Tuple[Monomial, Scalar]]:
        return iter(self.sorted_terms())

    def __str__(self) -> str:
        if not self.rep:
            return "0"
        pieces: List[str] = []
        for mono, coeff in self.sorted_terms():
            text = format_scalar(coeff)
            negative = text.startswith("-") and " " not in text
            magnitude = text[1:] if negative else text
            if " " in magnitude:
                magnitude = f"({magnitude})"
            if any(mono):
                body = mono_str(mono, self.variables)
                term = body if magnitude == "1" else f"{magnitude}*{body}"
            else:
                term = magnitude
            if not pieces:
                pieces.append(f"-{term}" if negative else term)
            else:
                pieces.append(f"- {term}" if negative else f"+ {term}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"MPoly({str(self)!r}, variables={list(self.variables)})"


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_OPERATORS = "+-*^()"


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    position: int
    value: Optional[Fraction] = None


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "−":
            tokens.append(_Token("op", "-", i))
            i += 1
            continue
        if ch in _OPERATORS:
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            numerator = int(text[start:i])
            j = i
            while j < n and text[j].isspace():
                j += 1
            if j < n and text[j] == "/":
                k = j + 1
                while k < n and text[k].isspace():
                    k += 1
                if k < n and text[k].isdigit():
                    d_start = k
                    while k < n and text[k].isdigit():
                        k += 1
                    denominator = int(text[d_start:k])
                    if denominator == 0:
                        raise PolynomialSyntaxError("zero denominator", d_start, text)
                    tokens.append(
                        _Token("num", text[start:k], start, Fraction(numerator, denominator))
                    )
                    i = k
                    continue
                raise PolynomialSyntaxError("division is only allowed in rational literals", j, text)
            tokens.append(_Token("num", text[start:i], start, Fraction(numerator)))
            continue
        if (ch.isascii() and ch.isalpha()) or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_") and text[i].isascii():
                i += 1
            tokens.append(_Token("name", text[start:i], start))
            continue
        if ch == "/":
            raise PolynomialSyntaxError("division is only allowed in rational literals", i, text)
        raise PolynomialSyntaxError(f"unexpected character {ch!r}", i, text)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]) -> None:
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _fail(self, message: str, token: Optional[_Token] = None) -> PolynomialSyntaxError:
        token = token or self.current
        return PolynomialSyntaxError(message, token.position, self.text)

    def parse(self) -> MPoly:
        if self.current.kind == "end":
            raise self._fail("empty expression")
        result = self._expr()
        if self.current.kind != "end":
            raise self._fail(f"unexpected {self.current.text!r}")
        return result

    def _expr(self) -> MPoly:
        result = self._term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            rhs = self._term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _term(self) -> MPoly:
        result = self._unary()
        while self.current.kind == "op" and self.current.text == "*":
            self._advance()
            result = result * self._unary()
        return result

    def _unary(self) -> MPoly:
        if self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            operand = self._unary()
            return -operand if op == "-" else operand
        return self._power()

    def _power(self) -> MPoly:
        base = self._atom()
        if self.current.kind == "op" and self.current.text == "^":
            self._advance()
            token = self.current
            if token.kind != "num" or token.value is None or token.value.denominator != 1:
                raise self._fail("exponent must be a nonnegative integer", token)
            self._advance()
            exponent = int(token.value)
            if exponent > MAX_EXPONENT:
                raise self._fail("exponent overflow", token)
            return base**exponent
        return base

    def _atom(self) -> MPoly:
        token = self.current
        if token.kind == "num":
            self._advance()
            return MPoly.constant(token.value, self.variables)
        if token.kind == "name":
            self._advance()
            if token.text not in self.variables:
                raise UnknownVariable(token.text, token.position)
            return MPoly.variable(token.text, self.variables)
        if token.kind == "op" and token.text == "(":
            self._advance()
            inner = self._expr()
            if not (self.current.kind == "op" and self.current.text == ")"):
                raise self._fail("expected ')'")
            self._advance()
            return inner
        if token.kind == "end":
            raise self._fail("unexpected end of input")
        raise self._fail(f"unexpected {token.text!r}")


def infer_variables(text: str) -> List[str]:
    """Variable names in order of first appearance."""

    seen: List[str] = []
    for token in _tokenize(text):
        if token.kind == "name" and token.text not in seen:
            seen.append(token.text)
    return seen


def parse(text: str, variables: Optional[Sequence[str]] = None) -> MPoly:
    """Parse ``text`` over ``variables`` (inferred from the text when omitted)."""

    if variables is None:
        variables = infer_variables(text)
    if len(set(variables)) != len(variables):
        raise ValueError("variable names must be distinct")
    return _Parser(text, variables).parse()


__all__ = [
    "MAX_EXPONENT",
    "MPoly",
    "Monomial",
    "degrevlex_key",
    "infer_variables",
    "mono_div",
    "mono_divides",
    "mono_lcm",
    "mono_mul",
    "mono_str",
    "parse",
]
