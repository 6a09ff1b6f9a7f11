"""Spectral tools on exact matrices: characteristic polynomials, eigen-splitting,
Sylvester equations and Jordan data."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from ..errors import IrreducibleFactor, SingularSylvester
from .matrix import Matrix
from .scalars import NumberField, Scalar, format_scalar, lift, scalar_sort_key, to_fraction
from .upoly import UPoly, factor_over_rationals

LOGGER = logging.getLogger("vancyc.field")


class ExtensionPolicy(str, Enum):
    RATIONAL_ONLY = "rational_only"
    ALLOW_ONE_EXTENSION = "allow_one_extension"


@dataclass(frozen=True)
class SpectralEntry:
    eigenvalue: Scalar
    basis: Matrix
    multiplicity: int

    def to_dict(self) -> dict:
        return {
            "eigenvalue": format_scalar(self.eigenvalue),
            "multiplicity": self.multiplicity,
            "basis": self.basis.to_strings(),
        }


@dataclass(frozen=True)
class SpectralSplit:
    """Generalized eigenspaces of a matrix.

    ``remainder`` spans the eigenvalues that were not split off: the conjugates
    of the extension generator, which are reported through the generator's
    Galois orbit instead of on their own.
    """

    entries: Tuple[SpectralEntry, ...]
    remainder: Matrix
    field: Optional[NumberField] = None
    extension_factor: Optional[UPoly] = None

    @property
    def eigenvalues(self) -> Tuple[Scalar, ...]:
        return tuple(e.eigenvalue for e in self.entries)

    @property
    def dimension(self) -> int:
        return sum(e.multiplicity for e in self.entries) + self.remainder.cols

    def change_of_basis(self) -> Matrix:
        """Columns: every eigenspace basis in order, then the remainder."""

        blocks = [e.basis for e in self.entries]
        if self.remainder.cols:
            blocks.append(self.remainder)
        result = blocks[0]
        for block in blocks[1:]:
            result = result.hstack(block)
        return result

    def to_dict(self) -> dict:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "remainder_dimension": self.remainder.cols,
            "extension": None if self.extension_factor is None else str(self.extension_factor),
        }


# ---------------------------------------------------------------------------
# characteristic polynomial
# ---------------------------------------------------------------------------


def char_poly(m: Matrix) -> UPoly:
    """Monic ``det(λI - m)``, computed by sympy's ``DomainMatrix.charpoly``."""

    if not m.is_square():
        raise ValueError("characteristic polynomial needs a square matrix")
    if m.rows == 0:
        return UPoly.constant(1)
    return UPoly(tuple(reversed(m.charpoly_coeffs())))


def evaluate_at_matrix(poly: UPoly, m: Matrix) -> Matrix:
    """Horner evaluation of ``poly`` at a square matrix."""

    result = Matrix.zeros(m.rows, m.rows, m.field)
    for c in reversed(poly.coeffs):
        result = (result @ m).minus_scalar(-c)
    return result


# ---------------------------------------------------------------------------
# eigen-splitting
# ---------------------------------------------------------------------------


def _generalized_eigenspace(m: Matrix, value: Scalar, multiplicity: int) -> Matrix:
    kernel = (m.minus_scalar(value) ** multiplicity).kernel()
    if len(kernel) != multiplicity:
        raise ArithmeticError(
            f"generalized eigenspace of {format_scalar(value)} has dimension {len(kernel)},"
            f" expected {multiplicity}"
        )
    return Matrix.from_columns(kernel, m.rows)


def _split_rational_factors(
    factors: List[Tuple[UPoly, int]],
    policy: ExtensionPolicy,
    field_: Optional[NumberField],
) -> Tuple[List[Tuple[Scalar, int]], Optional[NumberField], Optional[Tuple[UPoly, int]]]:
    """Turn factors over ℚ into roots; at most one irreducible factor may be adjoined."""

    roots: List[Tuple[Scalar, int]] = []
    extension: Optional[Tuple[UPoly, int]] = None
    for factor, mult in factors:
        if factor.degree == 1:
            roots.append((-factor.coeffs[0], mult))
            continue
        if field_ is not None and UPoly(factor.coeffs, "s") == field_.modulus:
            extension = (factor, mult)
            continue
        if field_ is None and policy is ExtensionPolicy.ALLOW_ONE_EXTENSION and extension is None:
            field_ = NumberField(UPoly(factor.coeffs, "s"))
            extension = (factor, mult)
            LOGGER.info("adjoining a root of %s", factor)
            continue
        raise IrreducibleFactor(factor)
    return roots, field_, extension


def split_spectrum(
    m: Matrix, policy: ExtensionPolicy | str = ExtensionPolicy.RATIONAL_ONLY
) -> SpectralSplit:
    """Split ``m`` into generalized eigenspaces over ℚ or ℚ[s]/(p)."""

    policy = ExtensionPolicy(policy)
    if not m.is_square():
        raise ValueError("spectral split needs a square matrix")
    n = m.rows
    if n == 0:
        return SpectralSplit((), Matrix.zeros(0, 0), m.field)

    chi = char_poly(m)
    field_ = m.field
    roots: List[Tuple[Scalar, int]]
    leftover: Optional[UPoly] = None
    extension: Optional[Tuple[UPoly, int]] = None

    if chi.is_rational():
        rational_chi = UPoly(tuple(to_fraction(c) for c in chi.coeffs), chi.var)
        roots, field_, extension = _split_rational_factors(
            factor_over_rationals(rational_chi), policy, field_
        )
    else:
        # already inside ℚ[s]/(p): peel off the generator, then rational roots
        assert field_ is not None
        roots = []
        generator = field_.generator
        rest = chi
        mult = 0
        while rest.degree > 0 and rest(generator) == 0:
            rest = rest // UPoly.linear_factor(generator)
            mult += 1
        if mult:
            roots.append((generator, mult))
        if rest.degree > 0:
            if rest.is_rational():
                more, _, ext = _split_rational_factors(
                    factor_over_rationals(UPoly(tuple(to_fraction(c) for c in rest.coeffs))),
                    policy,
                    field_,
                )
                roots.extend(more)
                if ext is not None:
                    raise IrreducibleFactor(ext[0])
            elif policy is ExtensionPolicy.ALLOW_ONE_EXTENSION:
                leftover = rest
            else:
                raise IrreducibleFactor(rest)

    work = m if field_ is None else m.lift(field_)
    if extension is not None:
        factor, mult = extension
        generator = field_.generator  # type: ignore[union-attr]
        roots.append((generator, mult))
        cofactor = UPoly(tuple(lift(c, field_) for c in factor.coeffs)) // UPoly.linear_factor(
            generator
        )
        leftover = cofactor**mult if leftover is None else leftover * cofactor**mult

    roots.sort(key=lambda item: scalar_sort_key(item[0]))
    entries = tuple(
        SpectralEntry(value, _generalized_eigenspace(work, value, mult), mult)
        for value, mult in roots
    )
    if leftover is not None:
        remainder = evaluate_at_matrix(leftover, work).kernel_matrix()
    else:
        remainder = Matrix.zeros(n, 0, field_)
    split = SpectralSplit(
        entries, remainder, field_, None if extension is None else extension[0]
    )
    if split.dimension != n:
        raise ArithmeticError("spectral split does not reassemble the full space")
    return split


# ---------------------------------------------------------------------------
# Sylvester equations
# ---------------------------------------------------------------------------


def solve_sylvester(a: Matrix, b: Matrix, c: Matrix) -> Matrix:
    """Unique ``X`` with ``a X - X b = c``.

    Uses ``p_b(a) X = Σ_k β_k T_k`` where ``p_b = Σ β_k λ^k`` is the characteristic
    polynomial of ``b``, ``T_1 = c`` and ``T_{k+1} = T_k b + a^k c``. ``p_b(a)`` is
    invertible exactly when the spectra of ``a`` and ``b`` are disjoint.
    """

    if not (a.is_square() and b.is_square()) or c.shape != (a.rows, b.rows):
        raise ValueError("sylvester shapes do not line up")
    if a.rows == 0 or b.rows == 0:
        return Matrix.zeros(a.rows, b.rows)
    p_b = char_poly(b)
    lhs = evaluate_at_matrix(p_b, a)
    if not lhs.is_invertible():
        raise SingularSylvester(
            "spectra of the Sylvester coefficients intersect", polynomial=str(p_b)
        )
    if c.is_zero():
        return Matrix.zeros(a.rows, b.rows)
    total = Matrix.zeros(a.rows, b.rows)
    term = c
    a_power = a
    for k in range(1, p_b.degree + 1):
        coeff = p_b.coefficient(k)
        if coeff != 0:
            total = total + term.scale(coeff)
        term = term @ b + a_power @ c
        a_power = a_power @ a
    x = lhs.inverse() @ total
    if a @ x - x @ b != c:
        raise ArithmeticError("sylvester residual is not zero")
    return x


# ---------------------------------------------------------------------------
# Jordan data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JordanEntry:
    eigenvalue: Scalar
    sizes: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"eigenvalue": format_scalar(self.eigenvalue), "sizes": list(self.sizes)}


def jordan_data(
    m: Matrix, policy: ExtensionPolicy | str = ExtensionPolicy.RATIONAL_ONLY
) -> List[JordanEntry]:
    """Jordan block sizes per eigenvalue, read off ranks of powers of ``m - cI``."""

    split = split_spectrum(m, policy)
    if split.remainder.cols:
        raise IrreducibleFactor(
            split.extension_factor, "conjugate eigenvalues have no Jordan data over this field"
        )
    work = m if split.field is None else m.lift(split.field)
    n = m.rows
    out: List[JordanEntry] = []
    for entry in split.entries:
        nil = work.minus_scalar(entry.eigenvalue)
        ranks = [n]
        power = Matrix.identity(n, split.field)
        for _ in range(entry.multiplicity + 1):
            power = power @ nil
            ranks.append(power.rank())
        sizes: List[int] = []
        for j in range(1, entry.multiplicity + 1):
            exact = (ranks[j - 1] - ranks[j]) - (ranks[j] - ranks[j + 1])
            sizes.extend([j] * exact)
        sizes.sort(reverse=True)
        out.append(JordanEntry(entry.eigenvalue, tuple(sizes)))
    return out


__all__ = [
    "ExtensionPolicy",
    "JordanEntry",
    "SpectralEntry",
    "SpectralSplit",
    "char_poly",
    "evaluate_at_matrix",
    "jordan_data",
    "solve_sylvester",
    "split_spectrum",
]
