"""Buchberger's algorithm over ℚ (or ℚ[s]/(p)) with cofactor tracking.

Every basis element remembers how it is built from the original generators,
so a normal form against the basis can be turned into quotients against the
generators themselves: ``g = r + Σ q_i f_i``.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .errors import NotIsolated
from .field.scalars import Scalar, domain_of, join_fields
from .mpoly import (
    MPoly,
    Monomial,
    degrevlex_key,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    mono_str,
)

LOGGER = logging.getLogger("vancyc.groebner")

ORDER = "degrevlex"


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis with ``basis[k] == Σ_i cofactors[k][i] * generators[i]``."""

    variables: Tuple[str, ...]
    generators: Tuple[MPoly, ...]
    basis: Tuple[MPoly, ...]
    cofactors: Tuple[Tuple[MPoly, ...], ...]
    order: str = ORDER

    @property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return tuple(g.leading_monomial() for g in self.basis)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.basis)

    def reduce(self, g: MPoly) -> Tuple[MPoly, List[MPoly]]:
        """Full division of ``g`` by the basis: ``g = r + Σ h_k basis[k]``."""

        return divide(g, self.basis)

    def check_cofactors(self) -> bool:
        zero = MPoly.zero(self.variables)
        for element, row in zip(self.basis, self.cofactors):
            combo = zero
            for c, f in zip(row, self.generators):
                combo = combo + c * f
            if combo != element:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "variables": list(self.variables),
            "generators": [str(f) for f in self.generators],
            "basis": [str(g) for g in self.basis],
        }


@dataclass(frozen=True)
class MilnorData:
    """Monomial basis of the Milnor algebra ``𝕂[x]/(f_1, …, f_n)``."""

    staircase: Tuple[Monomial, ...]
    gb: GroebnerBasis

    @property
    def mu(self) -> int:
        return len(self.staircase)

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.gb.variables

    def index(self, mono: Monomial) -> int:
        return self._positions()[mono]

    def _positions(self) -> Dict[Monomial, int]:
        cached = self.__dict__.get("_position_cache")
        if cached is None:
            cached = {m: k for k, m in enumerate(self.staircase)}
            object.__setattr__(self, "_position_cache", cached)
        return cached

    def coordinates(self, r: MPoly) -> List[Scalar]:
        """Coordinates of a normal form on the staircase basis."""

        positions = self._positions()
        out: List[Scalar] = [Fraction(0)] * self.mu
        for mono, coeff in r.terms.items():
            if mono not in positions:
                raise ValueError(f"{mono_str(mono, self.variables)} is not a staircase monomial")
            out[positions[mono]] = coeff
        return out

    def basis_polynomials(self) -> List[MPoly]:
        return [MPoly.monomial(m, self.variables) for m in self.staircase]

    def labels(self) -> List[str]:
        return [mono_str(m, self.variables) for m in self.staircase]

    def max_degree(self) -> int:
        return max((sum(m) for m in self.staircase), default=-1)


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------


def divide(g: MPoly, divisors: Sequence[MPoly]) -> Tuple[MPoly, List[MPoly]]:
    """Multivariate division: returns ``(r, h)`` with ``g = r + Σ h_k divisors[k]``.

    No term of ``r`` is divisible by a leading monomial of the divisors. The
    first divisor whose leading monomial divides the current leading term is
    used, which is the rule ``PolyElement.div`` implements.
    """

    if not divisors:
        return g, []
    if g.is_zero():
        return g, [MPoly.zero(g.variables) for _ in divisors]
    field = join_fields(g.number_field, *(d.number_field for d in divisors))
    quotients, remainder = g.lifted(field).div([d.lifted(field) for d in divisors])
    return (
        MPoly.from_element(g.variables, remainder, field),
        [MPoly.from_element(g.variables, q, field) for q in quotients],
    )


def _combine(rows: Sequence[Sequence[MPoly]], weights: Sequence[MPoly], zero: MPoly, width: int) -> List[MPoly]:
    out = [zero] * width
    for h, row in zip(weights, rows):
        if h.is_zero():
            continue
        for i in range(width):
            if not row[i].is_zero():
                out[i] = out[i] + h * row[i]
    return out


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------


def buchberger(gens: Sequence[MPoly]) -> GroebnerBasis:
    """Reduced Gröbner basis of ``gens`` in degrevlex, pairs processed first in first out."""

    if not gens:
        raise ValueError("buchberger needs at least one generator")
    variables = gens[0].variables
    zero = MPoly.zero(variables)
    width = len(gens)

    polys: List[MPoly] = []
    cofs: List[List[MPoly]] = []
    for i, f in enumerate(gens):
        if f.variables != variables:
            raise ValueError("generators must share one variable list")
        if f.is_zero():
            continue
        inv = 1 / f.leading_coefficient()
        polys.append(f.scale(inv))
        cofs.append([MPoly.constant(inv, variables) if k == i else zero for k in range(width)])

    if not polys:
        return GroebnerBasis(variables, tuple(gens), (), ())

    pairs = deque(itertools.combinations(range(len(polys)), 2))
    while pairs and not any(p.is_constant() for p in polys):
        i, j = pairs.popleft()
        lead_i = polys[i].leading_monomial()
        lead_j = polys[j].leading_monomial()
        lcm = mono_lcm(lead_i, lead_j)
        if lcm == mono_mul(lead_i, lead_j):
            continue  # coprime leading terms: S-polynomial reduces to zero
        shift_i = mono_div(lcm, lead_i)
        shift_j = mono_div(lcm, lead_j)
        s_poly = polys[i].mul_term(shift_i, 1) - polys[j].mul_term(shift_j, 1)
        s_cof = [
            a.mul_term(shift_i, 1) - b.mul_term(shift_j, 1) for a, b in zip(cofs[i], cofs[j])
        ]
        remainder, quotients = divide(s_poly, polys)
        if remainder.is_zero():
            continue
        correction = _combine(cofs, quotients, zero, width)
        r_cof = [a - b for a, b in zip(s_cof, correction)]
        inv = 1 / remainder.leading_coefficient()
        polys.append(remainder.scale(inv))
        cofs.append([c.scale(inv) for c in r_cof])
        new = len(polys) - 1
        pairs.extend((k, new) for k in range(new))

    basis, cofactors = _reduce_basis(polys, cofs, zero, width)
    gb = GroebnerBasis(variables, tuple(gens), tuple(basis), tuple(tuple(r) for r in cofactors))
    LOGGER.info("groebner basis with %d elements from %d generators", len(basis), len(gens))
    return gb


def _reduce_basis(
    polys: List[MPoly], cofs: List[List[MPoly]], zero: MPoly, width: int
) -> Tuple[List[MPoly], List[List[MPoly]]]:
    constant = next((k for k, p in enumerate(polys) if p.is_constant()), None)
    if constant is not None:
        return [polys[constant]], [cofs[constant]]

    # minimal basis: drop elements whose leading monomial is divisible by another's
    keep: List[int] = []
    for k, p in enumerate(polys):
        lead = p.leading_monomial()
        redundant = False
        for other, q in enumerate(polys):
            if other == k:
                continue
            other_lead = q.leading_monomial()
            if mono_divides(other_lead, lead) and (other_lead != lead or other < k):
                redundant = True
                break
        if not redundant:
            keep.append(k)

    minimal = [polys[k] for k in keep]
    minimal_cofs = [cofs[k] for k in keep]
    reduced: List[MPoly] = []
    reduced_cofs: List[List[MPoly]] = []
    for k, p in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1 :]
        other_cofs = minimal_cofs[:k] + minimal_cofs[k + 1 :]
        tail = p - MPoly.monomial(p.leading_monomial(), p.variables, p.leading_coefficient())
        tail_r, quotients = divide(tail, others) if others else (tail, [])
        element = MPoly.monomial(p.leading_monomial(), p.variables, p.leading_coefficient()) + tail_r
        correction = _combine(other_cofs, quotients, zero, width)
        reduced.append(element)
        reduced_cofs.append([a - b for a, b in zip(minimal_cofs[k], correction)])

    order = sorted(range(len(reduced)), key=lambda k: degrevlex_key(reduced[k].leading_monomial()))
    return [reduced[k] for k in order], [reduced_cofs[k] for k in order]


# ---------------------------------------------------------------------------
# normal forms and the Milnor algebra
# ---------------------------------------------------------------------------


def normal_form_with_quotients(g: MPoly, gb: GroebnerBasis) -> Tuple[MPoly, List[MPoly]]:
    """Return ``(r, q)`` with ``g = r + Σ q_i f_i`` against the original generators."""

    zero = MPoly.zero(gb.variables)
    if not gb.basis:
        return g, [zero] * len(gb.generators)
    remainder, weights = gb.reduce(g)
    quotients = _combine(gb.cofactors, weights, zero, len(gb.generators))
    return remainder, quotients


def normal_form(g: MPoly, gb: GroebnerBasis) -> MPoly:
    if not gb.basis:
        return g
    return gb.reduce(g)[0]


def milnor_data(gb: GroebnerBasis) -> MilnorData:
    """Staircase of the quotient ring, ascending in degrevlex.

    Raises NotIsolated unless every variable has a pure power among the leading
    monomials.
    """

    if gb.is_unit():
        return MilnorData((), gb)
    leads = gb.leading_monomials
    n = len(gb.variables)
    bounds: List[Optional[int]] = [None] * n
    for lead in leads:
        support = [i for i, e in enumerate(lead) if e]
        if len(support) == 1:
            i = support[0]
            if bounds[i] is None or lead[i] < bounds[i]:
                bounds[i] = lead[i]
    missing = [gb.variables[i] for i, b in enumerate(bounds) if b is None]
    if missing:
        raise NotIsolated(
            "jacobian ideal is not zero-dimensional", free_variables=",".join(missing)
        )
    staircase = [
        mono
        for mono in itertools.product(*(range(b) for b in bounds))  # type: ignore[arg-type]
        if not any(mono_divides(lead, mono) for lead in leads)
    ]
    staircase.sort(key=degrevlex_key)
    md = MilnorData(tuple(staircase), gb)
    LOGGER.info("milnor algebra has dimension %d", md.mu)
    return md


def jacobian_ideal(f: MPoly) -> GroebnerBasis:
    return buchberger(f.gradient())


# ---------------------------------------------------------------------------
# independent check of μ by linear algebra
# ---------------------------------------------------------------------------


def _monomials_up_to(nvars: int, degree: int) -> List[Monomial]:
    out = [m for m in itertools.product(range(degree + 1), repeat=nvars) if sum(m) <= degree]
    out.sort(key=degrevlex_key, reverse=True)
    return out


def truncated_quotient_dimension(gens: Sequence[MPoly], degree: int, slack: int) -> int:
    """``dim P_{≤degree} / (V ∩ P_{≤degree})`` with ``V`` spanned by all ``m * f_i``
    of degree at most ``degree + slack``.

    This never looks at a Gröbner basis. Columns are ordered high degree first,
    so after row reduction the rows without high-degree pivots span ``V ∩ P_{≤degree}``.
    """

    variables = gens[0].variables
    top = degree + slack
    columns = _monomials_up_to(len(variables), top)
    position = {m: k for k, m in enumerate(columns)}
    field = join_fields(*(f.number_field for f in gens))
    rows: Dict[int, Dict[int, object]] = {}
    for f in gens:
        if f.is_zero():
            continue
        coeffs = f.lifted(field)
        fdeg = f.total_degree()
        for mono in _monomials_up_to(len(variables), top - fdeg):
            rows[len(rows)] = {position[mono_mul(fm, mono)]: fc for fm, fc in coeffs.items()}
    low = [k for k, m in enumerate(columns) if sum(m) <= degree]
    if not rows:
        return len(low)
    first_low = low[0]
    table = DomainMatrix(rows, (len(rows), len(columns)), domain_of(field))
    _, pivots = table.rref()
    in_low = sum(1 for p in pivots if p >= first_low)
    return len(low) - in_low


def milnor_number_oracle(gens: Sequence[MPoly], max_degree: int) -> int:
    """μ by linear algebra alone: monomials of degree ``≤ max_degree`` modulo all
    multiples ``m * f_i`` of degree up to ``2 * max_degree + 2``.

    ``max_degree`` is the top degree of the staircase being checked.
    """

    return truncated_quotient_dimension(gens, max_degree, max_degree + 2)


__all__ = [
    "GroebnerBasis",
    "MilnorData",
    "ORDER",
    "buchberger",
    "divide",
    "jacobian_ideal",
    "milnor_data",
    "milnor_number_oracle",
    "normal_form",
    "normal_form_with_quotients",
    "truncated_quotient_dimension",
]
