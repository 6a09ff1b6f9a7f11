"""Rank-one twisted Gauss–Manin data for ``f = Π_{i∈J} x_i^{e_i}`` at the origin.

The twist has residue ``α_i ∈ [0, 1)`` along ``x_i = 0`` for ``i ∈ J′ ⊇ J``. A
monomial ``x^ν`` (``ν ∈ ℕ^J``) survives when

    ν_i + α_i = (e_i / e_{i0}) (ν_{i0} + α_{i0})   for every i ∈ J ∖ {i0}

and then carries the ``t∂_t`` eigenvalue ``(ν_{i0} + α_{i0}) / e_{i0}``. Each
surviving monomial contributes ``C(|J′| - 1, p)`` to degree ``p``.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import EmptyJ, InvalidProblem, WindowUnbounded
from .field.matrix import Matrix

LOGGER = logging.getLogger("vancyc.logmonomial")

RELATIVE = "relative"
ABSOLUTE = "absolute"


@dataclass(frozen=True)
class NCProblem:
    """Indices are 1-based, as in ``x_1 … x_n``."""

    n: int
    j: Tuple[int, ...]
    j_prime: Tuple[int, ...]
    exponents: Mapping[int, int]
    residues: Mapping[int, Fraction] = field(default_factory=dict)
    window: Optional[Tuple[Fraction, Fraction]] = None
    degree_bound: Optional[int] = None
    i0: Optional[int] = None
    complex: str = RELATIVE

    def __post_init__(self) -> None:
        j = tuple(sorted(set(self.j)))
        j_prime = tuple(sorted(set(self.j_prime) | set(j)))
        if not j:
            raise EmptyJ("the monomial must involve at least one variable")
        if any(not 1 <= i <= self.n for i in j_prime):
            raise InvalidProblem(f"indices must lie in 1..{self.n}")
        if set(self.j_prime) and not set(j) <= set(self.j_prime):
            raise InvalidProblem("J must be contained in J'")
        exponents = {int(i): int(e) for i, e in self.exponents.items()}
        for i in j:
            if exponents.get(i, 0) < 1:
                raise InvalidProblem(f"exponent e_{i} must be a positive integer")
        residues = {int(i): Fraction(a) for i, a in self.residues.items()}
        for i, a in residues.items():
            if i not in j_prime:
                raise InvalidProblem(f"residue given for x_{i}, which is not a boundary component")
            if not 0 <= a < 1:
                raise InvalidProblem(f"residue alpha_{i} = {a} is outside [0, 1)")
        if self.i0 is not None and self.i0 not in j:
            raise InvalidProblem(f"i0 = {self.i0} is not in J")
        if self.complex not in (RELATIVE, ABSOLUTE):
            raise InvalidProblem(f"unknown complex {self.complex!r}")
        window = self.window
        if window is not None:
            window = (Fraction(window[0]), Fraction(window[1]))
            if window[0] >= window[1]:
                raise InvalidProblem("window must satisfy a < b")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "j_prime", j_prime)
        object.__setattr__(self, "exponents", {i: exponents[i] for i in j})
        object.__setattr__(self, "residues", {i: residues.get(i, Fraction(0)) for i in j_prime})
        object.__setattr__(self, "window", window)

    @property
    def pivot(self) -> int:
        return self.j[0] if self.i0 is None else self.i0

    @property
    def wedge_rank(self) -> int:
        return len(self.j_prime) - 1

    def alpha(self, i: int) -> Fraction:
        return self.residues.get(i, Fraction(0))

    def with_i0(self, i0: int) -> "NCProblem":
        return NCProblem(
            self.n, self.j, self.j_prime, self.exponents, self.residues,
            self.window, self.degree_bound, i0, self.complex,
        )

    def scaled(self, factor: int) -> "NCProblem":
        """Every ``e_i`` multiplied by ``factor``; the window shrinks accordingly."""

        window = None if self.window is None else (self.window[0] / factor, self.window[1] / factor)
        return NCProblem(
            self.n, self.j, self.j_prime, {i: e * factor for i, e in self.exponents.items()},
            self.residues, window, self.degree_bound, self.i0, self.complex,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "J": list(self.j),
            "J_prime": list(self.j_prime),
            "exponents": {str(i): e for i, e in self.exponents.items()},
            "residues": {str(i): str(a) for i, a in self.residues.items()},
            "window": None if self.window is None else [str(w) for w in self.window],
            "degree_bound": self.degree_bound,
            "i0": self.pivot,
            "complex": self.complex,
        }


@dataclass(frozen=True)
class NCSpectrum:
    """``degrees[p]`` lists ``(eigenvalue, multiplicity)`` ascending in eigenvalue."""

    i0: int
    complex: str
    degrees: Mapping[int, Tuple[Tuple[Fraction, int], ...]]

    def multiplicity(self, degree: int, eigenvalue: Fraction) -> int:
        return dict(self.degrees.get(degree, ())).get(Fraction(eigenvalue), 0)

    def eigenvalues(self, degree: int) -> List[Fraction]:
        return [value for value, _ in self.degrees.get(degree, ())]

    def table(self) -> List[Tuple[Fraction, int, int]]:
        """Rows ``(eigenvalue, degree, multiplicity)`` ordered by eigenvalue then degree."""

        rows = [(v, p, m) for p, entries in self.degrees.items() for v, m in entries]
        return sorted(rows)

    def same_spectrum(self, other: "NCSpectrum") -> bool:
        return self.complex == other.complex and dict(self.degrees) == dict(other.degrees)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "i0": self.i0,
            "complex": self.complex,
            "table": [
                {"eigenvalue": str(v), "degree": p, "multiplicity": m} for v, p, m in self.table()
            ],
        }


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _twist_kills_everything(prob: NCProblem) -> bool:
    return any(prob.alpha(i) != 0 for i in prob.j_prime if i not in prob.j)


def _monomial_for(prob: NCProblem, eigenvalue: Fraction) -> Optional[Tuple[int, ...]]:
    """The unique ``ν ∈ ℕ^J`` with the given eigenvalue, if any."""

    nu: List[int] = []
    for i in prob.j:
        value = prob.exponents[i] * eigenvalue - prob.alpha(i)
        if value.denominator != 1 or value < 0:
            return None
        nu.append(int(value))
    return tuple(nu)


def _candidate_eigenvalues(prob: NCProblem) -> List[Fraction]:
    if prob.window is None and prob.degree_bound is None:
        raise WindowUnbounded("give an eigenvalue window or a monomial degree bound")
    i0 = prob.pivot
    e0 = prob.exponents[i0]
    a0 = prob.alpha(i0)
    if prob.window is not None:
        upper = math.floor(e0 * prob.window[1]) + 1
    else:
        upper = prob.degree_bound  # type: ignore[assignment]
    if prob.degree_bound is not None:
        upper = min(upper, prob.degree_bound)
    out = []
    for nu0 in range(upper + 1):
        eigenvalue = (nu0 + a0) / e0
        if prob.window is not None and not prob.window[0] <= eigenvalue < prob.window[1]:
            continue
        out.append(eigenvalue)
    return out


def _monomial_counts(prob: NCProblem) -> Dict[Fraction, int]:
    counts: Dict[Fraction, int] = {}
    if _twist_kills_everything(prob):
        return counts
    for eigenvalue in _candidate_eigenvalues(prob):
        nu = _monomial_for(prob, eigenvalue)
        if nu is None:
            continue
        if prob.degree_bound is not None and sum(nu) > prob.degree_bound:
            continue
        counts[eigenvalue] = counts.get(eigenvalue, 0) + 1
    return counts


def nc_spectrum(prob: NCProblem) -> NCSpectrum:
    """Eigenvalues of ``t∂_t`` per cohomological degree.

    With ``complex="absolute"`` the answer is moved to the absolute complex:
    degree ``p + 1`` and eigenvalue ``λ - 1``.
    """

    counts = _monomial_counts(prob)
    rank = prob.wedge_rank
    shift_degree, shift_value = (1, Fraction(-1)) if prob.complex == ABSOLUTE else (0, Fraction(0))
    degrees: Dict[int, Tuple[Tuple[Fraction, int], ...]] = {}
    for p in range(rank + 1):
        factor = math.comb(rank, p)
        degrees[p + shift_degree] = tuple(
            (value + shift_value, count * factor) for value, count in sorted(counts.items())
        )
    LOGGER.info("normal-crossing spectrum: %d eigenvalues, i0=%d", len(counts), prob.pivot)
    return NCSpectrum(prob.pivot, prob.complex, degrees)


def psi_stalk_dims(prob: NCProblem, alpha: Fraction) -> Dict[int, int]:
    """Dimension per degree ``p`` of the ``exp(-2πi·alpha)`` part of the nearby-cycle stalk.

    Degrees are those of the relative complex.
    """

    alpha = Fraction(alpha)
    if not 0 <= alpha < 1:
        raise InvalidProblem("alpha must lie in [0, 1)")
    rank = prob.wedge_rank
    if _twist_kills_everything(prob):
        return {p: 0 for p in range(rank + 1)}
    count = 1 if _monomial_for(prob, alpha) is not None else 0
    return {p: count * math.comb(rank, p) for p in range(rank + 1)}


def i0_independent(prob: NCProblem) -> bool:
    reference = nc_spectrum(prob.with_i0(prob.j[0]))
    return all(nc_spectrum(prob.with_i0(i)).same_spectrum(reference) for i in prob.j)


# ---------------------------------------------------------------------------
# brute-force Koszul oracle
# ---------------------------------------------------------------------------


def koszul_oracle(prob: NCProblem, eigenvalue: Fraction, truncation: int) -> Dict[int, int]:
    """Cohomology dimensions of the explicit Koszul complex at one eigenvalue.

    The complex is built on monomials in the ``J′`` variables with ``x_{i0}``
    pinned by the eigenvalue and every other exponent at most ``truncation``.
    The operators ``ξ̃_i`` (``i ∈ J′ ∖ {i0}``) act diagonally by
    ``ν_i + α_i - e_i λ`` (``e_i = 0`` off ``J``); ranks are computed by row reduction.
    """

    eigenvalue = Fraction(eigenvalue)
    i0 = prob.pivot
    nu0 = prob.exponents[i0] * eigenvalue - prob.alpha(i0)
    others = [i for i in prob.j_prime if i != i0]
    rank = len(others)
    if nu0.denominator != 1 or nu0 < 0:
        return {p: 0 for p in range(rank + 1)}
    space = list(itertools.product(range(truncation + 1), repeat=rank))

    def weight(k: int, mono: Tuple[int, ...]) -> Fraction:
        i = others[k]
        return mono[k] + prob.alpha(i) - prob.exponents.get(i, 0) * eigenvalue

    subsets = {p: list(itertools.combinations(range(rank), p)) for p in range(rank + 1)}
    position = {
        p: {(s, m): idx for idx, (s, m) in enumerate(itertools.product(subsets[p], space))}
        for p in range(rank + 1)
    }
    ranks: Dict[int, int] = {}
    for p in range(rank):
        rows_n = len(position[p + 1])
        cols_n = len(position[p])
        grid = [[Fraction(0)] * cols_n for _ in range(rows_n)]
        for (subset, mono), col in position[p].items():
            for k in range(rank):
                if k in subset:
                    continue
                target = tuple(sorted(subset + (k,)))
                sign = -1 if sum(1 for s in subset if s < k) % 2 else 1
                value = weight(k, mono)
                if value != 0:
                    grid[position[p + 1][(target, mono)]][col] = sign * value
        ranks[p] = Matrix.from_rows(grid, cols_n).rank() if rows_n else 0
    dims: Dict[int, int] = {}
    for p in range(rank + 1):
        size = len(position[p])
        dims[p] = size - ranks.get(p, 0) - ranks.get(p - 1, 0)
    return dims


__all__ = [
    "ABSOLUTE",
    "NCProblem",
    "NCSpectrum",
    "RELATIVE",
    "i0_independent",
    "koszul_oracle",
    "nc_spectrum",
    "psi_stalk_dims",
]
