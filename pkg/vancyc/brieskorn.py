"""The t-action on the Brieskorn lattice of an isolated singularity.

Forms ``g dx_1 ∧ … ∧ dx_n`` are written on the staircase basis ``{b_j}`` of the
Milnor algebra with coefficients in ``𝕂[[u]]``, ``u = ∂_t⁻¹``. One reduction
step uses ``g = r + Σ q_i f_i`` and ``df ∧ η = u·dη`` with
``η = Σ (-1)^{i-1} q_i dx_1 ∧ … ∧ \\hat{dx_i} ∧ … ∧ dx_n``:

    g dx  ≡  r dx  +  u · (Σ_i ∂_i q_i) dx

Multiplication by ``f`` is the action of ``t``; applying the reduction to
``f·b_j`` gives column ``j`` of ``A(u) = Σ A_k u^k``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .config import default_precision
from .errors import ConsistencyError
from .field.matrix import Matrix
from .field.scalars import Scalar, format_scalar
from .groebner import (
    MilnorData,
    jacobian_ideal,
    milnor_data,
    normal_form,
    normal_form_with_quotients,
)
from .mpoly import MPoly
from .series import MatrixSeries

LOGGER = logging.getLogger("vancyc.brieskorn")


@dataclass(frozen=True)
class ReductionResult:
    """``coefficients[j][k]`` is the coefficient of ``u^k b_j``, exact for ``k <= precision``."""

    coefficients: Tuple[Tuple[Scalar, ...], ...]
    precision: int

    def order(self, k: int) -> List[Scalar]:
        return [row[k] for row in self.coefficients]

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.coefficients for v in row)

    def __add__(self, other: "ReductionResult") -> "ReductionResult":
        prec = min(self.precision, other.precision)
        return ReductionResult(
            tuple(
                tuple(a[k] + b[k] for k in range(prec + 1))
                for a, b in zip(self.coefficients, other.coefficients)
            ),
            prec,
        )

    def scale(self, factor: Any) -> "ReductionResult":
        return ReductionResult(
            tuple(tuple(v * factor for v in row) for row in self.coefficients), self.precision
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "precision": self.precision,
            "coefficients": [[format_scalar(v) for v in row] for row in self.coefficients],
        }


@dataclass(frozen=True)
class MicroModule:
    """Free lattice of rank ``dim`` with ``t = A(u) + u²∂_u``."""

    dim: int
    series: MatrixSeries
    labels: Tuple[str, ...] = ()
    n_vars: int = 0

    @property
    def precision(self) -> int:
        return self.series.precision if self.series.precision is not None else 0

    def a(self, k: int) -> Matrix:
        return self.series.coefficient(k)

    @property
    def a0(self) -> Matrix:
        return self.series.coefficient(0)

    def with_series(self, series: MatrixSeries, labels: Optional[Sequence[str]] = None) -> "MicroModule":
        return MicroModule(
            series.rows, series, tuple(labels) if labels is not None else (), self.n_vars
        )

    @classmethod
    def from_matrices(
        cls, matrices: Sequence[Matrix], precision: Optional[int] = None, n_vars: int = 0
    ) -> "MicroModule":
        """Synthetic module from ``[A_0, A_1, …]``."""

        series = MatrixSeries.from_list(matrices, precision)
        return cls(series.rows, series, tuple(f"e{k + 1}" for k in range(series.rows)), n_vars)

    @classmethod
    def empty(cls, precision: int = 0, n_vars: int = 0) -> "MicroModule":
        return cls(0, MatrixSeries.zero(0, 0, precision), (), n_vars)

    def to_dict(self) -> Dict[str, Any]:
        return {"dim": self.dim, "labels": list(self.labels), "t": self.series.to_dict()}


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------


def reduce_form(g: MPoly, md: MilnorData, precision: int) -> ReductionResult:
    """Class of ``g dx`` in the completed Brieskorn lattice, through ``u^precision``."""

    if precision < 0:
        raise ValueError("precision must be nonnegative")
    grid: List[List[Scalar]] = [[Fraction(0)] * (precision + 1) for _ in range(md.mu)]
    current = g
    for k in range(precision + 1):
        if current.is_zero():
            break
        remainder, quotients = normal_form_with_quotients(current, md.gb)
        for j, value in enumerate(md.coordinates(remainder)):
            grid[j][k] = value
        carry = MPoly.zero(g.variables)
        for i, q in enumerate(quotients):
            carry = carry + q.partial_derivative(i)
        current = carry
    return ReductionResult(tuple(tuple(row) for row in grid), precision)


def multiplication_matrix(g: MPoly, md: MilnorData) -> Matrix:
    """Multiplication by ``g`` on the Milnor algebra, via plain normal forms."""

    columns = [md.coordinates(normal_form(g * b, md.gb)) for b in md.basis_polynomials()]
    return Matrix.from_columns(columns, md.mu)


# ---------------------------------------------------------------------------
# quasi-homogeneity
# ---------------------------------------------------------------------------


def quasi_homogeneous_weights(f: MPoly) -> Optional[Tuple[Fraction, ...]]:
    """Weights ``w > 0`` with ``Σ w_i a_i = 1`` on every term, when they exist and are unique."""

    if f.is_zero() or f.is_constant():
        return None
    n = f.nvars
    rows = [list(mono) + [1] for mono in f.terms]
    reduced, pivots = Matrix.from_rows(rows).rref()
    if n in pivots or len(pivots) != n:
        return None
    weights = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        weights[p] = reduced[r, n]
    if any(w <= 0 for w in weights):
        return None
    return tuple(weights)


def quasi_homogeneous_exponents(weights: Sequence[Fraction], md: MilnorData) -> List[Fraction]:
    """``ℓ(b) = Σ (ν_i + 1) w_i`` for each staircase monomial ``b = x^ν``."""

    return [sum(((nu + 1) * w for nu, w in zip(mono, weights)), Fraction(0)) for mono in md.staircase]


def _check_quasi_homogeneous(f: MPoly, md: MilnorData, series: MatrixSeries) -> None:
    weights = quasi_homogeneous_weights(f)
    if weights is None:
        return
    expected = MatrixSeries(
        md.mu, md.mu, {1: Matrix.diagonal(quasi_homogeneous_exponents(weights, md))}, series.precision
    )
    if expected != series:
        LOGGER.error("quasi-homogeneous cross-check failed for %s", f)
        raise ConsistencyError(
            "t-action disagrees with the quasi-homogeneous prediction", polynomial=str(f)
        )
    LOGGER.debug("quasi-homogeneous cross-check passed with weights %s", [str(w) for w in weights])


# ---------------------------------------------------------------------------
# t-matrix
# ---------------------------------------------------------------------------


def t_matrix(
    f: MPoly,
    precision: Optional[int] = None,
    *,
    md: Optional[MilnorData] = None,
    threads: int = 1,
    cross_check: bool = True,
) -> MicroModule:
    """Truncated ``A(u)`` on the staircase basis; empty module when ``μ = 0``."""

    md = milnor_data(jacobian_ideal(f)) if md is None else md
    n = f.nvars
    if precision is None:
        precision = default_precision(md.mu, n)
    if md.mu == 0:
        return MicroModule.empty(precision, n)

    targets = [f * b for b in md.basis_polynomials()]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            columns = list(executor.map(lambda g: reduce_form(g, md, precision), targets))
    else:
        columns = [reduce_form(g, md, precision) for g in targets]

    coeffs: Dict[int, Matrix] = {}
    for k in range(precision + 1):
        coeffs[k] = Matrix.from_columns([col.order(k) for col in columns], md.mu)
    series = MatrixSeries(md.mu, md.mu, coeffs, precision)

    if series.coefficient(0) != multiplication_matrix(f, md):
        LOGGER.error("order-0 term of the t-action differs from multiplication by f")
        raise ConsistencyError("A_0 is not the multiplication-by-f matrix", polynomial=str(f))
    if cross_check:
        _check_quasi_homogeneous(f, md, series)
    LOGGER.info("t-action for %s: mu=%d precision=%d", f, md.mu, precision)
    return MicroModule(md.mu, series, tuple(md.labels()), n)


__all__ = [
    "MicroModule",
    "ReductionResult",
    "multiplication_matrix",
    "quasi_homogeneous_exponents",
    "quasi_homogeneous_weights",
    "reduce_form",
    "t_matrix",
]
