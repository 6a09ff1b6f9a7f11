"""Truncated matrix Laurent series in ``u`` and the gauge action on ``t = A(u) + u²∂_u``.

A series keeps its nonzero coefficients in a dict ``order -> Matrix`` and a
``precision``: the highest order known exactly (``None`` for a Laurent
polynomial known exactly). Reading a coefficient past the precision raises
:class:`PrecisionExhausted` instead of silently returning zero.

Basis convention: a gauge ``G(u)`` replaces the lattice basis ``e`` by ``e·G``.
Since ``[t, u] = u²``, coordinates transform as ``t(φ) = Aφ + u²φ'`` and the new
matrix is ``G⁻¹(A G + u² G')``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import PrecisionExhausted
from .field.matrix import Matrix
from .field.scalars import NumberField, join_fields, lift


def _min_precision(*values: Optional[int]) -> Optional[int]:
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


@dataclass(frozen=True)
class MatrixSeries:
    """``Σ_k A_k u^k`` with ``A_k`` of shape ``rows × cols``."""

    rows: int
    cols: int
    coeffs: Mapping[int, Matrix]
    precision: Optional[int]

    def __post_init__(self) -> None:
        clean: Dict[int, Matrix] = {}
        for order, mat in self.coeffs.items():
            if mat.shape != (self.rows, self.cols):
                raise ValueError(f"coefficient of u^{order} has shape {mat.shape}")
            if self.precision is not None and order > self.precision:
                continue
            if not mat.is_zero():
                clean[order] = mat
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def from_list(cls, matrices: Sequence[Matrix], precision: Optional[int] = None) -> "MatrixSeries":
        """Power series from ``[A_0, A_1, …]``; precision defaults to the last listed order."""

        if not matrices:
            raise ValueError("need at least one coefficient")
        rows, cols = matrices[0].shape
        prec = len(matrices) - 1 if precision is None else precision
        return cls(rows, cols, {k: m for k, m in enumerate(matrices)}, prec)

    @classmethod
    def constant(cls, m: Matrix, precision: Optional[int] = None) -> "MatrixSeries":
        return cls(m.rows, m.cols, {0: m}, precision)

    @classmethod
    def identity(cls, n: int, precision: Optional[int] = None) -> "MatrixSeries":
        return cls.constant(Matrix.identity(n), precision)

    @classmethod
    def zero(cls, rows: int, cols: Optional[int] = None, precision: Optional[int] = None) -> "MatrixSeries":
        return cls(rows, rows if cols is None else cols, {}, precision)

    @classmethod
    def monomial(cls, m: Matrix, order: int) -> "MatrixSeries":
        """Exact ``m · u^order``."""

        return cls(m.rows, m.cols, {order: m}, None)

    # ------------------------------------------------------------------
    # access
    # ------------------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def valuation(self) -> Optional[int]:
        """Lowest order with a nonzero coefficient (``None`` for an exact zero)."""

        if self.coeffs:
            return next(iter(self.coeffs))
        if self.precision is None:
            return None
        return self.precision + 1

    @property
    def orders(self) -> List[int]:
        return list(self.coeffs)

    @property
    def field(self) -> Optional[NumberField]:
        return join_fields(*(m.field for m in self.coeffs.values()))

    def coefficient(self, order: int) -> Matrix:
        if self.precision is not None and order > self.precision:
            raise PrecisionExhausted(
                f"coefficient of u^{order} requested beyond precision {self.precision}",
                order=order,
                precision=self.precision,
            )
        return self.coeffs.get(order, Matrix.zeros(self.rows, self.cols))

    def __getitem__(self, order: int) -> Matrix:
        return self.coefficient(order)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_power_series(self) -> bool:
        return all(k >= 0 for k in self.coeffs)

    def truncate(self, precision: int) -> "MatrixSeries":
        if self.precision is not None and precision > self.precision:
            raise PrecisionExhausted(
                f"cannot truncate to {precision} beyond precision {self.precision}",
                precision=self.precision,
            )
        return MatrixSeries(self.rows, self.cols, self.coeffs, precision)

    def with_precision(self, precision: Optional[int]) -> "MatrixSeries":
        return MatrixSeries(self.rows, self.cols, self.coeffs, precision)

    def lift(self, field: Optional[NumberField]) -> "MatrixSeries":
        return MatrixSeries(
            self.rows, self.cols, {k: m.lift(field) for k, m in self.coeffs.items()}, self.precision
        )

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def __add__(self, other: "MatrixSeries") -> "MatrixSeries":
        if self.shape != other.shape:
            raise ValueError("series shapes differ")
        out = dict(self.coeffs)
        for k, m in other.coeffs.items():
            out[k] = out[k] + m if k in out else m
        return MatrixSeries(self.rows, self.cols, out, _min_precision(self.precision, other.precision))

    def __neg__(self) -> "MatrixSeries":
        return MatrixSeries(self.rows, self.cols, {k: -m for k, m in self.coeffs.items()}, self.precision)

    def __sub__(self, other: "MatrixSeries") -> "MatrixSeries":
        return self + (-other)

    def scale(self, factor: Any) -> "MatrixSeries":
        return MatrixSeries(
            self.rows, self.cols, {k: m.scale(factor) for k, m in self.coeffs.items()}, self.precision
        )

    def shift(self, k: int) -> "MatrixSeries":
        """Multiply by ``u^k``."""

        prec = None if self.precision is None else self.precision + k
        return MatrixSeries(self.rows, self.cols, {o + k: m for o, m in self.coeffs.items()}, prec)

    def __matmul__(self, other: "MatrixSeries") -> "MatrixSeries":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply series of shapes {self.shape} and {other.shape}")
        va, vb = self.valuation, other.valuation
        if va is None or vb is None:
            return MatrixSeries.zero(self.rows, other.cols, None)
        prec = _min_precision(
            None if self.precision is None else self.precision + vb,
            None if other.precision is None else other.precision + va,
        )
        out: Dict[int, Matrix] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if prec is not None and i + j > prec:
                    continue
                term = a @ b
                out[i + j] = out[i + j] + term if (i + j) in out else term
        return MatrixSeries(self.rows, other.cols, out, prec)

    def apply_constant_left(self, m: Matrix) -> "MatrixSeries":
        return MatrixSeries(m.rows, self.cols, {k: m @ a for k, a in self.coeffs.items()}, self.precision)

    def apply_constant_right(self, m: Matrix) -> "MatrixSeries":
        return MatrixSeries(self.rows, m.cols, {k: a @ m for k, a in self.coeffs.items()}, self.precision)

    def derivative(self) -> "MatrixSeries":
        prec = None if self.precision is None else self.precision - 1
        return MatrixSeries(
            self.rows,
            self.cols,
            {k - 1: m.scale(k) for k, m in self.coeffs.items() if k != 0},
            prec,
        )

    def inverse(self) -> "MatrixSeries":
        """Inverse of a series ``u^v (B_0 + B_1 u + …)`` with ``B_0`` invertible."""

        if self.rows != self.cols:
            raise ValueError("only square series are invertible")
        v = self.valuation
        if v is None or (self.precision is not None and v > self.precision):
            raise ZeroDivisionError("series is not invertible")
        base = self.shift(-v)
        b0_inv = base.coefficient(0).inverse()
        if base.precision is None:
            if set(base.coeffs) != {0}:
                raise ValueError("exact inverse of a nonconstant series needs a precision")
            return MatrixSeries.monomial(b0_inv, -v)
        n = base.precision
        inv: Dict[int, Matrix] = {0: b0_inv}
        for k in range(1, n + 1):
            acc = Matrix.zeros(self.rows)
            for j, bj in base.coeffs.items():
                if 1 <= j <= k and (k - j) in inv:
                    acc = acc + bj @ inv[k - j]
            if not acc.is_zero():
                inv[k] = -(b0_inv @ acc)
        result = MatrixSeries(self.rows, self.cols, inv, n)
        return result.shift(-v)

    def inverse_to(self, precision: int) -> "MatrixSeries":
        """Inverse of a power series with invertible constant term, exact through ``precision``."""

        return self.with_precision(
            precision if self.precision is None else min(precision, self.precision)
        ).inverse()

    # ------------------------------------------------------------------
    # blocks
    # ------------------------------------------------------------------
    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "MatrixSeries":
        return MatrixSeries(
            len(row_idx),
            len(col_idx),
            {k: m.submatrix(row_idx, col_idx) for k, m in self.coeffs.items()},
            self.precision,
        )

    def agrees_with(self, other: "MatrixSeries", through: int) -> bool:
        orders = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(k) == other.coefficient(k) for k in orders if k <= through)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "precision": self.precision,
            "coefficients": {str(k): m.to_strings() for k, m in self.coeffs.items()},
        }


# ---------------------------------------------------------------------------
# the t-action
# ---------------------------------------------------------------------------


def gauge(a: MatrixSeries, g: MatrixSeries, g_inverse: Optional[MatrixSeries] = None) -> MatrixSeries:
    """Matrix of ``t = A + u²∂_u`` in the basis ``e·G``: ``G⁻¹(A G + u² G')``."""

    if g_inverse is None:
        prec = a.precision if a.precision is not None else g.precision
        if g.precision is None and prec is not None:
            g_inverse = g.inverse_to(prec)
        else:
            g_inverse = g.inverse()
    inner = a @ g + g.derivative().shift(2)
    return g_inverse @ inner


def naive_conjugate(a: MatrixSeries, g: MatrixSeries, g_inverse: MatrixSeries) -> MatrixSeries:
    """``G⁻¹ A G`` without the derivative term; wrong for nonconstant gauges."""

    return g_inverse @ a @ g


def conjugate_constant(a: MatrixSeries, q: Matrix, q_inverse: Optional[Matrix] = None) -> MatrixSeries:
    """Constant base change: ``Q⁻¹ A Q`` order by order."""

    q_inverse = q.inverse() if q_inverse is None else q_inverse
    return MatrixSeries(
        q.cols, q.cols, {k: q_inverse @ m @ q for k, m in a.coeffs.items()}, a.precision
    )


def shear(a: MatrixSeries, lowered: Iterable[int]) -> MatrixSeries:
    """Replace basis vectors ``e_i`` (``i`` in ``lowered``) by ``u⁻¹ e_i``.

    Lowers the residue on those directions by one. Requires the constant term
    to vanish in the (kept, lowered) block so the result stays a power series.
    """

    idx = sorted(set(lowered))
    keep = [i for i in range(a.rows) if i not in idx]
    a0 = a.coefficient(0)
    if any(a0[i, j] != 0 for i in keep for j in idx):
        raise ValueError("shear would create a pole: constant term couples kept and lowered directions")
    if a.precision is not None and a.precision < 1:
        raise PrecisionExhausted("no orders left to shear", precision=a.precision)
    lowered_set = set(idx)
    out: Dict[int, List[List[Any]]] = {}

    def put(order: int, i: int, j: int, value: Any) -> None:
        grid = out.setdefault(order, [[0] * a.cols for _ in range(a.rows)])
        grid[i][j] = grid[i][j] + value

    for k, m in a.coeffs.items():
        grid_k = m.entries
        for i in range(a.rows):
            for j in range(a.cols):
                v = grid_k[i][j]
                if v == 0:
                    continue
                if (i in lowered_set) == (j in lowered_set):
                    put(k, i, j, v)
                elif i in lowered_set:
                    put(k + 1, i, j, v)
                else:
                    put(k - 1, i, j, v)
    for i in idx:
        put(1, i, i, -1)
    prec = None if a.precision is None else a.precision - 1
    return MatrixSeries(
        a.rows, a.cols, {k: Matrix.from_rows(g, a.cols) for k, g in out.items()}, prec
    )


def shear_gauge(n: int, lowered: Iterable[int], power: int = -1) -> MatrixSeries:
    """The exact gauge ``diag(u^power on lowered, 1 elsewhere)``."""

    idx = set(lowered)
    low = Matrix.diagonal([1 if i in idx else 0 for i in range(n)])
    high = Matrix.diagonal([0 if i in idx else 1 for i in range(n)])
    return MatrixSeries(n, n, {power: low, 0: high}, None) if idx else MatrixSeries.identity(n)


def polynomial_gauge(x: Matrix, order: int, n: int) -> MatrixSeries:
    """Exact ``I + X u^order``."""

    return MatrixSeries(n, n, {0: Matrix.identity(n), order: x}, None)


def lift_series(a: MatrixSeries, field: Optional[NumberField]) -> MatrixSeries:
    return a if field is None else a.lift(field)


def scalar_series(n: int, value: Any, field: Optional[NumberField] = None) -> MatrixSeries:
    return MatrixSeries.constant(Matrix.scalar(n, lift(value, field)))


__all__ = [
    "MatrixSeries",
    "conjugate_constant",
    "gauge",
    "lift_series",
    "naive_conjugate",
    "polynomial_gauge",
    "scalar_series",
    "shear",
    "shear_gauge",
]
