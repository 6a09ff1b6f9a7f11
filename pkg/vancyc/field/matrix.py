"""Immutable dense matrices over ℚ or a single extension ℚ[s]/(p).

Storage and elimination are sympy's :class:`DomainMatrix` over ``QQ`` or the
extension's ``AlgebraicField``; this wrapper keeps the exact-scalar face the
rest of the engine works with and remembers which :class:`NumberField` the
domain came from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from .scalars import (
    NumberField,
    Scalar,
    domain_of,
    field_of,
    format_scalar,
    from_domain,
    join_fields,
    to_domain,
    to_fraction,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def _dense(rows: List[List[Any]], shape: Tuple[int, int], field: Optional[NumberField]) -> DomainMatrix:
    return DomainMatrix(rows, shape, domain_of(field)).to_dense()


@dataclass(frozen=True, eq=False)
class Matrix:
    """Rectangular grid of exact scalars held as a dense sympy ``DomainMatrix``."""

    rep: DomainMatrix
    number_field: Optional[NumberField] = None

    def __post_init__(self) -> None:
        if self.rep.domain != domain_of(self.number_field):
            raise ValueError("matrix domain does not match its number field")

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> "Matrix":
        grid = [list(row) for row in rows]
        width = cols if cols is not None else (len(grid[0]) if grid else 0)
        if any(len(row) != width for row in grid):
            raise ValueError("matrix entries do not match the declared shape")
        field = field_of(v for row in grid for v in row)
        converted = [[to_domain(v, field) for v in row] for row in grid]
        return cls(_dense(converted, (len(grid), width), field), field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], rows: int) -> "Matrix":
        return cls.from_rows([[col[i] for col in columns] for i in range(rows)], len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None, field: Optional[NumberField] = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(DomainMatrix.zeros((rows, cols), domain_of(field)).to_dense(), field)

    @classmethod
    def identity(cls, n: int, field: Optional[NumberField] = None) -> "Matrix":
        return cls(DomainMatrix.eye(n, domain_of(field)).to_dense(), field)

    @classmethod
    def diagonal(cls, values: Sequence[Any]) -> "Matrix":
        field = field_of(values)
        elements = [to_domain(v, field) for v in values]
        return cls(DomainMatrix.diag(elements, domain_of(field)).to_dense(), field)

    @classmethod
    def scalar(cls, n: int, value: Any) -> "Matrix":
        return cls.diagonal([value] * n)

    # ------------------------------------------------------------------
    # access
    # ------------------------------------------------------------------
    @property
    def rows(self) -> int:
        return self.rep.shape[0]

    @property
    def cols(self) -> int:
        return self.rep.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rep.shape

    @property
    def domain(self) -> Any:
        return self.rep.domain

    @property
    def field(self) -> Optional[NumberField]:
        return self.number_field

    @property
    def entries(self) -> Tuple[Tuple[Scalar, ...], ...]:
        field = self.number_field
        return tuple(tuple(from_domain(v, field) for v in row) for row in self.rep.to_list())

    def _wrap(self, rep: DomainMatrix, field: Optional[NumberField] = None) -> "Matrix":
        return Matrix(rep.to_dense(), self.number_field if field is None else field)

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        return from_domain(self.rep[index].element, self.number_field)

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return self.entries[i]

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Tuple[Scalar, ...]]:
        return [tuple(col) for col in zip(*self.entries)] if self.rows else [() for _ in range(self.cols)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return bool(self.rep.is_zero_matrix)

    def is_rational(self) -> bool:
        if self.number_field is None:
            return True
        return all(v.is_ground for row in self.rep.to_list() for v in row)

    def is_diagonal(self) -> bool:
        return bool(self.rep.is_diagonal)

    def is_upper_triangular(self) -> bool:
        return bool(self.rep.is_upper)

    def is_lower_triangular(self) -> bool:
        return bool(self.rep.is_lower)

    def diagonal_entries(self) -> Tuple[Scalar, ...]:
        return tuple(from_domain(v, self.number_field) for v in self.rep.diagonal())

    def trace(self) -> Scalar:
        total = self.domain.zero
        for v in self.rep.diagonal():
            total = total + v
        return from_domain(total, self.number_field)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def _unify(self, other: "Matrix") -> Tuple[DomainMatrix, DomainMatrix, Optional[NumberField]]:
        field = join_fields(self.number_field, other.number_field)
        domain = domain_of(field)
        return self.rep.convert_to(domain), other.rep.convert_to(domain), field

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        a, b, field = self._unify(other)
        return self._wrap(a + b, field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        a, b, field = self._unify(other)
        return self._wrap(a - b, field)

    def __neg__(self) -> "Matrix":
        return self._wrap(-self.rep)

    def scale(self, factor: Any) -> "Matrix":
        field = join_fields(self.number_field, field_of([factor]))
        rep = self.rep.convert_to(domain_of(field))
        return self._wrap(rep.scalarmul(to_domain(factor, field)), field)

    def __mul__(self, factor: Any) -> "Matrix":
        if isinstance(factor, Matrix):
            return self @ factor
        return self.scale(factor)

    def __rmul__(self, factor: Any) -> "Matrix":
        return self.scale(factor)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        a, b, field = self._unify(other)
        return self._wrap(a.matmul(b), field)

    def apply(self, vector: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match matrix width")
        product = self @ Matrix.from_columns([vector], self.cols) if self.cols else None
        if product is None:
            return tuple(from_domain(self.domain.zero, self.number_field) for _ in range(self.rows))
        return product.column(0)

    def __pow__(self, exponent: int) -> "Matrix":
        if not self.is_square():
            raise ValueError("only square matrices have powers")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self._wrap(self.rep**exponent)

    def minus_scalar(self, value: Any) -> "Matrix":
        """Return ``self - value * I``."""

        field = join_fields(self.number_field, field_of([value]))
        domain = domain_of(field)
        shift = DomainMatrix.eye(self.rows, domain).to_dense().scalarmul(to_domain(value, field))
        return self._wrap(self.rep.convert_to(domain) - shift, field)

    def transpose(self) -> "Matrix":
        return self._wrap(self.rep.transpose())

    def lift(self, field: Optional[NumberField]) -> "Matrix":
        if field == self.number_field:
            return self
        if field is None:
            rows = [[to_fraction(v) for v in row] for row in self.entries]
            return Matrix(_dense([[to_domain(v, None) for v in r] for r in rows], self.shape, None))
        if self.number_field is not None:
            raise ValueError("elements of different extensions cannot be combined")
        return Matrix(self.rep.convert_to(field.domain), field)

    # ------------------------------------------------------------------
    # blocks
    # ------------------------------------------------------------------
    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return self._wrap(self.rep.extract(list(row_idx), list(col_idx)))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        a, b, field = self._unify(other)
        return self._wrap(a.hstack(b), field)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        a, b, field = self._unify(other)
        return self._wrap(a.vstack(b), field)

    @staticmethod
    def block_diagonal(blocks: Sequence["Matrix"]) -> "Matrix":
        field = join_fields(*(b.number_field for b in blocks))
        domain = domain_of(field)
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        grid: List[List[Any]] = [[domain.zero] * m for _ in range(n)]
        r0 = c0 = 0
        for block in blocks:
            for i, row in enumerate(block.rep.convert_to(domain).to_list()):
                grid[r0 + i][c0 : c0 + block.cols] = row
            r0 += block.rows
            c0 += block.cols
        return Matrix(_dense(grid, (n, m), field), field)

    # ------------------------------------------------------------------
    # elimination
    # ------------------------------------------------------------------
    def rref(self) -> Tuple["Matrix", Tuple[int, ...]]:
        """Reduced row echelon form and pivot columns."""

        if 0 in self.shape:
            return self, ()
        reduced, pivots = self.rep.rref()
        return self._wrap(reduced), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> List[Tuple[Scalar, ...]]:
        """Basis of the right null space, each vector scaled so its first nonzero entry is 1."""

        if self.cols == 0:
            return []
        if self.rows == 0:
            return list(Matrix.identity(self.cols, self.number_field).entries)
        basis: List[Tuple[Scalar, ...]] = []
        for row in self.rep.nullspace().to_list():
            lead = next(v for v in row if v)
            basis.append(tuple(from_domain(v / lead, self.number_field) for v in row))
        return basis

    def kernel_matrix(self) -> "Matrix":
        kernel = self.kernel()
        if not kernel:
            return Matrix.zeros(self.cols, 0, self.number_field)
        return Matrix.from_columns(kernel, self.cols).lift(self.number_field)

    def column_space(self) -> "Matrix":
        _, pivots = self.rref()
        return self.submatrix(range(self.rows), pivots)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("only square matrices are invertible")
        try:
            return self._wrap(self.rep.inv())
        except DMNonInvertibleMatrixError as exc:
            raise ZeroDivisionError("matrix is singular") from exc

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def solve(self, rhs: "Matrix") -> "Matrix":
        """Solve ``self @ X = rhs`` for square invertible ``self``."""

        return self.inverse() @ rhs

    def charpoly_coeffs(self) -> List[Scalar]:
        """Characteristic polynomial coefficients, highest degree first."""

        return [from_domain(c, self.number_field) for c in self.rep.charpoly()]

    # ------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b, _ = self._unify(other)
        return a == b

    def __hash__(self) -> int:
        return hash((self.shape, tuple(tuple(r) for r in self.to_strings())))

    def to_strings(self) -> List[List[str]]:
        return [[format_scalar(v) for v in row] for row in self.entries]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.to_strings()) + "]"

    def __repr__(self) -> str:
        return f"Matrix({self})"


def vector_is_zero(vector: Iterable[Scalar]) -> bool:
    return all(v == 0 for v in vector)


__all__ = ["Matrix", "ONE", "ZERO", "vector_is_zero"]
