"""Normal form of a lattice with ``t = A(u) + u²∂_u``, one block per critical value.

Steps, per module:

1. ``decouple``: split by generalized eigenspaces of ``A_0`` and kill the
   off-diagonal blocks order by order with gauges ``I + X u^i`` (Sylvester).
2. ``regularize``: twist ``t -> t - c`` and saturate the lattice under
   ``u⁻¹(t - c)`` until the constant term vanishes; the order-one term is the residue.
3. ``desresonate``: shear eigen-directions until no two residue eigenvalues
   differ by a nonzero integer.
4. ``monodromy``: Jordan data of the final residue, eigenvalue ``exp(-2πiβ)``
   recorded as the exact rotation number ``β mod 1``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .brieskorn import MicroModule
from .errors import (
    IrreducibleFactor,
    NonrationalExponent,
    NoStabilization,
    PrecisionExhausted,
)
from .field.linalg import (
    ExtensionPolicy,
    char_poly,
    jordan_data,
    solve_sylvester,
    split_spectrum,
)
from .field.matrix import Matrix
from .field.scalars import (
    AlgebraicElement,
    NumberField,
    Scalar,
    format_scalar,
    fractional_part,
    is_rational,
    scalar_sort_key,
    to_fraction,
)
from .field.upoly import UPoly, factor_over_rationals
from .series import (
    MatrixSeries,
    conjugate_constant,
    gauge,
    polynomial_gauge,
    shear,
    shear_gauge,
)

LOGGER = logging.getLogger("vancyc.microdiff")


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeBasis:
    """Columns of ``series`` express the new lattice basis over the old one."""

    series: MatrixSeries
    precision_consumed: int = 0

    @classmethod
    def identity(cls, n: int) -> "LatticeBasis":
        return cls(MatrixSeries.identity(n))

    @property
    def window(self) -> Tuple[int, int]:
        orders = self.series.orders or [0]
        return min(orders), max(orders)

    def then(self, step: MatrixSeries, consumed: int = 0) -> "LatticeBasis":
        return LatticeBasis(self.series @ step, self.precision_consumed + consumed)

    def to_dict(self) -> Dict[str, Any]:
        low, high = self.window
        return {
            "window": [low, high],
            "precision_consumed": self.precision_consumed,
            "coefficients": {str(k): m.to_strings() for k, m in self.series.coeffs.items()},
        }


@dataclass(frozen=True)
class CriticalBlock:
    """The summand of the decoupled module sitting over one critical value."""

    value: Scalar
    module: MicroModule
    orbit_size: int = 1
    minimal_polynomial: Optional[UPoly] = None

    @property
    def dim(self) -> int:
        return self.module.dim


@dataclass(frozen=True)
class Decoupling:
    blocks: Tuple[CriticalBlock, ...]
    change_of_basis: Matrix
    gauge: MatrixSeries
    series: MatrixSeries
    field: Optional[NumberField] = None


@dataclass(frozen=True)
class Regularization:
    residue: Matrix
    series: MatrixSeries
    basis: LatticeBasis
    steps: int


@dataclass(frozen=True)
class Desresonance:
    residue: Matrix
    series: MatrixSeries
    basis: LatticeBasis
    spectrum: Tuple[Fraction, ...]
    shift: int
    steps: int


@dataclass(frozen=True)
class MonodromyBlock:
    """Jordan blocks of ``T`` with eigenvalue ``exp(-2πi·exponent)``."""

    exponent: Fraction
    sizes: Tuple[int, ...]

    @property
    def rotation(self) -> Fraction:
        return fractional_part(self.exponent)

    @property
    def order(self) -> int:
        return self.rotation.denominator

    @property
    def multiplicity(self) -> int:
        return sum(self.sizes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "exponent": str(self.exponent),
            "rotation": str(self.rotation),
            "order": self.order,
            "sizes": list(self.sizes),
        }


@dataclass(frozen=True)
class ECFactor:
    """One summand ``Ê(H^{k-1}(X_c, φ_{f-c}), T_c)_c`` of the answer."""

    critical_value: Scalar
    dimension: int
    monodromy: Tuple[MonodromyBlock, ...]
    degree: int
    spectrum: Tuple[Fraction, ...] = ()
    shift: int = 0
    route: str = "direct"
    residue: Optional[Matrix] = None
    orbit_size: int = 1
    minimal_polynomial: Optional[str] = None

    @property
    def exponents(self) -> Tuple[Fraction, ...]:
        out: List[Fraction] = []
        for block in self.monodromy:
            out.extend([block.exponent] * block.multiplicity)
        return tuple(sorted(out))

    def canonical(self) -> Tuple[Any, ...]:
        """Gauge-independent data, for comparing runs."""

        return (
            format_scalar(self.critical_value),
            self.minimal_polynomial,
            self.dimension,
            tuple((b.exponent, b.sizes) for b in self.monodromy),
            self.degree,
            self.spectrum,
            self.shift,
        )

    def to_dict(self) -> Dict[str, Any]:
        value = self.critical_value
        payload: Dict[str, Any] = {
            "critical_value": format_scalar(value),
            "dimension": self.dimension,
            "orbit_size": self.orbit_size,
            "degree": self.degree,
            "monodromy": [b.to_dict() for b in self.monodromy],
            "exponents": [str(e) for e in self.exponents],
            "spectrum": [str(e) for e in self.spectrum],
            "shift": self.shift,
            "route": self.route,
        }
        if self.minimal_polynomial is not None:
            payload["minimal_polynomial"] = self.minimal_polynomial
            if isinstance(value, AlgebraicElement):
                payload["power_basis"] = [str(c) for c in value.coeffs]
        if self.residue is not None:
            payload["residue"] = self.residue.to_strings()
        return payload


# ---------------------------------------------------------------------------
# decoupling
# ---------------------------------------------------------------------------


def _index_groups(sizes: Sequence[int]) -> List[List[int]]:
    groups = []
    start = 0
    for size in sizes:
        groups.append(list(range(start, start + size)))
        start += size
    return groups


def decouple_with_gauge(
    module: MicroModule, policy: ExtensionPolicy | str = ExtensionPolicy.RATIONAL_ONLY
) -> Decoupling:
    """Decouple and also return the constant change of basis and the gauge used."""

    n = module.dim
    if n == 0:
        empty = MatrixSeries.zero(0, 0, module.series.precision)
        return Decoupling((), Matrix.zeros(0, 0), empty, empty)
    precision = module.precision
    if precision < n + 2:
        raise PrecisionExhausted(
            f"decoupling needs at least {n + 2} orders, have {precision}",
            precision=precision,
            dimension=n,
        )

    split = split_spectrum(module.a0, policy)
    field_ = split.field
    q = split.change_of_basis()
    series = conjugate_constant(module.series.lift(field_), q)

    sizes = [e.multiplicity for e in split.entries]
    if split.remainder.cols:
        sizes.append(split.remainder.cols)
    groups = _index_groups(sizes)
    a0 = series.coefficient(0)
    diagonal = [a0.submatrix(g, g) for g in groups]

    total = MatrixSeries.identity(n).with_precision(precision)
    if len(groups) > 1:
        for order in range(1, precision + 1):
            a_i = series.coefficient(order)
            grid: List[List[Scalar]] = [[Fraction(0)] * n for _ in range(n)]
            touched = False
            for p, rows in enumerate(groups):
                for r, cols in enumerate(groups):
                    if p == r:
                        continue
                    coupling = a_i.submatrix(rows, cols)
                    if coupling.is_zero():
                        continue
                    x = solve_sylvester(diagonal[p], diagonal[r], -coupling)
                    for a, i in enumerate(rows):
                        for b, j in enumerate(cols):
                            grid[i][j] = x[a, b]
                    touched = True
            if not touched:
                continue
            x_full = Matrix.from_rows(grid)
            step = polynomial_gauge(x_full, order, n)
            series = gauge(series, step, step.inverse_to(precision))
            total = (total @ step).with_precision(precision)
            LOGGER.debug("decoupling gauge applied at order %d", order)

    blocks: List[CriticalBlock] = []
    for entry, idx in zip(split.entries, groups):
        sub = series.submatrix(idx, idx)
        value = entry.eigenvalue
        orbit = 1
        minimal: Optional[UPoly] = None
        if field_ is not None and not is_rational(value):
            orbit = field_.degree
            minimal = field_.modulus
        blocks.append(
            CriticalBlock(value, module.with_series(sub), orbit, minimal)
        )
    return Decoupling(tuple(blocks), q, total, series, field_)


def decouple(
    module: MicroModule, policy: ExtensionPolicy | str = ExtensionPolicy.RATIONAL_ONLY
) -> List[CriticalBlock]:
    """One block per critical value; conjugate values are represented by one orbit member."""

    return list(decouple_with_gauge(module, policy).blocks)


# ---------------------------------------------------------------------------
# saturation
# ---------------------------------------------------------------------------


def _image_and_complement(m: Matrix) -> Tuple[Matrix, int]:
    """Invertible ``Q`` whose first ``r`` columns span the image of ``m``."""

    image = m.column_space()
    rank = image.cols
    columns = list(image.columns())
    for j in range(m.rows):
        unit = tuple((1 if i == j else 0) for i in range(m.rows))
        candidate = Matrix.from_columns(columns + [unit], m.rows)
        if candidate.rank() > len(columns):
            columns.append(unit)
        if len(columns) == m.rows:
            break
    return Matrix.from_columns(columns, m.rows), rank


def regularize(block: MicroModule, value: Scalar) -> Regularization:
    """Twist by ``-value`` and saturate under ``u⁻¹(t - value)``.

    Raises NoStabilization if the constant term does not vanish within
    ``dim + n + 2`` saturation steps or the precision runs out.
    """

    n = block.dim
    if n == 0:
        return Regularization(
            Matrix.zeros(0, 0), block.series, LatticeBasis.identity(0), 0
        )
    series = block.series
    twisted0 = series.coefficient(0).minus_scalar(value)
    if not (twisted0**n).is_zero():
        raise ValueError("block has more than one eigenvalue in its constant term")
    coeffs = dict(series.coeffs)
    coeffs[0] = twisted0
    series = MatrixSeries(n, n, coeffs, series.precision)

    basis = LatticeBasis.identity(n)
    cap = n + block.n_vars + 2
    steps = 0
    while not series.coefficient(0).is_zero():
        steps += 1
        if steps > cap:
            raise NoStabilization(f"saturation did not stabilize within {cap} steps", cap=cap)
        if series.precision is not None and series.precision < 2:
            raise NoStabilization(
                "saturation exhausted the available precision", precision=series.precision
            )
        q, rank = _image_and_complement(series.coefficient(0))
        series = shear(conjugate_constant(series, q), range(rank))
        basis = basis.then(MatrixSeries.constant(q) @ shear_gauge(n, range(rank)), consumed=1)
        LOGGER.debug("saturation step %d adjoined %d directions", steps, rank)
    if series.precision is not None and series.precision < 1:
        raise NoStabilization("no order left for the residue", precision=series.precision)
    return Regularization(series.coefficient(1), series, basis, steps)


# ---------------------------------------------------------------------------
# resonance
# ---------------------------------------------------------------------------


def residue_eigenvalues(r: Matrix) -> List[Fraction]:
    """Eigenvalues with multiplicity, ascending; NonrationalExponent if any is irrational."""

    chi = char_poly(r)
    if not chi.is_rational():
        raise NonrationalExponent("residue has a non-rational characteristic polynomial")
    rational = UPoly(tuple(to_fraction(c) for c in chi.coeffs))
    values: List[Fraction] = []
    for factor, mult in factor_over_rationals(rational):
        if factor.degree != 1:
            raise NonrationalExponent(f"residue eigenvalues are roots of {factor}", polynomial=factor)
        values.extend([-factor.coeffs[0]] * mult)
    return sorted(values)


def _resonant_directions(values: Sequence[Fraction]) -> List[Fraction]:
    """Eigenvalues that sit above the smallest member of their class mod 1."""

    lowest: Dict[Fraction, Fraction] = {}
    for v in values:
        key = fractional_part(v)
        lowest[key] = min(lowest.get(key, v), v)
    return sorted({v for v in values if v != lowest[fractional_part(v)]})


def desresonate(
    r: Matrix, series: Optional[MatrixSeries] = None
) -> Desresonance:
    """Shear until no two residue eigenvalues differ by a nonzero integer.

    ``series`` is the full regular action ``R u + A_2 u² + …``; when omitted the
    action is exactly ``R u``. Every eigenvalue is moved down to the smallest
    member of its class mod 1.
    """

    n = r.rows
    if series is None:
        series = MatrixSeries.monomial(r, 1)
    spectrum = tuple(residue_eigenvalues(r))
    basis = LatticeBasis.identity(n)
    steps = 0
    residue = r
    cap = n + sum(int(v - _class_minimum(spectrum, v)) for v in spectrum)
    while True:
        values = residue_eigenvalues(residue)
        lowered_values = _resonant_directions(values)
        if not lowered_values:
            break
        steps += 1
        if steps > cap:
            raise NoStabilization("resonance shearing did not terminate", cap=cap)
        split = split_spectrum(residue, ExtensionPolicy.RATIONAL_ONLY)
        q = split.change_of_basis()
        series = conjugate_constant(series, q)
        groups = _index_groups([e.multiplicity for e in split.entries])
        lowered = [
            i
            for entry, idx in zip(split.entries, groups)
            if to_fraction(entry.eigenvalue) in lowered_values
            for i in idx
        ]
        if series.precision is not None and series.precision < 2:
            raise PrecisionExhausted(
                "not enough orders left to remove resonance", precision=series.precision
            )
        series = shear(series, lowered)
        basis = basis.then(MatrixSeries.constant(q) @ shear_gauge(n, lowered), consumed=1)
        residue = series.coefficient(1)
        LOGGER.debug("resonance step %d lowered %d directions", steps, len(lowered))

    final = residue_eigenvalues(residue)
    shift = sum(spectrum, Fraction(0)) - sum(final, Fraction(0))
    if shift.denominator != 1 or _trace(r) - _trace(residue) != shift:
        raise ArithmeticError("resonance shift does not reconcile with the traces")
    return Desresonance(residue, series, basis, spectrum, int(shift), steps)


def _class_minimum(values: Sequence[Fraction], v: Fraction) -> Fraction:
    return min(w for w in values if fractional_part(w) == fractional_part(v))


def _trace(m: Matrix) -> Fraction:
    return to_fraction(m.trace()) if m.rows else Fraction(0)


# ---------------------------------------------------------------------------
# monodromy
# ---------------------------------------------------------------------------


def monodromy(
    r: Matrix,
    value: Scalar,
    degree: int,
    *,
    spectrum: Sequence[Fraction] = (),
    shift: int = 0,
    route: str = "direct",
    orbit_size: int = 1,
    minimal_polynomial: Optional[UPoly] = None,
) -> ECFactor:
    """Jordan data of ``exp(-2πiR)`` for a non-resonant residue ``R``."""

    blocks: List[MonodromyBlock] = []
    if r.rows:
        try:
            data = jordan_data(r, ExtensionPolicy.RATIONAL_ONLY)
        except IrreducibleFactor as exc:
            raise NonrationalExponent(
                "monodromy exponents are not rational", polynomial=exc.polynomial
            ) from exc
        for entry in data:
            if not is_rational(entry.eigenvalue):
                raise NonrationalExponent("monodromy exponent is not rational")
            blocks.append(MonodromyBlock(to_fraction(entry.eigenvalue), entry.sizes))
    rotations = [b.rotation for b in blocks]
    if len(set(rotations)) != len(rotations):
        raise ValueError("residue is resonant; desresonate it first")
    return ECFactor(
        critical_value=value,
        dimension=r.rows,
        monodromy=tuple(blocks),
        degree=degree,
        spectrum=tuple(spectrum) if spectrum else _exponent_multiset(blocks),
        shift=shift,
        route=route,
        residue=r,
        orbit_size=orbit_size,
        minimal_polynomial=None if minimal_polynomial is None else str(minimal_polynomial),
    )


def _exponent_multiset(blocks: Sequence[MonodromyBlock]) -> Tuple[Fraction, ...]:
    return tuple(sorted(b.exponent for b in blocks for _ in range(b.multiplicity)))


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def direct_residue(block: MicroModule, value: Scalar) -> Optional[Matrix]:
    """``A_1`` of the block when ``A_0 = value·I`` and ``A_1`` is non-resonant, else None.

    Such a lattice is already regular and its residue already normal, so the
    monodromy is read off ``A_1`` without saturating or shearing.
    """

    if block.dim == 0:
        return Matrix.zeros(0, 0)
    if not block.series.coefficient(0).minus_scalar(value).is_zero():
        return None
    if block.series.precision is not None and block.series.precision < 1:
        return None
    residue = block.series.coefficient(1)
    try:
        values = residue_eigenvalues(residue)
    except NonrationalExponent:
        return None
    if _resonant_directions(values):
        return None
    return residue


def analyze_block(block: CriticalBlock, degree: int, route: str = "auto") -> ECFactor:
    """Monodromy of one block.

    ``route`` is ``"auto"`` (direct when possible), ``"direct"`` (fails with
    ValueError when the direct reading does not apply) or ``"saturated"``.
    """

    if route not in ("auto", "direct", "saturated"):
        raise ValueError(f"unknown route {route!r}")
    residue = None if route == "saturated" else direct_residue(block.module, block.value)
    if residue is not None:
        LOGGER.info(
            "critical value %s: dim=%d read directly off A_1",
            format_scalar(block.value),
            block.dim,
        )
        return monodromy(
            residue,
            block.value,
            degree,
            spectrum=tuple(residue_eigenvalues(residue)),
            route="direct",
            orbit_size=block.orbit_size,
            minimal_polynomial=block.minimal_polynomial,
        )
    if route == "direct":
        raise ValueError("block is not a scalar-plus-non-resonant lattice")
    reg = regularize(block.module, block.value)
    des = desresonate(reg.residue, reg.series)
    LOGGER.info(
        "critical value %s: dim=%d saturation=%d resonance=%d",
        format_scalar(block.value),
        block.dim,
        reg.steps,
        des.steps,
    )
    return monodromy(
        des.residue,
        block.value,
        degree,
        spectrum=des.spectrum,
        shift=des.shift,
        route="saturated",
        orbit_size=block.orbit_size,
        minimal_polynomial=block.minimal_polynomial,
    )


def analyze_module(
    module: MicroModule,
    policy: ExtensionPolicy | str = ExtensionPolicy.RATIONAL_ONLY,
    *,
    degree: Optional[int] = None,
    threads: int = 1,
) -> List[ECFactor]:
    """All factors of a module, sorted by critical value."""

    degree = module.n_vars if degree is None else degree
    blocks = decouple(module, policy)
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            factors = list(executor.map(lambda b: analyze_block(b, degree), blocks))
    else:
        factors = [analyze_block(b, degree) for b in blocks]
    factors.sort(key=lambda f: scalar_sort_key(f.critical_value))
    return factors


__all__ = [
    "CriticalBlock",
    "Decoupling",
    "Desresonance",
    "ECFactor",
    "LatticeBasis",
    "MonodromyBlock",
    "Regularization",
    "analyze_block",
    "analyze_module",
    "decouple",
    "decouple_with_gauge",
    "direct_residue",
    "desresonate",
    "monodromy",
    "regularize",
    "residue_eigenvalues",
]
