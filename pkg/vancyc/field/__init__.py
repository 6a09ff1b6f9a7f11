"""Exact scalars, matrices and spectral linear algebra."""

from .linalg import (
    ExtensionPolicy,
    JordanEntry,
    SpectralEntry,
    SpectralSplit,
    char_poly,
    evaluate_at_matrix,
    jordan_data,
    solve_sylvester,
    split_spectrum,
)
from .matrix import Matrix
from .scalars import (
    AlgebraicElement,
    NumberField,
    Scalar,
    as_scalar,
    format_scalar,
    fractional_part,
    is_rational,
    lift,
    parse_rational,
    to_fraction,
)
from .upoly import UPoly, factor_over_rationals, rational_roots

__all__ = [
    "AlgebraicElement",
    "ExtensionPolicy",
    "JordanEntry",
    "Matrix",
    "NumberField",
    "Scalar",
    "SpectralEntry",
    "SpectralSplit",
    "UPoly",
    "as_scalar",
    "char_poly",
    "evaluate_at_matrix",
    "factor_over_rationals",
    "format_scalar",
    "fractional_part",
    "is_rational",
    "jordan_data",
    "lift",
    "parse_rational",
    "rational_roots",
    "solve_sylvester",
    "split_spectrum",
    "to_fraction",
]
