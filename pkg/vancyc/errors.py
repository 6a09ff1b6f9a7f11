"""Exception hierarchy shared by every vancyc module.

Each error carries a machine-readable ``reason`` and the CLI exit code it maps to:
``2`` for diagnosed input outside the supported class, ``3`` for internal failures
(precision or stabilisation), ``1`` for syntax and I/O problems.
"""

from __future__ import annotations

from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_IO = 1
EXIT_DIAGNOSED = 2
EXIT_INTERNAL = 3


class VanishingCycleError(Exception):
    """Base class for every error raised by the engine."""

    reason = "error"
    exit_code = EXIT_INTERNAL

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "status": "error",
            "reason": self.reason,
            "message": self.message,
        }
        if self.details:
            payload["details"] = {key: str(value) for key, value in self.details.items()}
        return payload


# ---------------------------------------------------------------------------
# field
# ---------------------------------------------------------------------------


class IrreducibleFactor(VanishingCycleError):
    """A characteristic polynomial factor cannot be split under the active policy."""

    reason = "irreducible_factor"
    exit_code = EXIT_DIAGNOSED

    def __init__(self, polynomial: Any, message: Optional[str] = None) -> None:
        super().__init__(
            message or f"irreducible factor {polynomial} cannot be split", polynomial=polynomial
        )
        self.polynomial = polynomial


class SingularSylvester(VanishingCycleError):
    """``aX - Xb = c`` has no unique solution because the spectra of a and b meet."""

    reason = "singular_sylvester"
    exit_code = EXIT_INTERNAL


# ---------------------------------------------------------------------------
# mpoly
# ---------------------------------------------------------------------------


class PolynomialSyntaxError(VanishingCycleError):
    reason = "syntax_error"
    exit_code = EXIT_IO

    def __init__(self, message: str, position: int, text: str = "") -> None:
        super().__init__(f"{message} at offset {position}", position=position)
        self.position = position
        self.text = text


class UnknownVariable(VanishingCycleError):
    reason = "unknown_variable"
    exit_code = EXIT_IO

    def __init__(self, name: str, position: int) -> None:
        super().__init__(f"unknown variable {name!r} at offset {position}", name=name)
        self.name = name
        self.position = position


# ---------------------------------------------------------------------------
# groebner / brieskorn / microdiff
# ---------------------------------------------------------------------------


class NotIsolated(VanishingCycleError):
    """The Jacobian ideal is not zero-dimensional."""

    reason = "not_isolated"
    exit_code = EXIT_DIAGNOSED


class PrecisionExhausted(VanishingCycleError):
    reason = "precision_exhausted"
    exit_code = EXIT_INTERNAL


class NoStabilization(VanishingCycleError):
    reason = "no_stabilization"
    exit_code = EXIT_INTERNAL


class NonrationalExponent(VanishingCycleError):
    reason = "nonrational_exponent"
    exit_code = EXIT_DIAGNOSED


class ConsistencyError(VanishingCycleError):
    """Two independent computations of the same quantity disagree."""

    reason = "consistency_error"
    exit_code = EXIT_INTERNAL


# ---------------------------------------------------------------------------
# logmonomial / cli
# ---------------------------------------------------------------------------


class EmptyJ(VanishingCycleError):
    reason = "empty_j"
    exit_code = EXIT_DIAGNOSED


class WindowUnbounded(VanishingCycleError):
    reason = "window_unbounded"
    exit_code = EXIT_DIAGNOSED


class InvalidProblem(VanishingCycleError):
    reason = "invalid_problem"
    exit_code = EXIT_IO


class ProblemIOError(VanishingCycleError):
    reason = "io_error"
    exit_code = EXIT_IO


__all__ = [
    "EXIT_DIAGNOSED",
    "EXIT_INTERNAL",
    "EXIT_IO",
    "EXIT_OK",
    "ConsistencyError",
    "EmptyJ",
    "InvalidProblem",
    "IrreducibleFactor",
    "NoStabilization",
    "NonrationalExponent",
    "NotIsolated",
    "PolynomialSyntaxError",
    "PrecisionExhausted",
    "ProblemIOError",
    "SingularSylvester",
    "UnknownVariable",
    "VanishingCycleError",
    "WindowUnbounded",
]
