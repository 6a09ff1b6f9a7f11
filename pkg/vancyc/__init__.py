"""vancyc: exact vanishing-cycle data from the Gauss-Manin system of a polynomial."""

from __future__ import annotations

__version__ = "0.1.0"

from .config import Settings
from .errors import VanishingCycleError
from .pipeline import run, run_isolated, run_nc
from .report import ProblemSpec, Report, load_problem

__all__ = [
    "ProblemSpec",
    "Report",
    "Settings",
    "VanishingCycleError",
    "__version__",
    "load_problem",
    "run",
    "run_isolated",
    "run_nc",
]
