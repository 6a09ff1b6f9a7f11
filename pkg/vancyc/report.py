"""Problem and report documents.

Both are pydantic models. Problems are read from YAML or JSON (YAML is a
superset); reports are written as canonical JSON: sorted keys, two-space
indent, trailing newline, no ``null`` fields. Every number that is not a
count is an exact rational string such as ``"5/6"``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import InvalidProblem, ProblemIOError
from .field.scalars import parse_rational

SCHEMA_ID = "vancyc.report/1"
DEFAULT_WINDOW = ("0", "1")

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _rational_text(value: Any) -> str:
    return str(parse_rational(str(value)))


class ProblemSpec(BaseModel):
    """One problem. ``f`` uses the polynomial grammar of :mod:`vancyc.mpoly`."""

    model_config = ConfigDict(extra="forbid")

    mode: Literal["isolated", "nc-monomial"] = "isolated"
    variables: Optional[List[str]] = None
    f: Optional[str] = None
    precision: Optional[int] = Field(default=None, ge=0)
    extension: Literal["off", "one"] = "off"
    check: Literal["none", "basic", "full"] = "basic"

    # normal-crossing mode
    exponents: Optional[Dict[str, int]] = None
    boundary: List[str] = Field(default_factory=list)
    residues: Dict[str, str] = Field(default_factory=dict)
    window: Optional[List[str]] = None
    degree_bound: Optional[int] = Field(default=None, ge=0)
    i0: Optional[str] = None
    complex: Literal["relative", "absolute"] = "relative"

    @field_validator("variables")
    @classmethod
    def _names(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        if value is None:
            return value
        bad = [name for name in value if not _NAME.match(name)]
        if bad:
            raise ValueError(f"invalid variable names: {bad}")
        if len(set(value)) != len(value):
            raise ValueError("variable names must be distinct")
        return value

    @field_validator("residues", mode="before")
    @classmethod
    def _residue_text(cls, value: Any) -> Any:
        if isinstance(value, dict):
            return {str(k): _rational_text(v) for k, v in value.items()}
        return value

    @field_validator("window", mode="before")
    @classmethod
    def _window_text(cls, value: Any) -> Any:
        if value is None:
            return value
        if isinstance(value, str):
            value = value.split(",")
        if len(value) != 2:
            raise ValueError("window needs exactly two bounds a,b")
        return [_rational_text(v) for v in value]

    @model_validator(mode="after")
    def _mode_fields(self) -> "ProblemSpec":
        if self.mode == "isolated":
            if not self.f:
                raise ValueError("isolated mode needs an expression f")
        else:
            if not self.f and not self.exponents:
                raise ValueError("nc-monomial mode needs f or exponents")
            if self.exponents is not None and self.variables is None:
                raise ValueError("exponents need an explicit variable list")
        return self

    def window_bounds(self) -> Optional[tuple]:
        if self.window is None:
            return None
        return (Fraction(self.window[0]), Fraction(self.window[1]))


class MonodromyEntry(BaseModel):
    exponent: str
    rotation: str
    order: int
    sizes: List[int]


class FactorReport(BaseModel):
    critical_value: str
    minimal_polynomial: Optional[str] = None
    power_basis: Optional[List[str]] = None
    orbit_size: int = 1
    dimension: int
    degree: int
    monodromy: List[MonodromyEntry]
    exponents: List[str]
    spectrum: List[str]
    shift: int = 0
    route: Literal["direct", "saturated"] = "direct"
    residue: Optional[List[List[str]]] = None


class IsolatedResult(BaseModel):
    mu: int
    degree: int
    variables: List[str]
    milnor_basis: List[str]
    precision: int
    stabilized: bool
    factors: List[FactorReport]


class NCRow(BaseModel):
    eigenvalue: str
    degree: int
    multiplicity: int


class NCResult(BaseModel):
    i0: str
    complex: Literal["relative", "absolute"]
    boundary: List[str]
    table: List[NCRow]


class Report(BaseModel):
    schema_id: str = SCHEMA_ID
    status: Literal["ok"] = "ok"
    input: ProblemSpec
    isolated: Optional[IsolatedResult] = None
    nc: Optional[NCResult] = None
    timing: Optional[Dict[str, float]] = None

    def to_json(self) -> str:
        payload = self.model_dump(mode="json", exclude_none=True)
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.model_validate(json.loads(text))


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------


def problem_from_mapping(data: Any) -> ProblemSpec:
    if not isinstance(data, dict):
        raise InvalidProblem("problem document must be a mapping at the top level")
    try:
        return ProblemSpec.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(p) for p in first.get("loc", ())) or "problem"
        raise InvalidProblem(f"{location}: {first.get('msg', 'invalid value')}") from exc


def load_problem(path: Union[str, Path]) -> ProblemSpec:
    """Read a YAML or JSON problem file."""

    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
    except OSError as exc:
        raise ProblemIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except yaml.YAMLError as exc:
        raise InvalidProblem(f"{path} is not valid YAML/JSON: {exc}") from exc
    return problem_from_mapping(data)


__all__ = [
    "DEFAULT_WINDOW",
    "FactorReport",
    "IsolatedResult",
    "MonodromyEntry",
    "NCResult",
    "NCRow",
    "ProblemSpec",
    "Report",
    "SCHEMA_ID",
    "load_problem",
    "problem_from_mapping",
]
