"""JSON problem files.

Schema::

    {
      "gamma": 0.5,               non-integer, > 0
      "L": 1,                     positive integer
      "f": "x^0.5",               expression in x
      "g": "...",                 expression in x
      "boundary": [               exactly ceil(gamma) rows
        {"rho0": 1, "rho1": 0, "zeta0": 1, "zeta1": 0, "c": 2}
      ],
      "exact": "2*x"              optional
    }
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Union

import jsonschema

from .collocation import BoundaryRow, BvpProblem
from .expression import Expression, ExpressionError
from .specfun import FractionalOrder

_ROW_KEYS = ("rho0", "rho1", "zeta0", "zeta1", "c")

PROBLEM_SCHEMA = {
    "type": "object",
    "properties": {
        "gamma": {"type": "number", "exclusiveMinimum": 0},
        "L": {"type": "integer", "minimum": 1},
        "f": {"type": "string"},
        "g": {"type": "string"},
        "boundary": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {k: {"type": "number"} for k in _ROW_KEYS},
                "required": list(_ROW_KEYS),
                "additionalProperties": False,
            },
        },
        "exact": {"type": "string"},
    },
    "required": ["gamma", "L", "f", "g", "boundary"],
    "additionalProperties": False,
}

EXAMPLE_GAMMAS = {1: (0.25, 0.5, 0.75), 2: (1.25, 1.5, 1.75), 3: (1.25, 1.5, 1.75)}
DEFAULT_GAMMA = {1: 0.5, 2: 1.5, 3: 1.5}


class ProblemFileError(ValueError):
    """Problem file is malformed or describes an invalid problem."""


def problem_from_dict(data: dict[str, Any]) -> BvpProblem:
    """Validate a decoded problem file and compile its expressions."""
    try:
        jsonschema.validate(data, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ProblemFileError(f"schema error at {where}: {exc.message}") from exc

    gamma = float(data["gamma"])
    if gamma == math.floor(gamma):
        raise ProblemFileError(
            f"gamma = {gamma} is an integer; this solver handles non-integer orders only, "
            "use a classical solver for integer-order problems"
        )
    order = FractionalOrder(gamma)
    rows = [BoundaryRow(**{k: float(r[k]) for k in _ROW_KEYS}) for r in data["boundary"]]
    if len(rows) != order.ceil_gamma:
        raise ProblemFileError(
            f"gamma = {gamma} needs exactly ceil(gamma) = {order.ceil_gamma} boundary rows, "
            f"got {len(rows)}"
        )
    exprs = {}
    for key in ("f", "g", "exact"):
        if key in data:
            try:
                exprs[key] = Expression(data[key])
            except ExpressionError as exc:
                raise ProblemFileError(f"field {key!r}: {exc}") from exc
    try:
        return BvpProblem(
            order=order,
            length=data["L"],
            f=exprs["f"],
            g=exprs["g"],
            boundary_rows=tuple(rows),
            exact_solution=exprs.get("exact"),
        )
    except ValueError as exc:
        raise ProblemFileError(str(exc)) from exc


def load_problem(path: Union[str, Path]) -> BvpProblem:
    """Read and validate a problem file.

    Raises:
        OSError: when the file cannot be read.
        ProblemFileError: on malformed JSON, schema or validation failures.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: invalid JSON: {exc}") from exc
    return problem_from_dict(data)


def example_path(number: int, gamma: float | None = None):
    """Location of an embedded example problem file."""
    if number not in EXAMPLE_GAMMAS:
        raise ValueError(f"no example {number}; choose 1, 2 or 3")
    gamma = DEFAULT_GAMMA[number] if gamma is None else gamma
    if gamma not in EXAMPLE_GAMMAS[number]:
        raise ValueError(
            f"example {number} is embedded for gamma in {EXAMPLE_GAMMAS[number]}, got {gamma}"
        )
    return resources.files("fracollo") / "data" / f"example{number}_gamma{gamma}.json"


def example_data(number: int, gamma: float | None = None) -> dict[str, Any]:
    return json.loads(example_path(number, gamma).read_text(encoding="utf-8"))


def load_example(number: int, gamma: float | None = None) -> BvpProblem:
    return problem_from_dict(example_data(number, gamma))
