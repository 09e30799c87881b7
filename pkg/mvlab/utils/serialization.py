"""Conversion of scalars, matrices and results to JSON-ready values and back.

Rationals are written as "p/q" strings so that they survive a round trip exactly. Gaussian rationals and complex floats
are written as {"re": ..., "im": ...} mappings.
"""

import json
from dataclasses import fields, is_dataclass
from enum import Enum
from typing import Any, Optional

import numpy as np
import sympy as sp
from pydantic import BaseModel

from mvlab.numeric_core import Matrix, as_matrix, is_exact, is_exact_scalar
from mvlab.utils.enums import Modes


def dump_scalar(value) -> Any:
    if is_exact_scalar(value):
        real, imaginary = sp.expand(value).as_real_imag()
        if imaginary == 0:
            return str(real)
        return {"re": str(real), "im": str(imaginary)}
    value = complex(value)
    if value.imag == 0:
        return value.real
    return {"re": value.real, "im": value.imag}


def dump_matrix(matrix: Matrix) -> list[list]:
    """The rows of a matrix as lists of JSON-ready scalars."""
    if is_exact(matrix):
        return [[dump_scalar(value) for value in row] for row in matrix.tolist()]
    return [[dump_scalar(value) for value in row] for row in np.asarray(matrix).tolist()]


def load_matrix(data, mode: Optional[Modes] = None) -> Matrix:
    """Read a matrix written by ``dump_matrix``, or any nested list accepted by ``as_matrix``."""
    return as_matrix(data, mode)


def to_json_value(value) -> Any:
    """Convert a result object to plain JSON types.

    Matrices become lists of rows, projective models and dataclasses become mappings of their fields and enums become
    their values. Python integers are counts and stay numbers; exact scalars are written by ``dump_scalar``.
    """
    if isinstance(value, (sp.MatrixBase, np.ndarray)):
        return dump_matrix(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, BaseModel):
        return {name: to_json_value(getattr(value, name)) for name in type(value).model_fields}
    if is_dataclass(value) and not isinstance(value, type):
        return {field.name: to_json_value(getattr(value, field.name)) for field in fields(value)}
    if isinstance(value, dict):
        return {str(key): to_json_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(item) for item in value]
    if value is None or isinstance(value, (bool, str, int)):
        return value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, complex, np.number, sp.Basic)):
        return dump_scalar(value)
    if isinstance(value, Exception):
        return {"error": str(value)}
    raise TypeError(f"Values of type {type(value).__name__} cannot be written as JSON")


def dumps(value) -> str:
    """Write a value as JSON with sorted keys, so equal results give identical text."""
    return json.dumps(to_json_value(value), sort_keys=True)
