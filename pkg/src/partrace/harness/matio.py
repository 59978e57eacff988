"""Matrix files: ``{"m": int, "n": int, "data": [[re, im], ...]}`` row-major over ``(mn)^2`` entries."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from partrace.blockops import BlockMatrix
from partrace.errors import MatrixIOError


def matrix_to_dict(a: BlockMatrix) -> dict:
    flat = a.data.reshape(-1)
    return {"m": a.m, "n": a.n, "data": [[float(z.real), float(z.imag)] for z in flat]}


def _reject_constant(token):
    raise ValueError(f"non-finite value {token}")


def matrix_from_dict(obj, source="<input>") -> BlockMatrix:
    if not isinstance(obj, dict):
        raise MatrixIOError(f"{source}: top level must be an object")
    for key in ("m", "n", "data"):
        if key not in obj:
            raise MatrixIOError(f"{source}: missing field {key!r}")
    m, n, data = obj["m"], obj["n"], obj["data"]
    if not (isinstance(m, int) and isinstance(n, int)) or isinstance(m, bool) or isinstance(n, bool) or m < 1 or n < 1:
        raise MatrixIOError(f"{source}: m and n must be positive integers")
    d = m * n
    if not isinstance(data, list) or len(data) != d * d:
        got = len(data) if isinstance(data, list) else type(data).__name__
        raise MatrixIOError(f"{source}: data has {got} entries, expected (m*n)^2 = {d * d}")
    values = np.empty(d * d, dtype=np.complex128)
    for k, entry in enumerate(data):
        if (not isinstance(entry, list) or len(entry) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
            raise MatrixIOError(f"{source}: entry {k} must be a [re, im] pair of numbers")
        re, im = float(entry[0]), float(entry[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise MatrixIOError(f"{source}: entry {k} is not finite")
        values[k] = complex(re, im)
    return BlockMatrix(m, n, values.reshape(d, d))


def save_matrix(path, a: BlockMatrix) -> None:
    try:
        Path(path).write_text(json.dumps(matrix_to_dict(a), allow_nan=False) + "\n")
    except OSError as exc:
        raise MatrixIOError(f"{path}: {exc.strerror or exc}") from exc


def load_matrix(path) -> BlockMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixIOError(f"{path}: {exc.strerror or exc}") from exc
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise MatrixIOError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except ValueError as exc:
        raise MatrixIOError(f"{path}: {exc}") from exc
    return matrix_from_dict(obj, str(path))
