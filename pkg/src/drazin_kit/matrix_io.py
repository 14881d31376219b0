"""JSON matrix and instance files.

A matrix file is ``{"rows": r, "cols": c, "data": [[...], ...]}`` with each
entry either a real number or an ``[re, im]`` pair.  An instance file is
``{"kind": "pseudo_block" | "block2x2", "family": str, <blocks>}`` where the
blocks are keyed ``P, Q, R, S`` or ``A, B, C, D`` and each holds a matrix
file body.  Writers emit sorted keys and ``repr`` floats, so equal inputs
give byte-identical files.
"""

import json
import numbers

import numpy as np

from . import linalg as la
from .errors import ShapeError
from .instances import BlockInstance, PseudoBlockInstance

KINDS = {"pseudo_block": "PQRS", "block2x2": "ABCD"}


class FileFormatError(ValueError):
    """Malformed matrix or instance document."""


def _entry_out(z):
    z = complex(z)
    if z.imag == 0.0:
        return float(z.real)
    return [float(z.real), float(z.imag)]


def _entry_in(v, where):
    if isinstance(v, bool):
        raise FileFormatError(f"{where}: boolean is not a number")
    if isinstance(v, numbers.Real):
        return complex(float(v), 0.0)
    if (
        isinstance(v, list)
        and len(v) == 2
        and all(isinstance(x, numbers.Real) and not isinstance(x, bool) for x in v)
    ):
        return complex(float(v[0]), float(v[1]))
    raise FileFormatError(f"{where}: expected a number or [re, im], got {v!r}")


def matrix_to_dict(a):
    a = np.asarray(a, dtype=la.CDTYPE)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {a.shape}")
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[_entry_out(z) for z in row] for row in a],
    }


def matrix_from_dict(doc, name="matrix"):
    if not isinstance(doc, dict):
        raise FileFormatError(f"{name}: expected an object with rows, cols, data")
    try:
        rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    except KeyError as exc:
        raise FileFormatError(f"{name}: missing key {exc.args[0]!r}") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise FileFormatError(f"{name}: rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows:
        raise FileFormatError(f"{name}: data must hold exactly {rows} rows")
    out = np.empty((rows, cols), dtype=la.CDTYPE)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise FileFormatError(f"{name}: row {i} must hold exactly {cols} entries")
        for j, v in enumerate(row):
            out[i, j] = _entry_in(v, f"{name}[{i}][{j}]")
    return la.as_cmatrix(out, name)


def instance_to_dict(inst):
    if isinstance(inst, PseudoBlockInstance):
        kind, keys = "pseudo_block", "PQRS"
    elif isinstance(inst, BlockInstance):
        kind, keys = "block2x2", "ABCD"
    else:
        raise TypeError(f"not an instance: {type(inst).__name__}")
    doc = {"kind": kind, "family": inst.family}
    for key, x in zip(keys, inst.blocks):
        doc[key] = matrix_to_dict(x)
    return doc


def instance_from_dict(doc):
    if not isinstance(doc, dict):
        raise FileFormatError("instance file must hold a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise FileFormatError(f"kind must be one of {sorted(KINDS)}, got {kind!r}")
    family = doc.get("family", "")
    if not isinstance(family, str):
        raise FileFormatError("family must be a string")
    keys = KINDS[kind]
    missing = [k for k in keys if k not in doc]
    if missing:
        raise FileFormatError(f"{kind} instance is missing blocks {', '.join(missing)}")
    blocks = [matrix_from_dict(doc[k], k) for k in keys]
    cls = PseudoBlockInstance if kind == "pseudo_block" else BlockInstance
    return cls(*blocks, family=family)


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from None


def read_matrix(path):
    return matrix_from_dict(_load_json(path), str(path))


def read_instance(path):
    return instance_from_dict(_load_json(path))


def write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def write_matrix(path, a):
    write_text(path, dumps(matrix_to_dict(a)))


def write_instance(path, inst):
    write_text(path, dumps(instance_to_dict(inst)))
