"""JSON file formats for distributions, matrices, ensembles, POVMs and reports.

Complex entries are ``[re, im]`` pairs in row-major order.  Floats are written
with 17 significant digits so every file re-reads to bit-identical values.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import EntrolabError
from .probdist import Distribution, Joint2, Joint3, MarkovChain3
from .qentropy import POVM, Ensemble
from .qlinalg import DensityMatrix


class FormatError(EntrolabError):
    """A file is unreadable or does not follow the expected JSON layout."""


def _float(x) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == 0.0 and math.copysign(1.0, x) < 0:
        return "-0.0"
    return "%.17g" % x


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Serialize JSON-compatible data, keeping dict order and 17-digit floats.

    Lists of scalars stay on one line; everything else is indented.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def matrix_to_json(m) -> dict:
    arr = np.asarray(m, dtype=complex)
    rows, cols = arr.shape
    return {
        "dims": [rows, cols],
        "entries": [[float(z.real), float(z.imag)] for z in arr.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "dims" not in obj or "entries" not in obj:
        raise FormatError('matrix must be an object with "dims" and "entries"')
    dims, entries = obj["dims"], obj["entries"]
    if (
        not isinstance(dims, list)
        or len(dims) != 2
        or not all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in dims)
    ):
        raise FormatError(f'"dims" must be two positive integers, got {dims!r}')
    rows, cols = dims
    if not isinstance(entries, list) or len(entries) != rows * cols:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise FormatError(f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {got}")
    values = []
    for k, pair in enumerate(entries):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise FormatError(f"entry {k} must be a [re, im] pair of numbers, got {pair!r}")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise FormatError(f"entry {k} is not finite")
        values.append(complex(re, im))
    return np.array(values, dtype=complex).reshape(rows, cols)


def density_to_json(rho: DensityMatrix) -> dict:
    return matrix_to_json(rho.matrix)


def density_from_json(obj) -> DensityMatrix:
    return DensityMatrix(matrix_from_json(obj))


def ensemble_to_json(e: Ensemble) -> dict:
    return {
        "probs": [float(p) for p in e.probs.probs],
        "states": [density_to_json(s) for s in e.states],
    }


def _number_list(values, what: str) -> list[float]:
    if not isinstance(values, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in values
    ):
        raise FormatError(f"{what} must be a list of numbers")
    return [float(x) for x in values]


def ensemble_from_json(obj) -> Ensemble:
    if not isinstance(obj, dict) or "probs" not in obj or "states" not in obj:
        raise FormatError('ensemble must be an object with "probs" and "states"')
    if not isinstance(obj["states"], list):
        raise FormatError('"states" must be a list of matrices')
    probs = _number_list(obj["probs"], '"probs"')
    states = [density_from_json(s) for s in obj["states"]]
    return Ensemble(Distribution(probs), tuple(states))


def povm_to_json(m: POVM) -> dict:
    return {"elements": [matrix_to_json(e) for e in m.elements]}


def povm_from_json(obj) -> POVM:
    if not isinstance(obj, dict) or not isinstance(obj.get("elements"), list):
        raise FormatError('POVM must be an object with an "elements" list')
    return POVM(tuple(matrix_from_json(e) for e in obj["elements"]))


def _nested(values, depth: int, what: str):
    try:
        arr = np.array(values, dtype=object)
    except ValueError:
        raise FormatError(f"{what} is a ragged array") from None
    if arr.ndim != depth:
        raise FormatError(f"{what} must be a {depth}-dimensional array of numbers")
    for x in arr.ravel():
        if not isinstance(x, (int, float)) or isinstance(x, bool):
            raise FormatError(f"{what} contains a non-numeric entry {x!r}")
    return arr.astype(float)


def probs_from_json(obj):
    """Read ``{"probs": ...}`` (or a bare array) as a distribution or joint."""
    values = obj["probs"] if isinstance(obj, dict) and "probs" in obj else obj
    if not isinstance(values, list) or not values:
        raise FormatError('expected a non-empty "probs" array')
    depth = 1
    probe = values
    while isinstance(probe, list) and probe and isinstance(probe[0], list):
        depth += 1
        probe = probe[0]
    if depth > 3:
        raise FormatError("probability arrays have at most three axes")
    arr = _nested(values, depth, '"probs"')
    return (Distribution, Joint2, Joint3)[depth - 1](arr)


def probs_to_json(p) -> dict:
    return {"probs": np.asarray(p.probs).tolist()}


def encode_value(value) -> dict:
    """Tagged JSON form of a check input, decodable by :func:`decode_value`."""
    if isinstance(value, Distribution):
        return {"type": "distribution", "value": [float(x) for x in value.probs]}
    if isinstance(value, Joint2):
        return {"type": "joint2", "value": value.probs.tolist()}
    if isinstance(value, Joint3):
        return {"type": "joint3", "value": value.probs.tolist()}
    if isinstance(value, MarkovChain3):
        return {
            "type": "markov_chain",
            "value": {
                "source": [float(x) for x in value.source.probs],
                "trans_ab": value.trans_ab.tolist(),
                "trans_bc": value.trans_bc.tolist(),
            },
        }
    if isinstance(value, DensityMatrix):
        return {"type": "density", "value": density_to_json(value)}
    if isinstance(value, Ensemble):
        return {"type": "ensemble", "value": ensemble_to_json(value)}
    if isinstance(value, POVM):
        return {"type": "povm", "value": povm_to_json(value)}
    if isinstance(value, np.ndarray):
        return {"type": "matrix", "value": matrix_to_json(value)}
    if isinstance(value, (tuple, list)):
        return {"type": "list", "value": [encode_value(v) for v in value]}
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return {"type": "int", "value": int(value)}
    if isinstance(value, (float, np.floating)):
        return {"type": "float", "value": float(value)}
    raise TypeError(f"cannot encode {type(value).__name__}")


def decode_value(obj):
    kind, value = obj["type"], obj["value"]
    if kind == "distribution":
        return Distribution(value)
    if kind == "joint2":
        return Joint2(value)
    if kind == "joint3":
        return Joint3(value)
    if kind == "markov_chain":
        return MarkovChain3(Distribution(value["source"]), value["trans_ab"], value["trans_bc"])
    if kind == "density":
        return density_from_json(value)
    if kind == "ensemble":
        return ensemble_from_json(value)
    if kind == "povm":
        return povm_from_json(value)
    if kind == "matrix":
        return matrix_from_json(value)
    if kind == "list":
        return [decode_value(v) for v in value]
    if kind == "int":
        return int(value)
    if kind == "float":
        return float(value)
    raise FormatError(f"unknown value type {kind!r}")
