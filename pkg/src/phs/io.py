"""JSON/CSV serialization of vectors, rays, sequences, matrices and reports.

Vector JSON: ``{"dim": n, "components": [[re, im], ...]}`` (a bare list of
``[re, im]`` pairs is accepted on input).  Vector CSV: header ``index,re,im``.
Matrix JSON: ``{"dim": n, "entries": [[re, im], ...]}`` in row-major order.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .borel import FinitePartition
from .convergence import ConvergenceReport, StateSequence
from .projector import PureState


class ParseError(ValueError):
    pass


def pairs(arr) -> list:
    arr = np.asarray(arr, dtype=np.complex128).ravel()
    return [[float(z.real), float(z.imag)] for z in arr]


def from_pairs(data) -> np.ndarray:
    try:
        arr = np.array([complex(float(re), float(im)) for re, im in data], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"expected a list of [re, im] pairs: {exc}") from None
    if arr.size == 0 or not np.all(np.isfinite(arr)):
        raise ParseError("vector must be nonempty with finite components")
    return arr


def vector_to_json(vec, canonical: bool = False) -> dict:
    vec = np.asarray(vec, dtype=np.complex128)
    out = {"dim": int(vec.shape[0]), "components": pairs(vec)}
    if canonical:
        out["canonical"] = True
    return out


def vector_from_json(data) -> np.ndarray:
    if isinstance(data, dict):
        if "components" not in data:
            raise ParseError("vector object needs a 'components' field")
        vec = from_pairs(data["components"])
        if "dim" in data and int(data["dim"]) != vec.shape[0]:
            raise ParseError(f"dim {data['dim']} does not match {vec.shape[0]} components")
        return vec
    return from_pairs(data)


def vector_to_csv(vec) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "re", "im"])
    for i, z in enumerate(np.asarray(vec, dtype=np.complex128)):
        w.writerow([i, repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def vector_from_csv(text: str) -> np.ndarray:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows or set(rows[0]) != {"index", "re", "im"}:
        raise ParseError("CSV vector needs the header index,re,im")
    try:
        rows.sort(key=lambda r: int(r["index"]))
        if [int(r["index"]) for r in rows] != list(range(len(rows))):
            raise ParseError("CSV indices must be 0..n-1")
        return from_pairs([(r["re"], r["im"]) for r in rows])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad CSV row: {exc}") from None


def read_vector(path) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(str(exc)) from None
    if path.suffix.lower() == ".csv":
        return vector_from_csv(text)
    try:
        return vector_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None


def format_vector(vec, fmt: str = "json", canonical: bool = False) -> str:
    if fmt == "csv":
        return vector_to_csv(vec)
    return dumps(vector_to_json(vec, canonical=canonical))


def sequence_to_json(seq: StateSequence) -> dict:
    return {"dim": seq.dim, "label": seq.label, "states": [pairs(s.vec) for s in seq.states]}


def sequence_from_json(data: dict) -> StateSequence:
    try:
        states = [vector_from_json(v) for v in data["states"]]
        dim = int(data.get("dim", states[0].shape[0]))
    except (KeyError, IndexError, TypeError) as exc:
        raise ParseError(f"sequence JSON needs 'dim' and 'states': {exc}") from None
    if any(s.shape[0] != dim for s in states):
        raise ParseError("every state must have the declared dim")
    try:
        return StateSequence(tuple(PureState.from_vector(s) for s in states), label=str(data.get("label", "")))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=np.complex128)
    return {"dim": int(M.shape[0]), "entries": pairs(M)}


def matrix_from_json(data: dict) -> np.ndarray:
    try:
        n = int(data["dim"])
        flat = from_pairs(data["entries"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"matrix JSON needs 'dim' and 'entries': {exc}") from None
    if flat.size != n * n:
        raise ParseError(f"expected {n * n} entries, got {flat.size}")
    return flat.reshape(n, n)


def jsonable(obj):
    """Recursively convert reports (numpy, PureState, partitions) to JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, PureState):
        return pairs(obj.vec)
    if isinstance(obj, FinitePartition):
        return obj.to_list()
    if isinstance(obj, ConvergenceReport):
        return jsonable(obj.to_dict())
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return pairs(obj) if obj.ndim == 1 else matrix_to_json(obj)
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"
