"""JSON encodings of the library's values.

Complex entries are ``[re, im]`` pairs, matrices are row-major nested lists,
tensor listings use 1-based indices.  Floats are written with ``repr``,
which round-trips doubles exactly.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import DimensionError
from .maps import AffineMap, DynamicalMapB, KrausSet
from .state import DensityMatrix, PolarizationVector
from .su_basis import GeneratorSet, StructureTensors


class SchemaError(ValueError):
    """Input JSON does not match the expected layout."""


def complex_to_json(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [complex_to_json(x) for x in a]


def complex_from_json(obj, field: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"field {field!r}: expected nested [re, im] pairs") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise SchemaError(f"field {field!r}: innermost entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _get(obj: dict, key: str, kind: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{kind}: missing field {key!r}")
    return obj[key]


def _dim(obj: dict, kind: str) -> int:
    d = _get(obj, "dim", kind)
    if not isinstance(d, int) or d < 2:
        raise SchemaError(f"{kind}: field 'dim' must be an integer >= 2, got {d!r}")
    return d


def _real(obj, field: str) -> np.ndarray:
    try:
        return np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"field {field!r}: expected real numbers") from exc


def _wrap(kind, fn):
    try:
        return fn()
    except DimensionError as exc:
        raise SchemaError(f"{kind}: {exc}") from exc


# --- encoders ---------------------------------------------------------------


def encode(obj) -> dict:
    if isinstance(obj, GeneratorSet):
        return {"type": "GeneratorSet", "dim": obj.dim, "generators": complex_to_json(obj.generators)}
    if isinstance(obj, StructureTensors):
        def listing(entries):
            return [{"i": i + 1, "j": j + 1, "k": k + 1, "value": v} for i, j, k, v in entries]
        return {"type": "StructureTensors", "dim": obj.dim,
                "f": listing(obj.nonzero_f()), "d": listing(obj.nonzero_d())}
    if isinstance(obj, DensityMatrix):
        return {"type": "DensityMatrix", "dim": obj.dim, "mat": complex_to_json(obj.mat)}
    if isinstance(obj, PolarizationVector):
        return {"type": "PolarizationVector", "dim": obj.dim, "n": obj.n.tolist()}
    if isinstance(obj, KrausSet):
        return {"type": "KrausSet", "dim": obj.dim,
                "terms": [{"eta": float(e), "C": complex_to_json(c)} for e, c in obj.terms]}
    if isinstance(obj, AffineMap):
        return {"type": "AffineMap", "dim": obj.dim, "T": obj.T.tolist(), "t": obj.t.tolist()}
    if isinstance(obj, DynamicalMapB):
        return {"type": "DynamicalMapB", "dim": obj.dim, "B": complex_to_json(obj.B)}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(encode(obj), indent=1) + "\n"


# --- decoders ---------------------------------------------------------------


def _square(m: np.ndarray, n: int, kind: str, field: str) -> np.ndarray:
    if m.shape != (n, n):
        raise SchemaError(f"{kind}: field {field!r} must be {n}x{n} [re, im] pairs, got shape {m.shape}")
    return m


def density_matrix_from_json(obj: dict) -> DensityMatrix:
    d = _dim(obj, "DensityMatrix")
    m = _square(complex_from_json(_get(obj, "mat", "DensityMatrix"), "mat"), d, "DensityMatrix", "mat")
    return _wrap("DensityMatrix", lambda: DensityMatrix(d, m))


def polarization_from_json(obj: dict) -> PolarizationVector:
    d = _dim(obj, "PolarizationVector")
    n = _real(_get(obj, "n", "PolarizationVector"), "n")
    return _wrap("PolarizationVector", lambda: PolarizationVector(d, n))


def kraus_from_json(obj: dict, gens: GeneratorSet | None = None) -> KrausSet:
    d = _dim(obj, "KrausSet")
    terms = _get(obj, "terms", "KrausSet")
    if not isinstance(terms, list) or not terms:
        raise SchemaError("KrausSet: field 'terms' must be a non-empty list")
    parsed = []
    for i, term in enumerate(terms):
        eta = _get(term, "eta", f"KrausSet.terms[{i}]")
        if not isinstance(eta, (int, float)):
            raise SchemaError(f"KrausSet.terms[{i}]: field 'eta' must be a number")
        C = complex_from_json(_get(term, "C", f"KrausSet.terms[{i}]"), f"terms[{i}].C")
        if C.shape != (d, d):
            raise SchemaError(f"KrausSet.terms[{i}]: field 'C' must be {d}x{d}, got {C.shape}")
        parsed.append((float(eta), C))
    return KrausSet.from_terms(parsed, gens)


def affine_from_json(obj: dict) -> AffineMap:
    d = _dim(obj, "AffineMap")
    T = _real(_get(obj, "T", "AffineMap"), "T")
    t = _real(_get(obj, "t", "AffineMap"), "t")
    return _wrap("AffineMap", lambda: AffineMap(d, T, t))


def dynamical_from_json(obj: dict) -> DynamicalMapB:
    d = _dim(obj, "DynamicalMapB")
    B = _square(complex_from_json(_get(obj, "B", "DynamicalMapB"), "B"), d * d, "DynamicalMapB", "B")
    return _wrap("DynamicalMapB", lambda: DynamicalMapB(d, B))


DECODERS = {
    "DensityMatrix": density_matrix_from_json,
    "PolarizationVector": polarization_from_json,
    "KrausSet": kraus_from_json,
    "AffineMap": affine_from_json,
    "DynamicalMapB": dynamical_from_json,
}


def sniff(obj: dict) -> str:
    """Infer the value type of a decoded JSON object."""
    if not isinstance(obj, dict):
        raise SchemaError("top-level JSON value must be an object")
    if "type" in obj:
        if obj["type"] not in DECODERS:
            raise SchemaError(f"unknown type {obj['type']!r}")
        return obj["type"]
    for key, kind in (("terms", "KrausSet"), ("T", "AffineMap"), ("B", "DynamicalMapB"),
                      ("mat", "DensityMatrix"), ("n", "PolarizationVector")):
        if key in obj:
            return kind
    raise SchemaError("cannot determine the value type from the JSON fields")


def loads(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return DECODERS[sniff(obj)](obj)
