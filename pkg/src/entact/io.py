"""JSON documents: matrices as row-major [re, im] pairs, and command reports."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .linalg import BipartiteSpace
from .states import DensityMatrix, FourPartySpace, InvalidDensityError, validate_density


class InputError(ValueError):
    """Malformed input document; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[float(v.real), float(v.imag)] for v in m.reshape(-1)]


def decode_matrix(entries, n: int, field: str = "matrix") -> np.ndarray:
    if not isinstance(entries, list):
        raise InputError(field, "expected a list of [re, im] pairs")
    if len(entries) != n * n:
        raise InputError(field, f"expected {n * n} entries, got {len(entries)}")
    out = np.empty(n * n, dtype=complex)
    for k, pair in enumerate(entries):
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise InputError(f"{field}[{k}]", f"expected [re, im] numbers, got {pair!r}")
        out[k] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(out)):
        raise InputError(field, "non-finite entry")
    return out.reshape(n, n)


def matrix_document(m, space: BipartiteSpace, density: bool = True,
                    four_party: FourPartySpace | None = None) -> dict:
    doc = {"dims": [space.dimA, space.dimB], "matrix": encode_matrix(m), "density": density}
    if four_party is not None:
        doc["fourParty"] = {"m": four_party.m, "d": four_party.d}
    return doc


def state_document(state: DensityMatrix, four_party: FourPartySpace | None = None) -> dict:
    return matrix_document(state.matrix, state.space, True, four_party)


def parse_matrix_document(doc):
    """Returns ``(matrix, space, four_party)`` with ``four_party`` possibly ``None``."""
    if not isinstance(doc, dict):
        raise InputError("<root>", "expected a JSON object")
    dims = doc.get("dims")
    if (not isinstance(dims, list) or len(dims) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in dims)):
        raise InputError("dims", f"expected [dimA, dimB] positive integers, got {dims!r}")
    space = BipartiteSpace(dims[0], dims[1])
    if "matrix" not in doc:
        raise InputError("matrix", "missing")
    mat = decode_matrix(doc["matrix"], space.dim)
    fp = None
    if doc.get("fourParty") is not None:
        raw = doc["fourParty"]
        if not isinstance(raw, dict) or not all(
                isinstance(raw.get(k), int) and raw.get(k) >= 1 for k in ("m", "d")):
            raise InputError("fourParty", f"expected {{m, d}} positive integers, got {raw!r}")
        fp = FourPartySpace(raw["m"], raw["d"])
        if fp.dim != space.dim or space.dimA != space.dimB:
            raise InputError("fourParty", f"m={fp.m}, d={fp.d} does not match dims {dims}")
    return mat, space, fp


def parse_state_document(doc):
    mat, space, fp = parse_matrix_document(doc)
    if doc.get("density") is False:
        raise InputError("density", "document is not declared a state")
    try:
        return validate_density(mat, space), fp
    except InvalidDensityError as exc:
        raise InputError("matrix", f"{exc} ({exc.invariant} = {exc.magnitude:.6g})") from exc


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(str(path), f"cannot read: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(str(path), f"invalid JSON: {exc}") from exc


def load_state(path):
    return parse_state_document(load_json(path))


def report_document(command: str, inputs: dict, results: dict, provenance: dict) -> dict:
    return {"command": command, "inputs": inputs, "results": results, "provenance": provenance}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=True) + "\n"
