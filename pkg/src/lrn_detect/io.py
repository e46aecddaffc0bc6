"""File formats: tensor JSON, exact-weight JSON, reports.

Tensor files carry ``{"d": int, "chi": int, "matrices": [...]}`` with
``matrices[i][row][col] == [re, im]`` and may annotate the exact squared
block weights of the family under ``"exact_weights"``.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import DimensionMismatch
from .exact import ExactWeight
from .tensor import MpsTensor


def tensor_to_json(a: MpsTensor, exact_weights=None) -> dict:
    obj = {
        "d": a.phys_dim,
        "chi": a.bond_dim,
        "matrices": [
            [
                [[float(v.real), float(v.imag)] for v in row]
                for row in mat
            ]
            for mat in a.matrices
        ],
    }
    if exact_weights is not None:
        obj["exact_weights"] = [w.to_json() for w in exact_weights]
    return obj


def tensor_from_json(obj: dict) -> tuple[MpsTensor, list[ExactWeight] | None]:
    try:
        d, chi = int(obj["d"]), int(obj["chi"])
        raw = obj["matrices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionMismatch(f"malformed tensor object: {exc}") from exc
    mats = np.zeros((d, chi, chi), dtype=complex)
    if len(raw) != d:
        raise DimensionMismatch(f"expected {d} matrices, got {len(raw)}")
    for i, mat in enumerate(raw):
        if len(mat) != chi or any(len(row) != chi for row in mat):
            raise DimensionMismatch(f"matrix {i} is not {chi} x {chi}")
        for r, row in enumerate(mat):
            for c, val in enumerate(row):
                mats[i, r, c] = complex(val[0], val[1])
    weights = None
    if obj.get("exact_weights") is not None:
        weights = [ExactWeight.from_json(w) for w in obj["exact_weights"]]
    return MpsTensor(mats), weights


def load_tensor(path: str) -> tuple[MpsTensor, list[ExactWeight] | None]:
    with open(path, encoding="utf-8") as f:
        return tensor_from_json(json.load(f))


def save_tensor(path: str, a: MpsTensor, exact_weights=None) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(tensor_to_json(a, exact_weights), f, sort_keys=True)
        f.write("\n")


def dump_report(obj, path: str | None) -> str:
    """Serialize a report deterministically; write it when a path is given.

    Non-finite floats are rendered as strings so the output stays strict
    JSON.
    """
    text = (
        json.dumps(_finitize(obj), sort_keys=True, indent=2, default=_json_default)
        + "\n"
    )
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return text


def _finitize(obj):
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _finitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finitize(v) for v in obj]
    return obj


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value)!r}")


def rows_to_csv(rows: list[dict], path: str | None) -> str:
    """Flat CSV with a stable header union; one row per record."""
    header: list[str] = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(k)) for k in header))
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return text


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    text = str(value)
    if "," in text or '"' in text:
        text = '"' + text.replace('"', '""') + '"'
    return text
