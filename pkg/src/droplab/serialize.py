"""Deterministic JSON/CSV emission.

All floats are written with 17 significant digits so emitted files are
byte-stable across runs and round-trip exactly.
"""

from __future__ import annotations

import json

import numpy as np


def format_float(x: float) -> str:
    x = float(x)
    if np.isnan(x):
        return "nan"
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _encode(obj, indent: int | None, level: int) -> str:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end_pad = "" if indent is None else "\n" + " " * (indent * level)
    sep = "," if indent is None else ","
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if np.isnan(x) or np.isinf(x):
            return "null"
        return format_float(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = (_encode(v, indent, level + 1) for v in obj)
        return "[" + pad + (sep + pad).join(items) + end_pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (
            json.dumps(str(k)) + ": " + _encode(v, indent, level + 1)
            for k, v in obj.items()
        )
        return "{" + pad + (sep + pad).join(items) + end_pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int | None = None) -> str:
    """Serialize to JSON text with 17-significant-digit floats.

    Dict insertion order is preserved; non-finite floats become null.
    """
    return _encode(obj, indent, 0)
