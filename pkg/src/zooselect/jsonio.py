"""Deterministic JSON output.

Every file the CLI writes goes through :func:`dumps`: keys sorted, floats
printed with 17 significant digits (lossless for float64), so re-running a
command reproduces its outputs byte for byte.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np


def _fmt(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v!r} cannot be serialized")
        return f"{v:.17g}"
    if isinstance(value, str):
        out = ['"']
        for ch in value:
            if ch == '"':
                out.append('\\"')
            elif ch == "\\":
                out.append("\\\\")
            elif ord(ch) < 0x20:
                out.append(f"\\u{ord(ch):04x}")
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    if isinstance(value, dict):
        items = sorted(value.items())
        body = ", ".join(f"{_fmt(str(k))}: {_fmt(v)}" for k, v in items)
        return "{" + body + "}"
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(obj) -> str:
    """Serialize *obj* to a canonical JSON string."""
    return _fmt(obj)


def dump(obj, path: str | Path) -> None:
    """Write *obj* as canonical JSON to *path* (with trailing newline)."""
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")
