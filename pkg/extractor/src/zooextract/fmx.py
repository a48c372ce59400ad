"""Writers for the interchange formats the selection pipeline consumes.

FMX1 layout: magic ``FMX1``, u32 version (=1), u64 d, u64 m, then d*m
little-endian float64 in column-major order (one probing sample per
contiguous column). The manifest is JSON with ordered entries whose paths
resolve relative to the manifest file.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

_HEADER = struct.Struct("<4sIQQ")


def write_fmx1(values: np.ndarray, path: str | Path) -> None:
    """Write a (d, m) float64 feature matrix in FMX1 format."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
        raise ValueError(f"feature matrix must be 2-D and nonempty, got {values.shape}")
    if not np.isfinite(values).all():
        raise ValueError("feature matrix contains NaN or Inf")
    d, m = values.shape
    with Path(path).open("wb") as fh:
        fh.write(_HEADER.pack(b"FMX1", 1, d, m))
        fh.write(np.asfortranarray(values).tobytes(order="F"))


def write_manifest(entries: list[dict], probing: str, path: str | Path) -> None:
    """Write the zoo manifest; entries are {"id", "path", "meta"} dicts."""
    doc = {"probing": probing, "entries": entries}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
