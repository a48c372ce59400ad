"""Feature-matrix files and checkpoint-zoo manifests.

A checkpoint's probing features form a ``d x m`` float64 matrix: one column
per probing sample. Two on-disk formats are supported:

* FMX1 binary: magic ``FMX1``, u32 version (=1), u64 d, u64 m, then ``d*m``
  little-endian float64 in column-major order (one sample per contiguous
  column, since columns are the unit of access).
* CSV fallback: header row, then one probing sample per row; the loader
  transposes to the column-per-sample convention.

A zoo manifest is a JSON document
``{"probing": "...", "entries": [{"id": ..., "path": ..., "meta": {...}}]}``.
Entry order is the canonical checkpoint order used everywhere downstream.
Relative entry paths are resolved against the manifest's directory.
"""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    CountMismatch,
    DuplicateId,
    EmptyZoo,
    MalformedFile,
    NonFiniteEntry,
)

_MAGIC = b"FMX1"
_VERSION = 1
_HEADER = struct.Struct("<4sIQQ")  # magic, version, d, m


@dataclass
class FeatureMatrix:
    """Features of one checkpoint on shared probing inputs.

    ``values`` has shape ``(dim, count)``; column ``a`` holds the feature
    vector of probing sample ``a``. Dimensions may differ between
    checkpoints, only ``count`` must match across a zoo.
    """

    checkpoint_id: str
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("feature values must be a 2-D array")

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    @property
    def count(self) -> int:
        return self.values.shape[1]

    def validate(self) -> None:
        """Raise on shape or finiteness problems."""
        if self.dim < 1 or self.count < 1:
            raise MalformedFile(
                f"{self.checkpoint_id}: empty feature matrix "
                f"({self.dim}x{self.count})"
            )
        if not np.isfinite(self.values).all():
            raise NonFiniteEntry(
                f"{self.checkpoint_id}: feature matrix contains NaN or Inf"
            )


def write_feature_matrix(fm: FeatureMatrix, path: str | Path) -> None:
    """Write *fm* in FMX1 binary format. Round-trips bit-exactly."""
    fm.validate()
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, fm.dim, fm.count))
        fh.write(np.asfortranarray(fm.values).tobytes(order="F"))


def write_feature_matrix_csv(fm: FeatureMatrix, path: str | Path) -> None:
    """Write *fm* as CSV: header f0..f{d-1}, one probing sample per row."""
    fm.validate()
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i}" for i in range(fm.dim)])
        for col in fm.values.T:
            writer.writerow([repr(float(x)) for x in col])


def load_feature_matrix(path: str | Path, checkpoint_id: str | None = None) -> FeatureMatrix:
    """Load a feature matrix from an FMX1 or CSV file.

    The checkpoint id defaults to the file stem; :func:`load_zoo` overrides
    it with the manifest id.
    """
    path = Path(path)
    raw = path.read_bytes()
    cid = checkpoint_id if checkpoint_id is not None else path.stem
    if raw[:4] == _MAGIC:
        fm = _parse_fmx1(raw, cid, path)
    else:
        fm = _parse_csv(raw, cid, path)
    fm.validate()
    return fm


def _parse_fmx1(raw: bytes, cid: str, path: Path) -> FeatureMatrix:
    if len(raw) < _HEADER.size:
        raise MalformedFile(f"{path}: truncated FMX1 header")
    magic, version, d, m = _HEADER.unpack_from(raw)
    if version != _VERSION:
        raise MalformedFile(f"{path}: unsupported FMX1 version {version}")
    if d < 1 or m < 1:
        raise MalformedFile(f"{path}: invalid shape {d}x{m}")
    expected = _HEADER.size + 8 * d * m
    if len(raw) != expected:
        raise MalformedFile(
            f"{path}: payload is {len(raw) - _HEADER.size} bytes, "
            f"expected {8 * d * m} for shape {d}x{m}"
        )
    flat = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    values = flat.reshape((d, m), order="F").copy()
    return FeatureMatrix(cid, values)


def _parse_csv(raw: bytes, cid: str, path: Path) -> FeatureMatrix:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedFile(f"{path}: neither FMX1 nor text") from exc
    try:
        rows = [r for r in csv.reader(text.splitlines()) if r]
    except csv.Error as exc:
        raise MalformedFile(f"{path}: not parseable as CSV: {exc}") from exc
    if len(rows) < 2:
        raise MalformedFile(f"{path}: CSV needs a header row and at least one sample")
    width = len(rows[0])
    if width < 1:
        raise MalformedFile(f"{path}: empty CSV header")
    samples = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise MalformedFile(
                f"{path}:{lineno}: expected {width} fields, got {len(row)}"
            )
        try:
            samples.append([float(x) for x in row])
        except ValueError as exc:
            raise MalformedFile(f"{path}:{lineno}: non-numeric field") from exc
    # rows are samples; transpose to column-per-sample
    return FeatureMatrix(cid, np.array(samples, dtype=np.float64).T)


@dataclass
class ZooEntry:
    id: str
    path: str
    meta: dict = field(default_factory=dict)


@dataclass
class ZooManifest:
    """Ordered listing of a checkpoint zoo's feature files."""

    entries: list[ZooEntry]
    probing_description: str = ""

    @property
    def ids(self) -> list[str]:
        return [e.id for e in self.entries]


@dataclass
class ValidatedZoo:
    """A loaded zoo: manifest plus matrices aligned to manifest order.

    All matrices share the same probing-sample count; feature dimensions
    may differ per checkpoint. Immutable after construction and safe to
    share across concurrent readers.
    """

    manifest: ZooManifest
    matrices: list[FeatureMatrix]

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def ids(self) -> list[str]:
        return self.manifest.ids

    @property
    def count(self) -> int:
        return self.matrices[0].count

    @classmethod
    def from_matrices(
        cls, matrices: list[FeatureMatrix], probing_description: str = ""
    ) -> "ValidatedZoo":
        """Build an in-memory zoo (no files) from feature matrices."""
        manifest = ZooManifest(
            entries=[ZooEntry(id=fm.checkpoint_id, path="") for fm in matrices],
            probing_description=probing_description,
        )
        return _validate(manifest, list(matrices))

    def restrict_samples(self, sample_indices) -> "ValidatedZoo":
        """Zoo restricted to the given probing-sample columns."""
        idx = np.asarray(sample_indices, dtype=np.intp)
        mats = [
            FeatureMatrix(fm.checkpoint_id, fm.values[:, idx]) for fm in self.matrices
        ]
        return ValidatedZoo(self.manifest, mats)


def _validate(manifest: ZooManifest, matrices: list[FeatureMatrix]) -> ValidatedZoo:
    if not matrices:
        raise EmptyZoo("manifest lists no checkpoints")
    seen = set()
    for entry in manifest.entries:
        if entry.id in seen:
            raise DuplicateId(f"checkpoint id {entry.id!r} appears twice")
        seen.add(entry.id)
    for fm in matrices:
        fm.validate()
    m = matrices[0].count
    for fm in matrices[1:]:
        if fm.count != m:
            raise CountMismatch(
                f"checkpoint {fm.checkpoint_id!r} has {fm.count} probing "
                f"samples, expected {m}"
            )
    return ValidatedZoo(manifest, matrices)


def save_manifest(manifest: ZooManifest, path: str | Path) -> None:
    doc = {
        "probing": manifest.probing_description,
        "entries": [{"id": e.id, "path": e.path, "meta": e.meta} for e in manifest.entries],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_manifest(path: str | Path) -> ZooManifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: invalid JSON manifest: {exc}") from exc
    if not isinstance(doc, dict) or "entries" not in doc:
        raise MalformedFile(f"{path}: manifest must be an object with 'entries'")
    entries = []
    for raw in doc["entries"]:
        try:
            entries.append(
                ZooEntry(id=str(raw["id"]), path=str(raw["path"]), meta=raw.get("meta", {}))
            )
        except (TypeError, KeyError) as exc:
            raise MalformedFile(f"{path}: manifest entry missing id/path") from exc
    return ZooManifest(entries=entries, probing_description=str(doc.get("probing", "")))


def load_zoo(manifest_path: str | Path) -> ValidatedZoo:
    """Load and validate every feature file referenced by a manifest.

    Matrices come back in manifest order with manifest ids; a shared
    probing-sample count is enforced.
    """
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    if not manifest.entries:
        raise EmptyZoo(f"{manifest_path}: manifest lists no checkpoints")
    base = manifest_path.parent
    matrices = []
    for entry in manifest.entries:
        p = Path(entry.path)
        if not p.is_absolute():
            p = base / p
        matrices.append(load_feature_matrix(p, checkpoint_id=entry.id))
    return _validate(manifest, matrices)
