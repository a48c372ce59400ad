"""Extraction job specifications.

A job names the checkpoints (model-hub identifiers or local paths), the
shared probing corpus, the output directory, the pooling rule, and the
per-line token cap. One job uses one probing corpus for every checkpoint;
that is what makes the resulting feature columns comparable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import JobError

POOLINGS = ("last_subword", "mean")
ROTATION_DEGREES = (0, 5, -5, 10, -10, 15, -15)


@dataclass
class CheckpointRef:
    id: str
    model: str  # hub id or local path


@dataclass
class ExtractionJob:
    checkpoints: list[CheckpointRef]
    corpus: str
    out_dir: str
    pooling: str = "last_subword"
    max_tokens: int = 512
    image_mode: str = "RGB"
    rotations: tuple = ROTATION_DEGREES
    meta: dict = field(default_factory=dict)

    def validate(self) -> None:
        if not self.checkpoints:
            raise JobError("job lists no checkpoints")
        ids = [c.id for c in self.checkpoints]
        if len(set(ids)) != len(ids):
            raise JobError(f"duplicate checkpoint ids: {ids}")
        if self.pooling not in POOLINGS:
            raise JobError(f"pooling must be one of {POOLINGS}, got {self.pooling!r}")
        if self.max_tokens < 1:
            raise JobError(f"max_tokens must be positive, got {self.max_tokens}")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExtractionJob":
        try:
            raw_ckpts = doc["checkpoints"]
            corpus = doc["corpus"]
            out_dir = doc["out_dir"]
        except KeyError as exc:
            raise JobError(f"job spec missing required field {exc}") from exc
        checkpoints = []
        for raw in raw_ckpts:
            if isinstance(raw, str):
                cid = raw.replace("/", "__")
                checkpoints.append(CheckpointRef(id=cid, model=raw))
            else:
                try:
                    checkpoints.append(CheckpointRef(id=str(raw["id"]), model=str(raw["model"])))
                except (TypeError, KeyError) as exc:
                    raise JobError(f"bad checkpoint entry {raw!r}") from exc
        job = cls(
            checkpoints=checkpoints,
            corpus=str(corpus),
            out_dir=str(out_dir),
            pooling=str(doc.get("pooling", "last_subword")),
            max_tokens=int(doc.get("max_tokens", 512)),
            image_mode=str(doc.get("image_mode", "RGB")),
            rotations=tuple(doc.get("rotations", ROTATION_DEGREES)),
            meta=dict(doc.get("meta", {})),
        )
        job.validate()
        return job

    @classmethod
    def load(cls, path: str | Path) -> "ExtractionJob":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise JobError(f"{path}: invalid job JSON: {exc}") from exc
        return cls.from_dict(doc)
