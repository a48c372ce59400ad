"""Pooled features from image checkpoints under small probe augmentation.

The probing corpus is a directory of images; each is presented at every
configured rotation, so a probe set of ``n`` images yields ``n * 7``
columns under the default angles (0, +-5, +-10, +-15 degrees). Column
order is (image by filename, rotation in configured order) and identical
for every checkpoint.

Image checkpoints are TorchScript modules: black boxes mapping a
``(batch, C, H, W)`` float tensor to features. A ``(batch, d)`` output is
used as-is; a convolutional ``(batch, d, h, w)`` output is mean-pooled
over its spatial dims.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .errors import DownloadFailure, PreprocessError
from .fmx import write_fmx1, write_manifest
from .job import ExtractionJob

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp"}
BATCH = 32


def _probe_paths(corpus_dir: str | Path) -> list[Path]:
    root = Path(corpus_dir)
    paths = sorted(p for p in root.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
    if not paths:
        raise PreprocessError(f"{root}: no probe images found")
    return paths


def _load_image_checkpoint(model_ref: str):
    try:
        model = torch.jit.load(model_ref, map_location="cpu")
    except (OSError, RuntimeError, ValueError) as exc:
        raise DownloadFailure(f"cannot load image checkpoint {model_ref!r}: {exc}") from exc
    model.eval()
    return model


def _probe_tensor(paths: list[Path], rotations, mode: str) -> torch.Tensor:
    stack = []
    for path in paths:
        with Image.open(path) as img:
            if img.mode != mode:
                raise PreprocessError(
                    f"{path.name}: image mode {img.mode} but checkpoints expect {mode}; "
                    f"convert the probe set first"
                )
            for angle in rotations:
                rotated = img.rotate(angle, resample=Image.BILINEAR)
                arr = np.asarray(rotated, dtype=np.float32) / 255.0
                if arr.ndim == 2:
                    arr = arr[:, :, None]
                stack.append(torch.from_numpy(arr.transpose(2, 0, 1)))
    return torch.stack(stack)


def _pooled(features: torch.Tensor) -> torch.Tensor:
    if features.ndim == 2:
        return features
    if features.ndim == 4:
        return features.mean(dim=(2, 3))
    raise PreprocessError(f"checkpoint output has shape {tuple(features.shape)}; "
                          "expected (batch, d) or (batch, d, h, w)")


def extract_image_features(job: ExtractionJob) -> Path:
    """Write one FMX1 per image checkpoint plus the zoo manifest."""
    job.validate()
    paths = _probe_paths(job.corpus)
    probes = _probe_tensor(paths, job.rotations, job.image_mode)
    out_dir = Path(job.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    for ref in job.checkpoints:
        model = _load_image_checkpoint(ref.model)
        chunks = []
        with torch.no_grad():
            for start in range(0, probes.shape[0], BATCH):
                out = model(probes[start : start + BATCH])
                chunks.append(_pooled(out))
        values = torch.cat(chunks).numpy().astype(np.float64).T
        filename = f"{ref.id}.fmx"
        write_fmx1(values, out_dir / filename)
        entries.append(
            {
                "id": ref.id,
                "path": filename,
                "meta": {"model": ref.model, "dim": int(values.shape[0])},
            }
        )
        del model

    probing = (
        f"{Path(job.corpus).name}: {len(paths)} images x {len(job.rotations)} rotations "
        f"{tuple(job.rotations)}, spatially pooled features"
    )
    manifest_path = out_dir / "zoo.json"
    write_manifest(entries, probing, manifest_path)
    return manifest_path
