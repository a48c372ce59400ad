"""Contextual word features from text checkpoints.

The probing corpus is plain text, one sentence per line; words are
whitespace tokens. Every checkpoint sees the same corpus, and the output
columns are aligned across checkpoints: column a of every FMX1 file is
the same (line, word) position.

Checkpoints tokenize differently, so a word becomes one or more subwords,
and its representation is taken from its last subword (or the mean over
its subwords with ``pooling="mean"``). A word that any checkpoint cannot
represent - no subword inside that checkpoint's token window - is dropped
for all checkpoints; that is the alignment rule that keeps columns
comparable. Features come from the final hidden layer of the bare model,
so task heads never enter the picture.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch

from .errors import AlignmentFailure, DownloadFailure
from .fmx import write_fmx1, write_manifest
from .job import ExtractionJob


def _read_corpus(path: str | Path) -> list[list[str]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    corpus = [line.split() for line in lines if line.strip()]
    if not corpus:
        raise AlignmentFailure(f"{path}: probing corpus tokenizes empty")
    return corpus


def _load_text_checkpoint(model_ref: str):
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(model_ref)
        model = AutoModel.from_pretrained(model_ref)
    except (OSError, ValueError) as exc:
        raise DownloadFailure(f"cannot load checkpoint {model_ref!r}: {exc}") from exc
    model.eval()
    return tokenizer, model


def _word_subword_map(tokenizer, words: list[str], max_tokens: int, cid: str):
    """Positions of each word's subwords inside the token window.

    A word whose subwords do not ALL fit inside ``max_tokens`` is omitted:
    pooling a partially visible word would silently change what "last
    subword" means for that checkpoint.
    """
    enc = tokenizer(words, is_split_into_words=True, add_special_tokens=True)
    try:
        word_ids = enc.word_ids()
    except ValueError as exc:
        raise AlignmentFailure(
            f"checkpoint {cid!r}: tokenizer cannot report word alignments"
        ) from exc
    positions: dict[int, list[int]] = {}
    for pos, wid in enumerate(word_ids):
        if wid is not None:
            positions.setdefault(wid, []).append(pos)
    return {
        wid: pos for wid, pos in positions.items() if pos[-1] < max_tokens
    }


def _survivors(tokenizer, corpus, max_tokens: int, cid: str) -> list[set]:
    kept = []
    for words in corpus:
        positions = _word_subword_map(tokenizer, words, max_tokens, cid)
        kept.append(set(positions))
    return kept


def _extract_columns(tokenizer, model, corpus, columns, pooling, max_tokens, cid):
    hidden = model.config.hidden_size
    by_line: dict[int, list[tuple[int, int]]] = {}
    for col, (line_idx, word_idx) in enumerate(columns):
        by_line.setdefault(line_idx, []).append((col, word_idx))
    out = np.empty((hidden, len(columns)), dtype=np.float64)
    with torch.no_grad():
        for line_idx, wanted in by_line.items():
            words = corpus[line_idx]
            positions = _word_subword_map(tokenizer, words, max_tokens, cid)
            enc = tokenizer(
                words,
                is_split_into_words=True,
                truncation=True,
                max_length=max_tokens,
                add_special_tokens=True,
                return_tensors="pt",
            )
            states = model(**enc).last_hidden_state[0]
            for col, word_idx in wanted:
                subwords = positions[word_idx]
                if pooling == "mean":
                    vec = states[subwords].mean(dim=0)
                else:
                    vec = states[subwords[-1]]
                out[:, col] = vec.numpy().astype(np.float64)
    return out


def extract_features(job: ExtractionJob) -> Path:
    """Run the corpus through every checkpoint; write FMX1 files + manifest.

    Returns the manifest path. One checkpoint is resident at a time.
    """
    job.validate()
    corpus = _read_corpus(job.corpus)
    out_dir = Path(job.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    # pass 1: which (line, word) positions survive every tokenizer
    kept_per_line: list[set] | None = None
    for ref in job.checkpoints:
        tokenizer, _ = _load_text_checkpoint(ref.model)
        kept = _survivors(tokenizer, corpus, job.max_tokens, ref.id)
        if kept_per_line is None:
            kept_per_line = kept
        else:
            kept_per_line = [a & b for a, b in zip(kept_per_line, kept)]
    columns = [
        (line_idx, word_idx)
        for line_idx, kept in enumerate(kept_per_line)
        for word_idx in sorted(kept)
    ]
    if not columns:
        raise AlignmentFailure(
            f"no probing word survives all {len(job.checkpoints)} tokenizers "
            f"within max_tokens={job.max_tokens}"
        )

    # pass 2: aligned features, one checkpoint resident at a time
    entries = []
    for ref in job.checkpoints:
        tokenizer, model = _load_text_checkpoint(ref.model)
        values = _extract_columns(
            tokenizer, model, corpus, columns, job.pooling, job.max_tokens, ref.id
        )
        filename = f"{ref.id}.fmx"
        write_fmx1(values, out_dir / filename)
        entries.append(
            {
                "id": ref.id,
                "path": filename,
                "meta": {"model": ref.model, "dim": int(values.shape[0]), "pooling": job.pooling},
            }
        )
        del model

    probing = (
        f"{Path(job.corpus).name}: {len(columns)} words from {len(corpus)} lines, "
        f"{job.pooling} pooling, final hidden layer"
    )
    manifest_path = out_dir / "zoo.json"
    write_manifest(entries, probing, manifest_path)
    return manifest_path
