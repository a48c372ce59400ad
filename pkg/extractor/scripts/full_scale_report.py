#!/usr/bin/env python3
"""Optional full-scale qualitative reproduction (needs network + GPU time).

Extracts features for a list of published hub checkpoints on a probing
corpus, then reports - without asserting - whether name-prefix families
cluster together and what the first five greedy picks are. Checkpoint
version drift can change the exact picks, so this script prints its
findings and leaves judgment to the reader.

    python3 scripts/full_scale_report.py --checkpoints checkpoints.txt \
        --corpus probing_corpus.txt --out runs/full_scale
"""

import argparse
from collections import Counter
from pathlib import Path

from zooextract.job import CheckpointRef, ExtractionJob
from zooextract.text import extract_features
from zooselect.clustering import cut_dendrogram, ward_linkage
from zooselect.feature_store import load_zoo
from zooselect.kernel_alignment import estimate_covariance
from zooselect.mmi_selection import select_mmi


def name_prefix(checkpoint_id: str) -> str:
    stem = checkpoint_id.split("__")[-1]
    return stem.split("-")[0]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--checkpoints", required=True,
                        help="text file: one hub id per line")
    parser.add_argument("--corpus", required=True, help="probing text, one sentence per line")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--max-tokens", type=int, default=512)
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--threshold", type=float, default=0.9)
    args = parser.parse_args()

    hub_ids = [l.strip() for l in Path(args.checkpoints).read_text().splitlines() if l.strip()]
    job = ExtractionJob(
        checkpoints=[CheckpointRef(h.replace("/", "__"), h) for h in hub_ids],
        corpus=args.corpus,
        out_dir=args.out,
        max_tokens=args.max_tokens,
    )
    manifest = extract_features(job)
    print(f"extracted {len(hub_ids)} checkpoints -> {manifest}")

    kappa = estimate_covariance(load_zoo(manifest))
    kappa.save(Path(args.out) / "kappa.json")

    dendrogram = ward_linkage(kappa)
    labels = cut_dendrogram(dendrogram, args.threshold)
    clusters = {}
    for leaf, label in enumerate(labels):
        clusters.setdefault(label, []).append(kappa.ids[leaf])
    print(f"\nclusters at threshold {args.threshold}:")
    pure = 0
    for label in sorted(clusters):
        members = clusters[label]
        prefixes = Counter(name_prefix(m) for m in members)
        dominant, count = prefixes.most_common(1)[0]
        if len(members) > 1 and count == len(members):
            pure += 1
        print(f"  cluster {label} (dominant prefix {dominant!r} {count}/{len(members)}): "
              + ", ".join(members))
    multi = sum(1 for m in clusters.values() if len(m) > 1)
    print(f"\n{pure}/{multi} multi-member clusters are single-prefix "
          f"(report only - no assertion)")

    trace = select_mmi(kappa, args.k)
    print(f"\nfirst {args.k} greedy picks:")
    for step, gain in enumerate(trace.picks, start=1):
        print(f"  {step}. {kappa.ids[gain.index]} (gain {gain.delta:+.4f})")


if __name__ == "__main__":
    main()
