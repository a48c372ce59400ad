#!/usr/bin/env python3
"""Write a small synthetic checkpoint zoo (FMX1 files + manifest) to disk.

The zoo's checkpoints are random linear views of shared latent samples,
so the estimated covariance has family structure worth clustering and
selecting over. Point the CLI at the manifest afterwards:

    python3 scripts/make_demo_zoo.py --out demo_zoo
    zooselect kappa --zoo demo_zoo/zoo.json --out demo_zoo/kappa.json
    zooselect select --kappa demo_zoo/kappa.json --k 3 --oracle
    zooselect cluster --kappa demo_zoo/kappa.json --threshold 0.9
"""

import argparse
from pathlib import Path

import numpy as np

from zooselect.feature_store import (
    FeatureMatrix,
    ZooEntry,
    ZooManifest,
    save_manifest,
    write_feature_matrix,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="demo_zoo", help="output directory")
    parser.add_argument("--families", type=int, default=4)
    parser.add_argument("--per-family", type=int, default=3)
    parser.add_argument("--samples", type=int, default=512)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    rank = 3 * args.families
    latent = rng.normal(size=(rank, args.samples))
    entries = []
    for fam in range(args.families):
        # family members share a latent slice, so they cluster together
        base = rng.normal(size=(16, rank))
        base[:, :] *= 0.1
        base[:, 3 * fam : 3 * fam + 3] = rng.normal(size=(16, 3))
        for member in range(args.per_family):
            cid = f"fam{fam}_{member}"
            mix = base + 0.15 * rng.normal(size=base.shape)
            fm = FeatureMatrix(cid, mix @ latent + 0.1 * rng.normal(size=(16, args.samples)))
            write_feature_matrix(fm, out / f"{cid}.fmx")
            entries.append(ZooEntry(id=cid, path=f"{cid}.fmx"))
    manifest = ZooManifest(
        entries=entries,
        probing_description=f"synthetic demo zoo, {args.samples} shared probe samples",
    )
    save_manifest(manifest, out / "zoo.json")
    print(f"wrote {len(entries)} checkpoints and manifest to {out}/zoo.json")


if __name__ == "__main__":
    main()
