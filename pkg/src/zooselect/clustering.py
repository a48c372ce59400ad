"""Ward-linkage agglomerative clustering of the task covariance.

Each checkpoint's observation vector is its covariance row; merging
follows the Ward minimum-variance criterion via the Lance-Williams
recurrence on squared Euclidean distances, with heights reported as the
square root of the criterion (the convention the usual plotting tools
use, so a threshold like 0.9 means the same thing here). Equal-height
candidates break toward the lexicographically smallest node-id pair, so
the merge sequence is reproducible.

The naive O(n^3) agglomeration is ample for zoos of a few hundred
checkpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jsonio
from .kernel_alignment import TaskCovariance


@dataclass
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass
class Dendrogram:
    """Binary merge tree: leaves 0..n-1, internal nodes n..2n-2 in merge order."""

    leaf_ids: tuple
    merges: list[Merge]

    @property
    def n(self) -> int:
        return len(self.leaf_ids)

    def to_dict(self) -> dict:
        return {
            "leaf_ids": list(self.leaf_ids),
            "merges": [
                {"left": m.left, "right": m.right, "height": m.height, "size": m.size}
                for m in self.merges
            ],
        }

    def save(self, path) -> None:
        jsonio.dump(self.to_dict(), path)

    def to_newick(self) -> str:
        """Newick text with branch lengths = parent height - child height."""
        n = self.n
        heights = {i: 0.0 for i in range(n)}
        labels = {i: str(self.leaf_ids[i]) for i in range(n)}
        for k, m in enumerate(self.merges):
            node = n + k
            heights[node] = m.height
            left = f"{labels[m.left]}:{m.height - heights[m.left]:.17g}"
            right = f"{labels[m.right]}:{m.height - heights[m.right]:.17g}"
            labels[node] = f"({left},{right})"
        return labels[2 * n - 2] + ";"


def ward_linkage(kappa: TaskCovariance) -> Dendrogram:
    """Agglomerate the covariance rows under the Ward criterion."""
    n = kappa.n
    if n < 2:
        raise ValueError("clustering needs at least 2 checkpoints")
    rows = kappa.values
    # squared Euclidean distances between observation rows
    sq_norms = np.sum(rows * rows, axis=1)
    d2 = {}
    for i in range(n):
        for j in range(i + 1, n):
            d2[(i, j)] = float(max(sq_norms[i] + sq_norms[j] - 2.0 * rows[i] @ rows[j], 0.0))
    sizes = {i: 1 for i in range(n)}
    active = sorted(sizes)
    merges: list[Merge] = []
    prev_height = 0.0
    for step in range(n - 1):
        best_pair = None
        best_d2 = np.inf
        for a_pos, a in enumerate(active):
            for b in active[a_pos + 1 :]:
                if d2[(a, b)] < best_d2:  # strict: first lexicographic pair wins ties
                    best_d2 = d2[(a, b)]
                    best_pair = (a, b)
        a, b = best_pair
        height = float(np.sqrt(best_d2))
        assert height >= prev_height - 1e-9, "Ward heights must be nondecreasing"
        prev_height = max(prev_height, height)
        node = n + step
        sizes[node] = sizes[a] + sizes[b]
        merges.append(Merge(left=a, right=b, height=height, size=sizes[node]))
        active = [c for c in active if c not in (a, b)]
        for c in active:
            na, nb, nc = sizes[a], sizes[b], sizes[c]
            dac = d2[tuple(sorted((a, c)))]
            dbc = d2[tuple(sorted((b, c)))]
            d2[(c, node)] = ((na + nc) * dac + (nb + nc) * dbc - nc * best_d2) / (
                na + nb + nc
            )
        active.append(node)
    return Dendrogram(leaf_ids=kappa.ids, merges=merges)


def cut_dendrogram(dendrogram: Dendrogram, threshold: float) -> list[int]:
    """Flat clusters: leaves joined by merges at height <= threshold.

    Labels are consecutive integers ordered by each cluster's smallest
    leaf index.
    """
    n = dendrogram.n
    parent = list(range(2 * n - 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, m in enumerate(dendrogram.merges):
        if m.height <= threshold:
            node = n + k
            parent[find(m.left)] = node
            parent[find(m.right)] = node
    groups: dict[int, list[int]] = {}
    for leaf in range(n):
        groups.setdefault(find(leaf), []).append(leaf)
    labels = [0] * n
    for label, members in enumerate(sorted(groups.values(), key=lambda g: g[0])):
        for leaf in members:
            labels[leaf] = label
    return labels
