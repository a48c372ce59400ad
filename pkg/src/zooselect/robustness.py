"""Stability of the estimated covariance against probing-data size.

The covariance is re-estimated on nested subsets of the probing samples
and compared to the full-data reference via Gaussian KL divergence and
vectorized cosine. Subset sizes are geometrically spaced (matching a
log-scaled size axis) and the zero-data point uses the identity
covariance: with no probing data at all, tasks are best assumed
independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jsonio
from .errors import BadSchedule, ZeroGram
from .feature_store import ValidatedZoo
from .gp_task_space import gaussian_kl, vec_cosine
from .kernel_alignment import TaskCovariance, estimate_covariance


@dataclass
class ConvergenceReport:
    """KL and cosine of subset-estimated covariances against the reference.

    ``sizes[0] == 0`` is the identity-covariance baseline; the remaining
    entries match the nested schedule, ending with the full data where the
    comparison is against itself.
    """

    sizes: list[int]
    kl: list[float]
    cosine: list[float]
    reference_id: str

    def to_dict(self) -> dict:
        return {
            "sizes": self.sizes,
            "kl": self.kl,
            "cosine": self.cosine,
            "reference_id": self.reference_id,
        }

    def save(self, path) -> None:
        jsonio.dump(self.to_dict(), path)

    def save_csv(self, prefix) -> None:
        """Two plot-ready CSV files: <prefix>_kl.csv and <prefix>_cosine.csv."""
        for name, ys in (("kl", self.kl), ("cosine", self.cosine)):
            lines = [f"size,{name}"]
            lines += [f"{s},{y:.17g}" for s, y in zip(self.sizes, ys)]
            with open(f"{prefix}_{name}.csv", "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")


def nested_schedule(m: int, steps: int, seed: int = 0) -> list[np.ndarray]:
    """Nested probing-sample subsets of geometrically spaced sizes.

    Returns ``steps`` sorted index arrays, each a superset of the previous,
    the last covering all ``m`` samples. Deterministic under *seed*.
    """
    if steps < 1:
        raise BadSchedule(f"steps must be >= 1, got {steps}")
    if m < steps:
        raise BadSchedule(f"cannot fit {steps} strictly growing subsets in {m} samples")
    sizes = []
    prev = 0
    for k in range(1, steps + 1):
        s = max(int(round(m ** (k / steps))), prev + 1)
        sizes.append(s)
        prev = s
    sizes[-1] = m
    if steps > 1 and sizes[-2] >= m:
        raise BadSchedule(f"schedule of {steps} steps collapses at m={m}")
    perm = np.random.default_rng(seed).permutation(m)
    return [np.sort(perm[:s]) for s in sizes]


def convergence_curve(
    zoo: ValidatedZoo, schedule: list[np.ndarray], center: bool = False
) -> ConvergenceReport:
    """Compare subset-estimated covariances to the full-data covariance."""
    reference = estimate_covariance(zoo, center=center)
    identity = TaskCovariance(reference.ids, np.eye(reference.n))
    sizes = [0]
    kl = [gaussian_kl(reference, identity)]
    cosine = [vec_cosine(reference, identity)]
    for subset in schedule:
        sub = np.asarray(subset)
        try:
            kappa = estimate_covariance(zoo.restrict_samples(sub), center=center)
        except ZeroGram as exc:
            raise ZeroGram(f"at probing subset of size {sub.size}: {exc}") from exc
        sizes.append(int(sub.size))
        kl.append(gaussian_kl(reference, kappa))
        cosine.append(vec_cosine(reference, kappa))
    return ConvergenceReport(
        sizes=sizes,
        kl=kl,
        cosine=cosine,
        reference_id=f"full-data covariance (n={reference.n}, m={zoo.count})",
    )


def compare_covariances(kappa_ref: TaskCovariance, kappa_other: TaskCovariance) -> dict:
    """One-shot KL/cosine between two full-data covariances (e.g. two corpora)."""
    return {
        "kl": gaussian_kl(kappa_ref, kappa_other),
        "cosine": vec_cosine(kappa_ref, kappa_other),
    }
