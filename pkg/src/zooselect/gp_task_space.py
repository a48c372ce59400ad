"""Information quantities of the zero-mean Gaussian process over tasks.

The task covariance has unit diagonal, so every task has unit prior
variance and the entropy of a subset is a log-determinant plus a constant
that cancels in all differences; the constant is therefore never
materialized. Everything is in nats.

Core quantities:

* posterior (conditional) variance of one task given a set of others,
* the per-step selection gain: half the log ratio of two conditional
  variances (conditioning on the selected set vs. on all other remaining
  tasks),
* mutual information between a subset and its complement,
* Gaussian KL divergence and vectorized cosine between two covariances.

All linear algebra goes through Cholesky. A factorization that fails gets
diagonal jitter starting at 1e-10 and escalating tenfold up to 1e-6 before
:class:`SingularConditioning` is raised; near-singular blocks are expected
when a zoo contains near-duplicate checkpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, SingularConditioning
from .kernel_alignment import TaskCovariance

_JITTERS = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6)
VARIANCE_FLOOR = 1e-12  # conditional variances are clamped here before logs


@dataclass
class GainValue:
    """One candidate's selection gain and the two variances behind it."""

    index: int
    delta: float
    numerator_variance: float
    denominator_variance: float


def _cholesky(block: np.ndarray) -> np.ndarray:
    n = block.shape[0]
    for jitter in _JITTERS:
        try:
            return np.linalg.cholesky(block + jitter * np.eye(n) if jitter else block)
        except np.linalg.LinAlgError:
            continue
    raise SingularConditioning(
        f"{n}x{n} covariance block not positive definite after jitter up to {_JITTERS[-1]}"
    )


def _logdet(block: np.ndarray) -> float:
    chol = _cholesky(block)
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def _check_set(n: int, subset: Sequence[int], i: int | None = None) -> list[int]:
    members = [int(s) for s in subset]
    if len(set(members)) != len(members):
        raise ValueError(f"index set has duplicates: {members}")
    for s in members:
        if not 0 <= s < n:
            raise ValueError(f"index {s} out of range for n={n}")
    if i is not None:
        if not 0 <= i < n:
            raise ValueError(f"index {i} out of range for n={n}")
        if i in members:
            raise ValueError(f"index {i} must not be in the conditioning set")
    return members


def conditional_variance(kappa: TaskCovariance, i: int, subset: Sequence[int]) -> float:
    """GP posterior variance of task *i* given the tasks in *subset*.

    Empty conditioning returns the unit prior variance. The result is
    clamped to [1e-12, 1] so downstream logs stay finite.
    """
    members = _check_set(kappa.n, subset, i)
    if not members:
        return 1.0
    k = kappa.values
    block = k[np.ix_(members, members)]
    cross = k[members, i]
    chol = _cholesky(block)
    y = solve_triangular(chol, cross, lower=True)
    var = 1.0 - float(y @ y)
    return min(max(var, VARIANCE_FLOOR), 1.0)


def information_gain(kappa: TaskCovariance, i: int, subset: Sequence[int]) -> GainValue:
    """Gain of adding task *i* to the selected set *subset*.

    Half the log ratio of the variance of *i* conditioned on *subset* to
    the variance of *i* conditioned on everything else (all tasks outside
    subset and i). The first term rewards candidates that surprise the
    current selection; the second penalizes outliers that nothing in the
    remainder can explain.
    """
    members = _check_set(kappa.n, subset, i)
    rest = [j for j in range(kappa.n) if j != i and j not in set(members)]
    num = conditional_variance(kappa, i, members)
    den = conditional_variance(kappa, i, rest)
    return GainValue(
        index=int(i),
        delta=0.5 * float(np.log(num / den)),
        numerator_variance=num,
        denominator_variance=den,
    )


def mutual_information(kappa: TaskCovariance, subset: Sequence[int]) -> float:
    """I(subset; complement) of the joint Gaussian, in nats.

    Empty or full subsets carry no information about their complement and
    return 0. Nonnegative up to ~1e-9 rounding slack.
    """
    members = _check_set(kappa.n, subset)
    rest = sorted(set(range(kappa.n)) - set(members))
    if not members or not rest:
        return 0.0
    k = kappa.values
    members = sorted(members)
    return 0.5 * (
        _logdet(k[np.ix_(members, members)])
        + _logdet(k[np.ix_(rest, rest)])
        - _logdet(k)
    )


def gaussian_kl(kappa_star: TaskCovariance, kappa: TaskCovariance) -> float:
    """KL divergence between zero-mean Gaussians with the given covariances.

    KL(N(0, kappa_star) || N(0, kappa))
    = [tr(kappa^-1 kappa_star) - n + logdet kappa - logdet kappa_star] / 2
    """
    if kappa_star.n != kappa.n:
        raise DimensionMismatch(f"covariances are {kappa_star.n}x and {kappa.n}x")
    if kappa_star.ids != kappa.ids:
        raise DimensionMismatch("covariances describe different checkpoint ids")
    n = kappa.n
    chol = _cholesky(kappa.values)
    half = solve_triangular(chol, kappa_star.values, lower=True)
    solved = solve_triangular(chol, half, lower=True, trans="T")
    trace = float(np.trace(solved))
    return 0.5 * (trace - n + _logdet(kappa.values) - _logdet(kappa_star.values))


def vec_cosine(kappa_a: TaskCovariance, kappa_b: TaskCovariance) -> float:
    """Cosine similarity of the flattened covariance matrices."""
    if kappa_a.n != kappa_b.n:
        raise DimensionMismatch(f"covariances are {kappa_a.n}x and {kappa_b.n}x")
    va = kappa_a.values.ravel()
    vb = kappa_b.values.ravel()
    return float(va @ vb / (np.linalg.norm(va) * np.linalg.norm(vb)))
