"""Linear kernel alignment and the task-covariance matrix.

The alignment between two checkpoints' features F_i (d_i x m) and
F_j (d_j x m) is the normalized Frobenius inner product of their Gram
matrices K_i = F_i' F_i and K_j = F_j' F_j::

    KA(F_i, F_j) = <K_i, K_j>_F / (||K_i||_F * ||K_j||_F)

The normalized (square-root) form is used throughout: it is the only
convention under which self-alignment, and hence the covariance diagonal,
is identically one. Pairwise alignments over a zoo assemble the task
covariance, which is PSD by construction (it is the Gram matrix of the
unit vectors vec(K_i)/||K_i||_F).

Gram inner products are evaluated through the d_i x d_j cross product,
<K_i, K_j>_F = ||F_j F_i'||_F^2, whenever that is cheaper than forming
the m x m Grams; both routes give identical results.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import json
import numpy as np

from . import jsonio
from .errors import CountMismatch, MalformedFile, ZeroGram
from .feature_store import FeatureMatrix, ValidatedZoo

PSD_TOL = -1e-8  # Smallest eigenvalue the covariance may have before it is flagged.


@dataclass
class TaskCovariance:
    """Symmetric unit-diagonal covariance over the zoo's tasks."""

    ids: tuple
    values: np.ndarray

    def __post_init__(self):
        self.ids = tuple(str(i) for i in self.ids)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError("covariance must be a square matrix")
        if len(self.ids) != self.values.shape[0]:
            raise ValueError("ids and matrix size disagree")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_matrix(cls, values, ids=None) -> "TaskCovariance":
        values = np.asarray(values, dtype=np.float64)
        if ids is None:
            ids = [f"t{i}" for i in range(values.shape[0])]
        return cls(tuple(ids), values)

    def validate(self, check_psd: bool = True) -> None:
        """Raise ValueError naming the first violated invariant."""
        k = self.values
        asym = float(np.abs(k - k.T).max())
        if asym > 1e-12:
            raise ValueError(f"covariance asymmetric by {asym:.3e}")
        diag_err = float(np.abs(np.diag(k) - 1.0).max())
        if diag_err > 1e-12:
            raise ValueError(f"covariance diagonal off unity by {diag_err:.3e}")
        if k.min() < 0.0 or k.max() > 1.0 + 1e-12:
            raise ValueError(
                f"covariance entries outside [0, 1]: min={k.min():.3e}, max={k.max():.3e}"
            )
        if check_psd:
            lo = float(np.linalg.eigvalsh(k).min())
            if lo < PSD_TOL:
                raise ValueError(f"covariance has eigenvalue {lo:.3e} < {PSD_TOL}")

    def permuted(self, perm) -> "TaskCovariance":
        perm = np.asarray(perm, dtype=np.intp)
        return TaskCovariance(
            tuple(self.ids[p] for p in perm), self.values[np.ix_(perm, perm)]
        )

    def to_dict(self) -> dict:
        return {"ids": list(self.ids), "kappa": self.values.tolist()}

    def save(self, path) -> None:
        jsonio.dump(self.to_dict(), path)

    @classmethod
    def load(cls, path) -> "TaskCovariance":
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            return cls(tuple(doc["ids"]), np.array(doc["kappa"], dtype=np.float64))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise MalformedFile(f"{path}: not a covariance JSON: {exc}") from exc

    def save_csv(self, path) -> None:
        """CSV with ids as header row and leading column."""
        lines = ["," + ",".join(self.ids)]
        for cid, row in zip(self.ids, self.values):
            lines.append(cid + "," + ",".join(f"{x:.17g}" for x in row))
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class PsdReport:
    """Eigenvalue summary of a covariance matrix."""

    min_eigenvalue: float
    max_eigenvalue: float
    violations: int
    tol: float
    eigenvalues: np.ndarray

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "max_eigenvalue": self.max_eigenvalue,
            "violations": self.violations,
            "tol": self.tol,
            "eigenvalues": [float(v) for v in self.eigenvalues],
        }


def _centered(values: np.ndarray) -> np.ndarray:
    # Subtracting the per-feature mean over samples centers the Gram matrix.
    return values - values.mean(axis=1, keepdims=True)


def gram(fm: FeatureMatrix, center: bool = False) -> np.ndarray:
    """The m x m Gram matrix K = F'F; entry (a, b) = <f^a, f^b>."""
    values = _centered(fm.values) if center else fm.values
    if not np.any(values):
        raise ZeroGram(f"checkpoint {fm.checkpoint_id!r} has all-zero features")
    return values.T @ values


def _gram_inner(vi: np.ndarray, vj: np.ndarray) -> float:
    """<K_i, K_j>_F without forming the Grams when the cross product is smaller."""
    m = vi.shape[1]
    if vi.shape[0] * vj.shape[0] <= m * m:
        cross = vi @ vj.T
        return float(np.sum(cross * cross))
    ki = vi.T @ vi
    kj = vj.T @ vj
    return float(np.sum(ki * kj))


def kernel_alignment(fi: FeatureMatrix, fj: FeatureMatrix, center: bool = False) -> float:
    """Normalized alignment of two checkpoints' Gram matrices, in [0, 1]."""
    if fi.count != fj.count:
        raise CountMismatch(
            f"{fi.checkpoint_id!r} has {fi.count} samples, "
            f"{fj.checkpoint_id!r} has {fj.count}"
        )
    vi = _centered(fi.values) if center else fi.values
    vj = _centered(fj.values) if center else fj.values
    ni = _gram_inner(vi, vi)
    if ni == 0.0:
        raise ZeroGram(f"checkpoint {fi.checkpoint_id!r} has all-zero features")
    nj = _gram_inner(vj, vj)
    if nj == 0.0:
        raise ZeroGram(f"checkpoint {fj.checkpoint_id!r} has all-zero features")
    return _gram_inner(vi, vj) / np.sqrt(ni * nj)


def estimate_covariance(
    zoo: ValidatedZoo, center: bool = False, jobs: int = 1
) -> TaskCovariance:
    """Pairwise kernel alignment over a zoo.

    Each unordered pair is computed once (symmetry is exact) and the
    diagonal is set to its analytic value 1. Pairs land in disjoint cells,
    so ``jobs > 1`` evaluates them concurrently.
    """
    mats = [_centered(fm.values) if center else fm.values for fm in zoo.matrices]
    norms = []
    for fm, v in zip(zoo.matrices, mats):
        sq = _gram_inner(v, v)
        if sq == 0.0:
            raise ZeroGram(f"checkpoint {fm.checkpoint_id!r} has all-zero features")
        norms.append(np.sqrt(sq))
    n = zoo.n
    kappa = np.eye(n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def one(pair):
        i, j = pair
        kappa[i, j] = kappa[j, i] = _gram_inner(mats[i], mats[j]) / (norms[i] * norms[j])

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(one, pairs))
    else:
        for pair in pairs:
            one(pair)
    return TaskCovariance(tuple(zoo.ids), kappa)


def psd_report(kappa: TaskCovariance, tol: float = PSD_TOL) -> PsdReport:
    """Eigenvalue diagnostic: flags eigenvalues below *tol* but never raises."""
    eig = np.linalg.eigvalsh((kappa.values + kappa.values.T) / 2.0)
    return PsdReport(
        min_eigenvalue=float(eig[0]),
        max_eigenvalue=float(eig[-1]),
        violations=int(np.sum(eig < tol)),
        tol=tol,
        eigenvalues=eig,
    )
