import numpy as np
import pytest

from zooselect.feature_store import FeatureMatrix, ValidatedZoo
from zooselect.kernel_alignment import TaskCovariance


def random_kappa(n: int, rng: np.random.Generator) -> TaskCovariance:
    """Random valid task covariance: Hadamard square of a correlation matrix.

    Entrywise squaring keeps positive semidefiniteness (Schur product
    theorem), pins the diagonal at one, and lands every entry in [0, 1] -
    the same invariants an alignment-estimated covariance satisfies,
    without depending on the alignment code under test.
    """
    a = rng.normal(size=(n, max(2, n // 2 + 1)))
    c = a @ a.T
    d = np.sqrt(np.diag(c))
    c = c / np.outer(d, d)
    return TaskCovariance.from_matrix(c * c)


def random_zoo(n: int, m: int, rng: np.random.Generator, shared_rank: int = 4) -> ValidatedZoo:
    """Random zoo with per-checkpoint feature dims and a shared latent factor."""
    latent = rng.normal(size=(shared_rank, m))
    mats = []
    for i in range(n):
        d = int(rng.integers(2, 40))
        mix = rng.normal(size=(d, shared_rank))
        noise = 0.3 * rng.normal(size=(d, m))
        mats.append(FeatureMatrix(f"ckpt{i:02d}", mix @ latent + noise))
    return ValidatedZoo.from_matrices(mats, probing_description="random test zoo")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def worked_kappa():
    """The 3x3 covariance used for all hand-derived gain values."""
    return TaskCovariance.from_matrix(
        np.array([[1.0, 0.9, 0.1], [0.9, 1.0, 0.1], [0.1, 0.1, 1.0]])
    )
