import numpy as np
import pytest

from zooselect.errors import BadSchedule, ZeroGram
from zooselect.feature_store import FeatureMatrix, ValidatedZoo
from zooselect.gp_task_space import gaussian_kl, vec_cosine
from zooselect.kernel_alignment import TaskCovariance, estimate_covariance
from zooselect.robustness import (
    compare_covariances,
    convergence_curve,
    nested_schedule,
)


def latent_zoo(n, m, seed, rank=6, noise=0.3):
    """Checkpoints as random linear views of shared latent samples: their
    covariance estimate has a well-defined large-m limit to converge to."""
    rng = np.random.default_rng(seed)
    latent = rng.normal(size=(rank, m))
    mats = []
    for i in range(n):
        d = int(rng.integers(6, 24))
        mix = rng.normal(size=(d, rank))
        mats.append(
            FeatureMatrix(f"ckpt{i:02d}", mix @ latent + noise * rng.normal(size=(d, m)))
        )
    return ValidatedZoo.from_matrices(mats)


class TestNestedSchedule:
    def test_geometric_sizes(self):
        sizes = [len(s) for s in nested_schedule(8, 3, seed=0)]
        assert sizes == [2, 4, 8]

    def test_single_step_is_everything(self):
        (only,) = nested_schedule(10, 1, seed=0)
        np.testing.assert_array_equal(only, np.arange(10))

    def test_nesting_exact(self):
        schedule = nested_schedule(2000, 8, seed=7)
        for small, big in zip(schedule, schedule[1:]):
            assert set(small.tolist()) < set(big.tolist())
        assert len(schedule[-1]) == 2000

    def test_deterministic(self):
        a = nested_schedule(100, 5, seed=42)
        b = nested_schedule(100, 5, seed=42)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)

    def test_strictly_increasing_even_when_rounding_collides(self):
        sizes = [len(s) for s in nested_schedule(5, 5, seed=0)]
        assert sizes == [1, 2, 3, 4, 5]

    def test_bad_schedules(self):
        with pytest.raises(BadSchedule):
            nested_schedule(10, 0, seed=0)
        with pytest.raises(BadSchedule):
            nested_schedule(3, 4, seed=0)


class TestConvergenceCurve:
    def test_shape_and_zero_entry(self):
        zoo = latent_zoo(5, 64, seed=1)
        report = convergence_curve(zoo, nested_schedule(64, 4, seed=1))
        assert report.sizes[0] == 0
        assert report.sizes[-1] == 64
        assert len(report.sizes) == len(report.kl) == len(report.cosine) == 5
        assert all(b > a for a, b in zip(report.sizes, report.sizes[1:]))

    def test_final_entry_is_self_comparison(self):
        zoo = latent_zoo(6, 128, seed=2)
        report = convergence_curve(zoo, nested_schedule(128, 5, seed=2))
        assert report.kl[-1] == pytest.approx(0.0, abs=1e-9)
        assert report.cosine[-1] == pytest.approx(1.0, abs=1e-9)

    def test_zero_data_entry_closed_form(self):
        # with identity covariance KL reduces to -logdet(kappa*)/2
        zoo = latent_zoo(6, 100, seed=3)
        report = convergence_curve(zoo, nested_schedule(100, 3, seed=3))
        kappa_star = estimate_covariance(zoo)
        expected = -0.5 * np.linalg.slogdet(kappa_star.values)[1]
        assert report.kl[0] == pytest.approx(expected, abs=1e-9)
        identity = TaskCovariance(kappa_star.ids, np.eye(6))
        assert report.cosine[0] == pytest.approx(vec_cosine(kappa_star, identity), abs=1e-12)

    def test_mostly_monotone_at_scale(self):
        zoo = latent_zoo(10, 2000, seed=0)
        report = convergence_curve(zoo, nested_schedule(2000, 8, seed=0))
        kl = np.array(report.kl)
        cos = np.array(report.cosine)
        assert kl[-1] <= 0.05
        assert np.mean(np.diff(kl) <= 1e-12) >= 0.8
        assert np.mean(np.diff(cos) >= -1e-12) >= 0.8

    def test_deterministic(self):
        zoo = latent_zoo(5, 64, seed=4)
        a = convergence_curve(zoo, nested_schedule(64, 4, seed=9))
        b = convergence_curve(zoo, nested_schedule(64, 4, seed=9))
        assert a.kl == b.kl and a.cosine == b.cosine and a.sizes == b.sizes

    def test_zero_gram_reports_subset_size(self, rng):
        # one checkpoint's features live only on the last probing sample
        sparse = np.zeros((2, 8))
        sparse[:, -1] = 1.0
        mats = [
            FeatureMatrix("dense", rng.normal(size=(3, 8))),
            FeatureMatrix("sparse", sparse),
        ]
        zoo = ValidatedZoo.from_matrices(mats)
        schedule = [np.arange(2), np.arange(8)]
        with pytest.raises(ZeroGram, match="size 2"):
            convergence_curve(zoo, schedule)

    def test_csv_export(self, tmp_path):
        zoo = latent_zoo(4, 32, seed=5)
        report = convergence_curve(zoo, nested_schedule(32, 3, seed=5))
        report.save_csv(str(tmp_path / "curve"))
        kl_lines = (tmp_path / "curve_kl.csv").read_text().strip().splitlines()
        assert kl_lines[0] == "size,kl"
        assert len(kl_lines) == len(report.sizes) + 1


class TestCompare:
    def test_same_zoo_is_zero_gap(self):
        zoo = latent_zoo(5, 64, seed=6)
        kappa = estimate_covariance(zoo)
        doc = compare_covariances(kappa, kappa)
        assert doc["kl"] == pytest.approx(0.0, abs=1e-9)
        assert doc["cosine"] == pytest.approx(1.0, abs=1e-9)

    def test_matches_underlying_quantities(self):
        za = latent_zoo(5, 64, seed=7)
        zb = latent_zoo(5, 64, seed=8)
        ka, kb = estimate_covariance(za), estimate_covariance(zb)
        kb = TaskCovariance(ka.ids, kb.values)  # same manifest ids
        doc = compare_covariances(ka, kb)
        assert doc["kl"] == pytest.approx(gaussian_kl(ka, kb), abs=1e-12)
        assert doc["cosine"] == pytest.approx(vec_cosine(ka, kb), abs=1e-12)
