import numpy as np
import pytest
from scipy.cluster.hierarchy import linkage

from conftest import random_kappa
from zooselect.clustering import cut_dendrogram, ward_linkage
from zooselect.kernel_alignment import TaskCovariance

BLOCK = TaskCovariance.from_matrix(
    np.array(
        [
            [1.0, 0.9, 0.0, 0.0],
            [0.9, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.9],
            [0.0, 0.0, 0.9, 1.0],
        ]
    )
)


class TestWardLinkage:
    def test_identity_tie_break(self):
        dendrogram = ward_linkage(TaskCovariance.from_matrix(np.eye(3)))
        first = dendrogram.merges[0]
        # all pairwise row distances are sqrt(2); smallest pair merges first
        assert (first.left, first.right) == (0, 1)
        assert first.height == pytest.approx(np.sqrt(2.0), abs=1e-12)

    def test_two_block_merge_order(self):
        dendrogram = ward_linkage(BLOCK)
        pairs = {(m.left, m.right) for m in dendrogram.merges[:2]}
        assert pairs == {(0, 1), (2, 3)}
        # within-block distance sqrt(2 * 0.9^2 ... ) = sqrt(0.02)
        for merge in dendrogram.merges[:2]:
            assert merge.height == pytest.approx(0.1414213562373095, abs=1e-12)
        assert dendrogram.merges[2].height == pytest.approx(2.6870057685088806, abs=1e-9)

    def test_merge_count_and_node_ids(self, rng):
        kappa = random_kappa(7, rng)
        dendrogram = ward_linkage(kappa)
        assert len(dendrogram.merges) == 6
        seen = set(range(7))
        for k, merge in enumerate(dendrogram.merges):
            assert merge.left in seen and merge.right in seen
            seen -= {merge.left, merge.right}
            seen.add(7 + k)
        assert seen == {12}

    def test_heights_nondecreasing(self, rng):
        for _ in range(10):
            kappa = random_kappa(int(rng.integers(3, 12)), rng)
            heights = [m.height for m in ward_linkage(kappa).merges]
            assert all(b >= a - 1e-9 for a, b in zip(heights, heights[1:]))

    def test_sizes_accumulate(self, rng):
        kappa = random_kappa(6, rng)
        dendrogram = ward_linkage(kappa)
        assert dendrogram.merges[-1].size == 6

    def test_matches_scipy_heights(self, rng):
        # independent oracle: same Ward criterion, different implementation
        for _ in range(10):
            kappa = random_kappa(int(rng.integers(3, 10)), rng)
            ours = sorted(m.height for m in ward_linkage(kappa).merges)
            scipy_heights = sorted(linkage(kappa.values, method="ward")[:, 2])
            np.testing.assert_allclose(ours, scipy_heights, atol=1e-8)

    def test_needs_two(self):
        with pytest.raises(ValueError):
            ward_linkage(TaskCovariance.from_matrix(np.eye(1)))

    def test_leaf_permutation_equivariance(self, rng):
        kappa = random_kappa(8, rng)
        labels = cut_dendrogram(ward_linkage(kappa), 0.7)
        perm = rng.permutation(8)
        permuted_labels = cut_dendrogram(ward_linkage(kappa.permuted(perm)), 0.7)
        # same partition of checkpoints, label names aside
        groups = {}
        for leaf, lab in enumerate(labels):
            groups.setdefault(lab, set()).add(leaf)
        permuted_groups = {}
        for pos, lab in enumerate(permuted_labels):
            permuted_groups.setdefault(lab, set()).add(int(perm[pos]))
        assert set(map(frozenset, groups.values())) == set(
            map(frozenset, permuted_groups.values())
        )


class TestCutDendrogram:
    def test_threshold_zero_generic(self, rng):
        kappa = random_kappa(5, rng)
        labels = cut_dendrogram(ward_linkage(kappa), 0.0)
        assert sorted(labels) == [0, 1, 2, 3, 4]

    def test_negative_threshold_always_singletons(self):
        labels = cut_dendrogram(ward_linkage(BLOCK), -1e-9)
        assert sorted(labels) == [0, 1, 2, 3]

    def test_above_max_height_single_cluster(self, rng):
        kappa = random_kappa(6, rng)
        dendrogram = ward_linkage(kappa)
        labels = cut_dendrogram(dendrogram, float("inf"))
        assert labels == [0] * 6

    def test_block_cut_at_one(self):
        labels = cut_dendrogram(ward_linkage(BLOCK), 1.0)
        assert labels == [0, 0, 1, 1]

    def test_labels_ordered_by_smallest_member(self):
        # push blocks {2,3} to merge before {0,1} by making them tighter
        k = np.array(
            [
                [1.0, 0.8, 0.0, 0.0],
                [0.8, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.95],
                [0.0, 0.0, 0.95, 1.0],
            ]
        )
        labels = cut_dendrogram(ward_linkage(TaskCovariance.from_matrix(k)), 1.0)
        assert labels == [0, 0, 1, 1]


class TestExports:
    def test_json_dict_shape(self, rng):
        dendrogram = ward_linkage(random_kappa(4, rng))
        doc = dendrogram.to_dict()
        assert len(doc["merges"]) == 3
        assert len(doc["leaf_ids"]) == 4

    def test_newick_wellformed(self):
        text = ward_linkage(BLOCK).to_newick()
        assert text.endswith(";")
        assert text.count("(") == 3
        assert text.count(")") == 3
        for cid in BLOCK.ids:
            assert cid in text
