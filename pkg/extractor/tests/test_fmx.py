import numpy as np
import pytest

from zooextract.fmx import write_fmx1, write_manifest
from zooselect.feature_store import load_feature_matrix, load_manifest


class TestFmx1Writer:
    def test_primary_loader_roundtrip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        values = rng.normal(scale=10.0, size=(5, 9))
        path = tmp_path / "m.fmx"
        write_fmx1(values, path)
        back = load_feature_matrix(path)
        assert back.values.tobytes() == values.tobytes()
        assert back.dim == 5 and back.count == 9

    def test_rejects_nan(self, tmp_path):
        values = np.array([[1.0, np.nan]])
        with pytest.raises(ValueError):
            write_fmx1(values, tmp_path / "bad.fmx")

    def test_rejects_wrong_rank(self, tmp_path):
        with pytest.raises(ValueError):
            write_fmx1(np.zeros(3), tmp_path / "bad.fmx")


class TestManifestWriter:
    def test_primary_loader_parses(self, tmp_path):
        entries = [
            {"id": "a", "path": "a.fmx", "meta": {"model": "x"}},
            {"id": "b", "path": "b.fmx", "meta": {}},
        ]
        path = tmp_path / "zoo.json"
        write_manifest(entries, "test probing", path)
        manifest = load_manifest(path)
        assert manifest.ids == ["a", "b"]
        assert manifest.probing_description == "test probing"
