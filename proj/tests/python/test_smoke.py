import json
import os
import pathlib

import pytest

import attnet

SOURCE = pathlib.Path(os.environ.get("ATTNET_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


def test_stats():
    assert attnet.gini([0, 0, 0, 1]) == pytest.approx(0.75, abs=1e-12)
    assert attnet.chi2_test_2x2([[37, 77], [34, 80]])["p"] == pytest.approx(0.7749, abs=5e-4)
    assert attnet.spearman([1, 2, 3, 4], [1, 3, 2, 4])["statistic"] == 0.8
    exact = attnet.mann_whitney_u([1, 2, 3], [4, 5, 6], method="exact")
    assert exact["statistic"] == 0
    assert exact["p"] == pytest.approx(0.1)
    with pytest.raises(ValueError):
        attnet.mann_whitney_u([1], [2], method="bogus")


def test_graphs():
    census = attnet.triad_census([("AA", "BB", 1), ("AA", "CC", 1), ("BB", "CC", 1)])
    assert census["030T"] == 1
    assert sum(census.values()) == 1
    star = [("AA", "BB", 100.0)] + [("AA", c, 1.0) for c in ("CC", "DD", "EE", "FF")]
    kept = attnet.disparity_backbone(star, alpha=0.05)
    assert ("AA", "BB", 100.0) in kept


def test_granger_errors():
    with pytest.raises(attnet.AttnetError):
        attnet.granger_test([1.0] * 20, [float(i % 3) for i in range(20)], 2)


def test_fixture_run(tmp_path):
    out = tmp_path / "out"
    summary = attnet.run(SOURCE / "data" / "fixture" / "config.json", output=out,
                         stages=["stitch", "build", "granger"], report=False)
    assert summary["partial"] is False
    assert set(summary["stages"]) == {"stitch", "build", "granger"}
    manifest = json.loads((out / "manifest.json").read_text())
    assert [f["path"] for f in manifest["files"]] == summary["files"]


def test_config_error(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"unknown_key": 1}')
    with pytest.raises(attnet.ConfigError):
        attnet.run(cfg)


def test_simgen(tmp_path):
    attnet.simgen(tmp_path)
    for name in ("events.csv", "trends.csv", "regions.csv", "embeddings.txt", "truth.json"):
        assert (tmp_path / name).read_bytes() == (SOURCE / "data" / "fixture" / name).read_bytes()
