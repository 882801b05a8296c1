"""Tests for run manifests."""

from pathlib import Path

import pandas as pd
import pytest

from src.common.artifacts import read_json, write_table
from src.common.manifest import (
    MANIFEST_NAME,
    RunManifest,
    verify_manifest,
    verify_output,
)

HASH = "cd" * 32


def _stage(temp_dir: Path, name: str = "fit") -> RunManifest:
    manifest = RunManifest(name, temp_dir / name, HASH, seed=5)
    path = write_table(pd.DataFrame({"x": [1, 2]}), temp_dir / name / "table.csv", HASH)
    manifest.record_artifact(path)
    manifest.update_status("completed", {"rows": 2})
    return manifest


@pytest.mark.unit
def test_write_and_verify(temp_dir: Path):
    """A fresh manifest verifies without problems."""
    manifest = _stage(temp_dir)
    with manifest.timer("step"):
        pass
    path = manifest.write()

    body = read_json(path)
    assert body["stage"] == "fit"
    assert body["config_hash"] == HASH
    assert body["seed"] == 5
    assert body["status"] == "completed"
    assert "table.csv" in body["artifacts"]
    assert "step" in body["timings"]
    assert verify_manifest(temp_dir / "fit") == []


@pytest.mark.unit
def test_manifest_hash_ignores_timings(temp_dir: Path):
    """Timings do not enter the manifest hash."""
    a = _stage(temp_dir, "a")
    b = _stage(temp_dir, "b")
    b.stage = "a"
    a.timings["step"] = 1.0
    b.timings["step"] = 99.0
    assert a.manifest_hash() == b.manifest_hash()


@pytest.mark.unit
def test_tampered_artifact(temp_dir: Path):
    """Changing an artifact after the manifest is written is reported."""
    _stage(temp_dir).write()
    table = temp_dir / "fit" / "table.csv"
    table.write_text(table.read_text() + "3\n")

    problems = verify_manifest(temp_dir / "fit")
    assert any("digest mismatch" in p for p in problems)


@pytest.mark.unit
def test_foreign_hash_and_missing_file(temp_dir: Path):
    """Artifacts from another configuration and deleted artifacts are reported."""
    manifest = _stage(temp_dir)
    other = write_table(
        pd.DataFrame({"y": [0]}), temp_dir / "fit" / "other.csv", "ef" * 32
    )
    manifest.record_artifact(other)
    manifest.write()
    (temp_dir / "fit" / "table.csv").unlink()

    problems = verify_manifest(temp_dir / "fit")
    assert any("embedded config hash" in p for p in problems)
    assert any("missing" in p for p in problems)


@pytest.mark.unit
def test_verify_output(temp_dir: Path):
    """Every stage directory with a manifest is checked."""
    _stage(temp_dir, "fit").write()
    _stage(temp_dir, "analyze").write()
    (temp_dir / "stray").mkdir()

    results = verify_output(temp_dir)
    assert sorted(results) == ["analyze", "fit"]
    assert all(problems == [] for problems in results.values())
    missing = temp_dir / "stray" / MANIFEST_NAME
    assert verify_manifest(temp_dir / "stray") == [f"{missing}: manifest missing"]
