"""Run manifests: provenance, status and artifact digests per stage."""

import hashlib
import json
import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Union

from src.common.artifacts import embedded_hash, read_json, write_json

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def file_digest(path: Union[str, Path]) -> str:
    """Compute the SHA-256 of a file."""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


class RunManifest:
    """Manifest manager for one pipeline stage."""

    def __init__(
        self, stage: str, stage_dir: Union[str, Path], config_hash: str, seed: int
    ):
        """Initialize the manifest.

        Args:
            stage: Stage name (preprocess, fit, select, analyze, simulate).
            stage_dir: Directory holding the stage artifacts.
            config_hash: Hash of the run configuration.
            seed: Base random seed.
        """
        self.stage = stage
        self.stage_dir = Path(stage_dir)
        self.config_hash = config_hash
        self.seed = seed
        self.status = "running"
        self.details: Dict[str, Any] = {}
        self.artifacts: Dict[str, str] = {}
        self.timings: Dict[str, float] = {}

    @contextmanager
    def timer(self, step: str) -> Iterator[None]:
        """Time a step; durations go to the timings block only."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[step] = round(time.perf_counter() - start, 6)
            logger.info(f"[{self.stage}] {step} took {self.timings[step]:.2f}s")

    def record_artifact(self, path: Union[str, Path]) -> None:
        """Record the digest of a written artifact.

        Args:
            path: File inside the stage directory.
        """
        p = Path(path)
        self.artifacts[p.relative_to(self.stage_dir).as_posix()] = file_digest(p)

    def update_status(
        self, status: str, details: Optional[Dict[str, Any]] = None
    ) -> None:
        """Update the stage status.

        Args:
            status: The new status.
            details: Additional details about the status.
        """
        self.status = status
        if details:
            self.details.update(details)

    def content(self) -> Dict[str, Any]:
        """Get the manifest body without timings."""
        return {
            "stage": self.stage,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "status": self.status,
            "details": self.details,
            "artifacts": dict(sorted(self.artifacts.items())),
        }

    def manifest_hash(self) -> str:
        """Hash of the manifest body; identical inputs give identical hashes."""
        canonical = json.dumps(self.content(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def write(self) -> Path:
        """Write manifest.json into the stage directory."""
        body = self.content()
        body["manifest_hash"] = self.manifest_hash()
        body["timings"] = self.timings
        path = write_json(body, self.stage_dir / MANIFEST_NAME)
        logger.info(f"[{self.stage}] manifest written to {path} (status {self.status})")
        return path


def verify_manifest(stage_dir: Union[str, Path]) -> List[str]:
    """Re-check a stage's artifacts against its manifest.

    Args:
        stage_dir: Directory containing manifest.json.

    Returns:
        List[str]: Human-readable problems; empty when everything matches.
    """
    stage_dir = Path(stage_dir)
    manifest_path = stage_dir / MANIFEST_NAME
    if not manifest_path.is_file():
        return [f"{manifest_path}: manifest missing"]

    manifest = read_json(manifest_path)
    expected_hash = manifest.get("config_hash")
    problems: List[str] = []

    for name, digest in sorted(manifest.get("artifacts", {}).items()):
        path = stage_dir / name
        if not path.is_file():
            problems.append(f"{path}: missing")
            continue
        if file_digest(path) != digest:
            problems.append(f"{path}: digest mismatch")
        found = embedded_hash(path)
        if found is not None and found != expected_hash:
            problems.append(f"{path}: embedded config hash {found} != {expected_hash}")
        elif found is None:
            problems.append(f"{path}: no embedded config hash")

    keys = ("stage", "config_hash", "seed", "status", "details", "artifacts")
    body = {k: manifest.get(k) for k in keys}
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    if digest != manifest.get("manifest_hash"):
        problems.append(f"{manifest_path}: manifest hash mismatch")
    return problems


def verify_output(out_dir: Union[str, Path]) -> Dict[str, List[str]]:
    """Verify every stage directory under an output root.

    Returns:
        Dict[str, List[str]]: Problems per stage directory that has a manifest.
    """
    out = Path(out_dir)
    results: Dict[str, List[str]] = {}
    for manifest_path in sorted(out.glob(f"*/{MANIFEST_NAME}")):
        results[manifest_path.parent.name] = verify_manifest(manifest_path.parent)
    return results
