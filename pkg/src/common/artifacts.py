"""Readers and writers for stage artifacts.

Every writer embeds the configuration hash so that `verify` can check provenance.
Nothing written here contains timestamps, so reruns are byte-identical.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import pandas as pd
import scipy.io
import scipy.sparse as sp

from src.common.errors import StageInputError

logger = logging.getLogger(__name__)

ARRAY_MAGIC = b"SCITOPICS-ARRAYS\n"
ARRAY_FORMAT_VERSION = 1
HASH_PATTERN = re.compile(r"config_hash\W+([0-9a-f]{64})")

PathLike = Union[str, Path]


def require_file(path: PathLike) -> Path:
    """Check that a stage input exists.

    Args:
        path: The file that a stage needs.

    Returns:
        Path: The same path.

    Raises:
        StageInputError: If the file is missing.
    """
    p = Path(path)
    if not p.is_file():
        raise StageInputError(f"Missing stage input: {p}", path=str(p))
    return p


def write_table(df: pd.DataFrame, path: PathLike, config_hash: str) -> Path:
    """Write a delimited table preceded by a config hash comment line."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="") as f:
        f.write(f"# config_hash={config_hash}\n")
        df.to_csv(f, index=False, lineterminator="\n", float_format="%.12g")
    logger.info(f"Wrote table {p} ({len(df)} rows)")
    return p


def read_table(path: PathLike) -> pd.DataFrame:
    """Read a table written by write_table."""
    p = require_file(path)
    return pd.read_csv(p, skiprows=1, keep_default_na=False, na_values=[""])


def write_lines(lines: List[str], path: PathLike, config_hash: str) -> Path:
    """Write plain text lines preceded by a config hash comment line."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="") as f:
        f.write(f"# config_hash={config_hash}\n")
        for line in lines:
            f.write(f"{line}\n")
    return p


def read_lines(path: PathLike) -> List[str]:
    """Read lines written by write_lines, skipping comment lines."""
    p = require_file(path)
    with open(p, "r", encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f if not line.startswith("#")]


def write_json(
    payload: Mapping[str, Any], path: PathLike, config_hash: Optional[str] = None
) -> Path:
    """Write a JSON document with sorted keys."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    body = dict(payload)
    if config_hash is not None:
        body["config_hash"] = config_hash
    with open(p, "w", encoding="utf-8", newline="") as f:
        json.dump(body, f, indent=2, sort_keys=True)
        f.write("\n")
    return p


def read_json(path: PathLike) -> Dict[str, Any]:
    """Read a JSON document."""
    p = require_file(path)
    with open(p, "r", encoding="utf-8") as f:
        return json.load(f)


def write_sparse_counts(matrix: sp.spmatrix, path: PathLike, config_hash: str) -> Path:
    """Write a count matrix in Matrix Market coordinate format.

    The size line is `D V NNZ`; the config hash sits in a comment line.
    """
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    coo = sp.coo_matrix(matrix)
    order = np.lexsort((coo.col, coo.row))
    coo = sp.coo_matrix(
        (coo.data[order].astype(np.int64), (coo.row[order], coo.col[order])),
        shape=coo.shape,
    )
    with open(p, "wb") as f:
        scipy.io.mmwrite(f, coo, comment=f"config_hash={config_hash}", field="integer")
    logger.info(f"Wrote sparse matrix {p} shape={coo.shape} nnz={coo.nnz}")
    return p


def read_sparse_counts(path: PathLike) -> sp.csr_matrix:
    """Read a Matrix Market count matrix as CSR."""
    p = require_file(path)
    return sp.csr_matrix(scipy.io.mmread(str(p))).astype(np.int64)


def save_arrays(
    path: PathLike,
    arrays: Mapping[str, np.ndarray],
    config_hash: str,
    meta: Optional[Mapping[str, Any]] = None,
) -> Path:
    """Save named arrays to a self-describing container.

    Layout: a magic line, a JSON header line (format version, byte order, shapes,
    dtypes, config hash, metadata), then one .npy block per array in header order.
    Floats are stored little-endian float64, integers little-endian int64.

    Args:
        path: Target file.
        arrays: Arrays in the order they should be stored.
        config_hash: Hash of the producing configuration.
        meta: Extra JSON-serializable provenance.

    Returns:
        Path: The written file.
    """
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    prepared: List[Tuple[str, np.ndarray]] = []
    for name, arr in arrays.items():
        a = np.asarray(arr)
        dtype = "<i8" if np.issubdtype(a.dtype, np.integer) else "<f8"
        prepared.append((name, np.ascontiguousarray(a, dtype=dtype)))

    header = {
        "version": ARRAY_FORMAT_VERSION,
        "byteorder": "little",
        "order": "C",
        "config_hash": config_hash,
        "arrays": [
            {"name": n, "shape": list(a.shape), "dtype": a.dtype.str}
            for n, a in prepared
        ],
        "meta": dict(meta or {}),
    }
    with open(p, "wb") as f:
        f.write(ARRAY_MAGIC)
        f.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        for _, a in prepared:
            np.lib.format.write_array(f, a, allow_pickle=False)
    return p


def load_arrays(path: PathLike) -> Tuple[Dict[str, np.ndarray], Dict[str, Any]]:
    """Load a container written by save_arrays.

    Returns:
        Tuple of (arrays by name, header).

    Raises:
        StageInputError: If the file is missing or not a container.
    """
    p = require_file(path)
    with open(p, "rb") as f:
        if f.readline() != ARRAY_MAGIC:
            raise StageInputError(f"Not an array container: {p}", path=str(p))
        header = json.loads(f.readline().decode("utf-8"))
        if header.get("version") != ARRAY_FORMAT_VERSION:
            raise StageInputError(
                f"Unsupported container version {header.get('version')} in {p}",
                path=str(p),
            )
        arrays: Dict[str, np.ndarray] = {}
        for entry in header["arrays"]:
            arr = np.lib.format.read_array(f, allow_pickle=False)
            if list(arr.shape) != entry["shape"]:
                raise StageInputError(
                    f"Corrupt array {entry['name']} in {p}", path=str(p)
                )
            arrays[entry["name"]] = arr
    return arrays, header


def embedded_hash(path: PathLike) -> Optional[str]:
    """Extract the config hash embedded near the start of an artifact."""
    with open(path, "rb") as f:
        head = f.read(8192).decode("latin-1")
    match = HASH_PATTERN.search(head)
    return match.group(1) if match else None
