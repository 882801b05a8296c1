"""Vocabulary pruning and the sparse document-term matrix."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import scipy.sparse as sp

from src.common.artifacts import (
    read_lines,
    read_sparse_counts,
    write_lines,
    write_sparse_counts,
)
from src.common.errors import EmptyVocabularyError, StageInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Vocabulary:
    """Lexicographically ordered token inventory with document frequencies."""

    tokens: Tuple[str, ...]
    doc_frequency: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def index(self) -> Dict[str, int]:
        return {token: i for i, token in enumerate(self.tokens)}

    def save(self, path: Union[str, Path], config_hash: str) -> Path:
        """Write one `token<TAB>doc_frequency` line per token."""
        lines = [f"{t}\t{df}" for t, df in zip(self.tokens, self.doc_frequency)]
        return write_lines(lines, path, config_hash)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Vocabulary":
        tokens, freqs = [], []
        for line in read_lines(path):
            token, df = line.split("\t")
            tokens.append(token)
            freqs.append(int(df))
        return cls(tuple(tokens), tuple(freqs))


@dataclass
class SparseDtm:
    """Document-term count matrix with row ids and the ids of dropped documents."""

    matrix: sp.csr_matrix
    doc_ids: List[str]
    dropped_ids: List[str] = field(default_factory=list)

    @property
    def n_docs(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_tokens(self) -> int:
        return self.matrix.shape[1]

    @property
    def doc_lengths(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    def entries(self) -> Iterator[Tuple[int, int, int]]:
        """Yield (doc index, token index, count) triples in row-major order."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            yield int(r), int(c), int(v)

    def row(self, d: int) -> Tuple[np.ndarray, np.ndarray]:
        """Word indices and counts of document d."""
        start, end = self.matrix.indptr[d], self.matrix.indptr[d + 1]
        counts = self.matrix.data[start:end].astype(np.float64)
        return self.matrix.indices[start:end], counts

    def save(self, directory: Union[str, Path], config_hash: str) -> List[Path]:
        """Write dtm.mtx, doc_ids.txt and dropped_ids.txt."""
        d = Path(directory)
        return [
            write_sparse_counts(self.matrix, d / "dtm.mtx", config_hash),
            write_lines(self.doc_ids, d / "doc_ids.txt", config_hash),
            write_lines(self.dropped_ids, d / "dropped_ids.txt", config_hash),
        ]

    @classmethod
    def load(cls, directory: Union[str, Path]) -> "SparseDtm":
        d = Path(directory)
        matrix = read_sparse_counts(d / "dtm.mtx")
        doc_ids = read_lines(d / "doc_ids.txt")
        if len(doc_ids) != matrix.shape[0]:
            raise StageInputError(f"{d}: {len(doc_ids)} ids for {matrix.shape[0]} rows")
        dropped_path = d / "dropped_ids.txt"
        dropped = read_lines(dropped_path) if dropped_path.is_file() else []
        return cls(matrix, doc_ids, dropped)


def prune_vocabulary(
    corpus: Sequence[Sequence[str]], lower: float = 0.001, upper: float = 0.99
) -> Vocabulary:
    """Drop tokens appearing in too few or too many documents.

    A token is removed when its document share is strictly below `lower` or
    strictly above `upper`.

    Args:
        corpus: Tokenized documents.
        lower: Lower document-share bound.
        upper: Upper document-share bound.

    Returns:
        Vocabulary: Retained tokens in lexicographic order.

    Raises:
        ValueError: If the bounds are invalid.
        EmptyVocabularyError: If nothing survives.
    """
    if not 0.0 <= lower < upper <= 1.0:
        raise ValueError(f"Invalid prune bounds lower={lower}, upper={upper}")
    n_docs = len(corpus)
    doc_frequency: Counter = Counter()
    for tokens in corpus:
        doc_frequency.update(set(tokens))

    kept = sorted(
        t
        for t, df in doc_frequency.items()
        if not (df / n_docs < lower or df / n_docs > upper)
    )
    if not kept:
        raise EmptyVocabularyError(
            f"All {len(doc_frequency)} tokens pruned with bounds "
            f"[{lower}, {upper}] over {n_docs} documents"
        )
    logger.info(f"Pruned vocabulary from {len(doc_frequency)} to {len(kept)} tokens")
    return Vocabulary(tuple(kept), tuple(doc_frequency[t] for t in kept))


def build_dtm(
    corpus: Sequence[Sequence[str]], vocabulary: Vocabulary, doc_ids: Sequence[str]
) -> SparseDtm:
    """Count vocabulary tokens per document.

    Documents left without any vocabulary token are dropped and listed in
    `dropped_ids`.

    Args:
        corpus: Tokenized documents.
        vocabulary: Retained tokens.
        doc_ids: Ids aligned with `corpus`.

    Returns:
        SparseDtm: The count matrix over the non-empty documents.
    """
    if len(vocabulary) == 0:
        raise EmptyVocabularyError("Cannot build a matrix over an empty vocabulary")
    index = vocabulary.index()
    rows: List[int] = []
    cols: List[int] = []
    vals: List[int] = []
    kept_ids: List[str] = []
    dropped: List[str] = []
    for doc_id, tokens in zip(doc_ids, corpus):
        counts = Counter(index[t] for t in tokens if t in index)
        if not counts:
            dropped.append(doc_id)
            continue
        r = len(kept_ids)
        kept_ids.append(doc_id)
        for c in sorted(counts):
            rows.append(r)
            cols.append(c)
            vals.append(counts[c])

    if dropped:
        logger.warning(f"Dropped {len(dropped)} documents with no vocabulary tokens")
    matrix = sp.csr_matrix(
        (
            np.asarray(vals, dtype=np.int64),
            (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)),
        ),
        shape=(len(kept_ids), len(vocabulary)),
    )
    return SparseDtm(matrix=matrix, doc_ids=kept_ids, dropped_ids=dropped)


def vocabulary_report(vocabulary: Vocabulary, dtm: SparseDtm) -> pd.DataFrame:
    """Per-token totals and document coverage.

    Returns:
        pd.DataFrame: token, total_count, n_documents, pct_documents, sorted by
            total count.
    """
    totals = np.asarray(dtm.matrix.sum(axis=0)).ravel()
    n_documents = np.diff(dtm.matrix.tocsc().indptr)
    report = pd.DataFrame(
        {
            "token": list(vocabulary.tokens),
            "total_count": totals.astype(np.int64),
            "n_documents": n_documents.astype(np.int64),
            "pct_documents": 100.0 * n_documents / max(dtm.n_docs, 1),
        }
    )
    report = report.sort_values(
        ["total_count", "token"], ascending=[False, True], kind="mergesort"
    )
    return report.reset_index(drop=True)
