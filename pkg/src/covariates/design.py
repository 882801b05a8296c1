"""Per-document covariate rows."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.common.artifacts import read_table, write_table
from src.common.errors import StageInputError, UnknownJournalError
from src.corpus.documents import Document, GenderFlag
from src.covariates.splines import SplineSpec, bspline_matrix

logger = logging.getLogger(__name__)

SPLINE_PREFIX = "year_bs"
JOURNAL_PREFIX = "journal_"


@dataclass
class DesignMatrix:
    """Covariate rows aligned with the document-term matrix rows.

    Column order: spline block, journal dummies (reference journal omitted),
    centered author count, woman, gender_unknown, top_tier.
    """

    rows: np.ndarray
    column_labels: List[str]
    spline_spec: SplineSpec
    journals: List[str]
    doc_ids: List[str]
    n_authors_mean: float = 0.0

    @property
    def n_docs(self) -> int:
        return self.rows.shape[0]

    @property
    def n_covariates(self) -> int:
        return self.rows.shape[1]

    @property
    def reference_journal(self) -> str:
        return self.journals[0]

    def column(self, label: str) -> np.ndarray:
        return self.rows[:, self.column_labels.index(label)]

    def spline_columns(self) -> List[int]:
        return [
            i
            for i, label in enumerate(self.column_labels)
            if label.startswith(SPLINE_PREFIX)
        ]


def align_documents(
    documents: Sequence[Document], doc_ids: Sequence[str]
) -> List[Document]:
    """Order documents like the matrix rows, dropping those not in it.

    Raises:
        StageInputError: If a row id has no document.
    """
    by_id: Dict[str, Document] = {doc.id: doc for doc in documents}
    missing = [i for i in doc_ids if i not in by_id]
    if missing:
        raise StageInputError(
            f"{len(missing)} matrix rows have no document record, "
            f"e.g. {missing[0]!r}"
        )
    return [by_id[i] for i in doc_ids]


def build_design_matrix(
    documents: Sequence[Document],
    spec: SplineSpec,
    journals: Optional[Sequence[str]] = None,
) -> DesignMatrix:
    """Build the covariate rows.

    Args:
        documents: Documents in matrix-row order.
        spec: Year spline spec.
        journals: Admissible journal keys; the corpus journals when None.
            The lexicographically first is the reference level.

    Returns:
        DesignMatrix: One row per document.

    Raises:
        UnknownJournalError: If a document's journal is not admissible.
        OutOfRangeYearError: If a year lies outside the spline boundaries.
    """
    admissible = journals if journals is not None else [d.journal for d in documents]
    journal_list = sorted(set(admissible))
    journal_pos = {j: i for i, j in enumerate(journal_list)}
    for doc in documents:
        if doc.journal not in journal_pos:
            raise UnknownJournalError(doc.id, doc.journal)

    n = len(documents)
    spline = bspline_matrix([doc.year for doc in documents], spec)

    dummies = np.zeros((n, max(len(journal_list) - 1, 0)))
    for i, doc in enumerate(documents):
        pos = journal_pos[doc.journal]
        if pos > 0:
            dummies[i, pos - 1] = 1.0

    n_authors = np.array([doc.n_authors for doc in documents], dtype=float)
    n_authors_mean = float(n_authors.mean()) if n else 0.0
    gender = [doc.has_woman for doc in documents]
    woman = np.array([g == GenderFlag.YES for g in gender], dtype=float)
    unknown = np.array([g == GenderFlag.UNKNOWN for g in gender], dtype=float)
    top = np.array([doc.has_top_tier for doc in documents], dtype=float)

    rows = np.column_stack(
        [spline, dummies, n_authors - n_authors_mean, woman, unknown, top]
    )
    labels = (
        [f"{SPLINE_PREFIX}{j + 1}" for j in range(spec.df)]
        + [f"{JOURNAL_PREFIX}{j}" for j in journal_list[1:]]
        + ["n_authors_c", "woman", "gender_unknown", "top_tier"]
    )
    logger.info(
        f"Built design matrix {rows.shape} with reference journal "
        f"{journal_list[0]!r}"
    )
    return DesignMatrix(
        rows=rows,
        column_labels=labels,
        spline_spec=spec,
        journals=journal_list,
        doc_ids=[doc.id for doc in documents],
        n_authors_mean=n_authors_mean,
    )


def design_frame(design: DesignMatrix) -> pd.DataFrame:
    """Design rows as a labelled frame with a leading doc_id column."""
    frame = pd.DataFrame(design.rows, columns=design.column_labels)
    frame.insert(0, "doc_id", design.doc_ids)
    return frame


def save_design(design: DesignMatrix, path: Union[str, Path], config_hash: str) -> Path:
    """Export the design rows for audit."""
    return write_table(design_frame(design), path, config_hash)


def load_design(
    path: Union[str, Path], spec: SplineSpec, journals: Sequence[str]
) -> DesignMatrix:
    """Read an exported design table back."""
    frame = read_table(path)
    frame["doc_id"] = frame["doc_id"].astype(str)
    labels = [c for c in frame.columns if c != "doc_id"]
    return DesignMatrix(
        rows=frame[labels].to_numpy(dtype=float),
        column_labels=labels,
        spline_spec=spec,
        journals=sorted(journals),
        doc_ids=frame["doc_id"].tolist(),
    )
