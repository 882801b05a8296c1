"""Prevalence aggregation by document, year, journal and journal-year."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from src.corpus.documents import Document
from src.scientometrics.concentration import topic_concentration
from src.stm.model import DocPosterior, theta_matrix

logger = logging.getLogger(__name__)


class GroupBy(str, Enum):
    """Aggregation unit."""

    DOCUMENT = "document"
    YEAR = "year"
    JOURNAL = "journal"
    JOURNAL_YEAR = "journal-year"


def default_labels(n_topics: int) -> List[str]:
    return [f"Topic {k + 1}" for k in range(n_topics)]


@dataclass
class PrevalenceTable:
    """Mean prevalence per unit.

    Attributes:
        group_by: The aggregation unit.
        units: Unit labels (document id, year, journal, or journal:year).
        values: One prevalence row per unit.
        n_documents: Documents averaged into each row.
        journals: Journal of each row (journal and journal-year tables).
        years: Year of each row (year and journal-year tables).
    """

    group_by: GroupBy
    units: List[str]
    values: np.ndarray
    n_documents: List[int]
    journals: Optional[List[str]] = None
    years: Optional[List[int]] = None

    @property
    def n_topics(self) -> int:
        return self.values.shape[1]

    def concentration(self) -> np.ndarray:
        """Concentration of each averaged row."""
        return topic_concentration(self.values)

    def to_frame(
        self, labels: Optional[Sequence[str]] = None, percent: bool = False
    ) -> pd.DataFrame:
        labels = list(labels) if labels is not None else default_labels(self.n_topics)
        frame = pd.DataFrame(self.values * (100.0 if percent else 1.0), columns=labels)
        frame.insert(0, "n_documents", self.n_documents)
        if self.years is not None:
            frame.insert(0, "year", self.years)
        if self.journals is not None:
            frame.insert(0, "journal", self.journals)
        frame.insert(0, "unit", self.units)
        return frame


def aggregate_theta(
    theta: np.ndarray, documents: Sequence[Document], group_by: GroupBy
) -> PrevalenceTable:
    """Average prevalence rows per group; groups without documents have no row.

    Args:
        theta: D x K prevalence rows aligned with `documents`.
        documents: Document records.
        group_by: The aggregation unit.

    Returns:
        PrevalenceTable: Rows sorted by unit (years ascending).
    """
    if theta.shape[0] != len(documents):
        raise ValueError(
            f"{theta.shape[0]} prevalence rows for {len(documents)} documents"
        )
    group_by = GroupBy(group_by)
    if group_by == GroupBy.DOCUMENT:
        return PrevalenceTable(
            group_by=group_by,
            units=[d.id for d in documents],
            values=np.array(theta, dtype=float),
            n_documents=[1] * len(documents),
        )

    frame = pd.DataFrame(theta)
    keys = {
        GroupBy.YEAR: ["year"],
        GroupBy.JOURNAL: ["journal"],
        GroupBy.JOURNAL_YEAR: ["journal", "year"],
    }[group_by]
    if "journal" in keys:
        frame["journal"] = [d.journal for d in documents]
    if "year" in keys:
        frame["year"] = [d.year for d in documents]
    grouped = frame.groupby(keys, sort=True)
    means = grouped.mean()
    counts = grouped.size()

    index = list(means.index)
    if group_by == GroupBy.YEAR:
        units, journals, years = [str(y) for y in index], None, [int(y) for y in index]
    elif group_by == GroupBy.JOURNAL:
        units, journals, years = [str(j) for j in index], [str(j) for j in index], None
    else:
        units = [f"{j}:{y}" for j, y in index]
        journals, years = [str(j) for j, _ in index], [int(y) for _, y in index]
    return PrevalenceTable(
        group_by=group_by,
        units=units,
        values=means.to_numpy(dtype=float),
        n_documents=[int(c) for c in counts.to_numpy()],
        journals=journals,
        years=years,
    )


def aggregate_prevalence(
    posteriors: Sequence[DocPosterior], documents: Sequence[Document], group_by: GroupBy
) -> PrevalenceTable:
    """Average the MAP prevalences of the documents in each group."""
    return aggregate_theta(theta_matrix(posteriors), documents, group_by)


def extreme_topics(
    table: PrevalenceTable, labels: Optional[Sequence[str]] = None
) -> pd.DataFrame:
    """Highest and lowest topic of each unit with the unit's concentration.

    Ties go to the label that sorts first. Prevalences are reported x100.
    """
    labels = list(labels) if labels is not None else default_labels(table.n_topics)
    rows = []
    for unit, row, tc in zip(table.units, table.values, table.concentration()):
        highest = min(np.flatnonzero(row == row.max()), key=lambda k: labels[k])
        lowest = min(np.flatnonzero(row == row.min()), key=lambda k: labels[k])
        rows.append(
            {
                "unit": unit,
                "highest": labels[highest],
                "highest_pct": 100.0 * row[highest],
                "lowest": labels[lowest],
                "lowest_pct": 100.0 * row[lowest],
                "tc": float(tc),
            }
        )
    return pd.DataFrame(
        rows,
        columns=["unit", "highest", "highest_pct", "lowest", "lowest_pct", "tc"],
    )


def topic_prevalence_table(
    theta: np.ndarray, labels: Optional[Sequence[str]] = None
) -> pd.DataFrame:
    """Mean prevalence per topic (x100), ranked from most to least prevalent."""
    labels = list(labels) if labels is not None else default_labels(theta.shape[1])
    means = theta.mean(axis=0)
    order = np.lexsort((np.arange(len(means)), -means))
    return pd.DataFrame(
        {
            "rank": np.arange(1, len(means) + 1),
            "topic": order,
            "label": [labels[k] for k in order],
            "prevalence_pct": 100.0 * means[order],
        }
    )


def yearly_concentration(
    theta: np.ndarray, documents: Sequence[Document], per_article: bool = False
) -> pd.DataFrame:
    """Concentration per year.

    With per_article the yearly value is the mean of the articles'
    concentrations, otherwise the concentration of the year's mean prevalence.
    """
    if per_article:
        frame = pd.DataFrame(
            {"year": [d.year for d in documents], "tc": topic_concentration(theta)}
        )
        return frame.groupby("year", sort=True)["tc"].mean().reset_index()
    table = aggregate_theta(theta, documents, GroupBy.YEAR)
    return pd.DataFrame({"year": table.years, "tc": table.concentration()})
