"""Descriptive corpus statistics per journal and year."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Sequence

import pandas as pd

from src.corpus.documents import Document, GenderFlag

logger = logging.getLogger(__name__)


@dataclass
class DescriptiveStats:
    """Corpus description.

    Attributes:
        journal_year: Articles, mean authors and team shares per journal-year,
            with the growth rate against the journal's previous observed year.
        yearly: Articles, outlets, mean authors and team shares per year, with
            the median growth rate across the journals observed that year.
        journals: Totals per journal with mean yearly articles and mean growth rate.
        growth_summary: Mean and median of the journals' mean growth rates.
    """

    journal_year: pd.DataFrame
    yearly: pd.DataFrame
    journals: pd.DataFrame
    growth_summary: Dict[str, float] = field(default_factory=dict)


def documents_frame(documents: Sequence[Document]) -> pd.DataFrame:
    """One row per document with the covariates used in the descriptive tables."""
    return pd.DataFrame(
        {
            "id": [d.id for d in documents],
            "journal": [d.journal for d in documents],
            "year": [d.year for d in documents],
            "n_authors": [d.n_authors for d in documents],
            "woman": [d.has_woman == GenderFlag.YES for d in documents],
            "gender_unknown": [d.has_woman == GenderFlag.UNKNOWN for d in documents],
            "top_tier": [d.has_top_tier for d in documents],
        }
    )


def _summarize(grouped: "pd.core.groupby.DataFrameGroupBy") -> pd.DataFrame:
    return grouped.agg(
        articles=("id", "size"),
        mean_authors=("n_authors", "mean"),
        share_woman=("woman", "mean"),
        share_gender_unknown=("gender_unknown", "mean"),
        share_top_tier=("top_tier", "mean"),
    )


def descriptive_stats(documents: Sequence[Document]) -> DescriptiveStats:
    """Counts, team characteristics and growth rates.

    Years without articles have no row. Growth rates compare a journal's
    article count with its previous observed year.
    """
    frame = documents_frame(documents)
    if frame.empty:
        empty = pd.DataFrame()
        nan = float("nan")
        return DescriptiveStats(
            empty, empty, empty, {"mean_growth_rate": nan, "median_growth_rate": nan}
        )

    by_journal_year = frame.groupby(["journal", "year"], sort=True)
    journal_year = _summarize(by_journal_year).reset_index()
    journal_year["growth_rate"] = (
        journal_year.groupby("journal")["articles"].pct_change()
    )

    yearly = _summarize(frame.groupby("year", sort=True)).reset_index()
    outlets = frame.groupby("year", sort=True)["journal"].nunique().to_numpy()
    yearly.insert(2, "outlets", outlets)
    median_growth = journal_year.groupby("year", sort=True)["growth_rate"].median()
    yearly["median_growth_rate"] = yearly["year"].map(median_growth)

    journals = (
        journal_year.groupby("journal", sort=True)
        .agg(
            articles=("articles", "sum"),
            first_year=("year", "min"),
            last_year=("year", "max"),
            mean_yearly_articles=("articles", "mean"),
            mean_growth_rate=("growth_rate", "mean"),
        )
        .reset_index()
    )
    growth = journals["mean_growth_rate"].dropna()
    summary = {
        "mean_growth_rate": float(growth.mean()) if len(growth) else float("nan"),
        "median_growth_rate": float(growth.median()) if len(growth) else float("nan"),
    }
    logger.info(
        f"Described {len(frame)} articles in {len(journals)} journals "
        f"over {len(yearly)} years"
    )
    return DescriptiveStats(
        journal_year=journal_year,
        yearly=yearly,
        journals=journals,
        growth_summary=summary,
    )
