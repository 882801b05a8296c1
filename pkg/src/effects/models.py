"""Design builders for the effect models."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.corpus.documents import Document, GenderFlag
from src.effects.composition import EffectModelSpec, TopicShare
from src.scientometrics.concentration import topic_concentration

logger = logging.getLogger(__name__)


def resolve_base_year(
    documents: Sequence[Document], base_year: Optional[int] = None
) -> int:
    """The given base year, or the earliest corpus year."""
    if not documents:
        raise ValueError("No documents")
    return int(base_year) if base_year is not None else min(d.year for d in documents)


def _year_offsets(documents: Sequence[Document], base_year: int) -> np.ndarray:
    return np.array([d.year - base_year for d in documents], dtype=float)


def drop_constant_columns(
    x: np.ndarray, names: Sequence[str], keep: Sequence[str] = ("intercept",)
) -> Tuple[np.ndarray, List[str], List[str]]:
    """Drop columns that do not vary, except those named in `keep`.

    Returns:
        Tuple of (x, names, flags describing dropped columns).
    """
    kept, flags = [], []
    for i, name in enumerate(names):
        if name in keep or np.ptp(x[:, i]) > 0:
            kept.append(i)
        else:
            flags.append(f"{name}: constant across the corpus, column dropped")
            logger.warning(f"Dropped constant column {name}")
    return x[:, kept], [names[i] for i in kept], flags


def model_trend(
    documents: Sequence[Document], topic: int, base_year: Optional[int] = None
) -> EffectModelSpec:
    """Prevalence of a topic on a linear year trend.

    mu = logit^-1(a + b (year - base_year)); the intercept is reported as the
    base-year prevalence and b x100.

    Raises:
        ValueError: If the corpus has a single distinct year.
    """
    base = resolve_base_year(documents, base_year)
    offsets = _year_offsets(documents, base)
    if np.unique(offsets).size < 2:
        raise ValueError("A trend needs at least two distinct years")
    x = np.column_stack([np.ones_like(offsets), offsets])
    return EffectModelSpec(
        model_id="trend",
        unit=f"topic_{topic}",
        x=x,
        names=["intercept", "trend"],
        response=TopicShare(topic),
        percent=("trend",),
        transform_intercept=True,
    )


def model_yearly(
    documents: Sequence[Document],
    topic: int,
    base_year: Optional[int] = None,
    last_year: Optional[int] = None,
) -> EffectModelSpec:
    """Prevalence of a topic on year indicators against the base year.

    Years in (base_year, last_year] without documents get no indicator and are
    flagged.

    Raises:
        ValueError: If the base year has no documents or no later year has any.
    """
    base = resolve_base_year(documents, base_year)
    years = np.array([d.year for d in documents])
    if not np.any(years == base):
        raise ValueError(f"Base year {base} has no documents")
    last = int(last_year) if last_year is not None else int(years.max())

    columns, names, flags = [np.ones(len(years))], ["intercept"], []
    for year in range(base + 1, last + 1):
        indicator = (years == year).astype(float)
        if not indicator.any():
            flags.append(f"year_{year}: no documents, indicator dropped")
            logger.warning(f"Year {year} has no documents; its indicator is dropped")
            continue
        columns.append(indicator)
        names.append(f"year_{year}")
    if len(names) < 2:
        raise ValueError("No year after the base year has documents")

    return EffectModelSpec(
        model_id="yearly",
        unit=f"topic_{topic}",
        x=np.column_stack(columns),
        names=names,
        response=TopicShare(topic),
        percent=tuple(names[1:]),
        transform_intercept=True,
        flags=flags,
    )


@dataclass(frozen=True)
class JournalConcentration:
    """Response: concentration per year of one journal, or per article."""

    groups: Tuple[np.ndarray, ...]
    per_article: bool = False

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        if self.per_article:
            return topic_concentration(theta[self.groups[0]])
        return np.array(
            [topic_concentration(theta[rows].mean(axis=0)) for rows in self.groups]
        )


def model_journal_tc(
    documents: Sequence[Document],
    base_year: Optional[int] = None,
    per_article: bool = False,
    min_years: int = 3,
) -> Tuple[List[EffectModelSpec], List[str]]:
    """Per-journal regression of topic concentration on the year.

    By default each journal's response is the concentration of its yearly mean
    prevalence; with per_article it is each article's concentration.

    Returns:
        Tuple of (one spec per journal, flags for skipped journals).
    """
    base = resolve_base_year(documents, base_year)
    journals = np.array([d.journal for d in documents])
    years = np.array([d.year for d in documents])
    specs, skipped = [], []
    for journal in sorted(set(journals.tolist())):
        rows = np.flatnonzero(journals == journal)
        journal_years = np.unique(years[rows])
        if journal_years.size < min_years:
            skipped.append(
                f"{journal}: {journal_years.size} years, fewer than {min_years}, "
                "skipped"
            )
            logger.warning(
                f"Journal {journal} has {journal_years.size} years; "
                "concentration trend skipped"
            )
            continue
        if per_article:
            offsets = (years[rows] - base).astype(float)
            response = JournalConcentration(groups=(rows,), per_article=True)
        else:
            offsets = (journal_years - base).astype(float)
            groups = tuple(rows[years[rows] == y] for y in journal_years)
            response = JournalConcentration(groups=groups)
        specs.append(
            EffectModelSpec(
                model_id="journal_tc",
                unit=journal,
                x=np.column_stack([np.ones_like(offsets), offsets]),
                names=["intercept", "trend"],
                response=response,
                percent=("trend",),
            )
        )
    return specs, skipped


def model_journal_topic_trend(
    documents: Sequence[Document], topic: int, base_year: Optional[int] = None
) -> EffectModelSpec:
    """Prevalence of a topic with a journal-specific intercept and year slope.

    Columns are one indicator per journal and one indicator x (year - base)
    per journal. A journal observed in a single year keeps its intercept and
    loses its slope, which is flagged.
    """
    base = resolve_base_year(documents, base_year)
    journals = np.array([d.journal for d in documents])
    offsets = _year_offsets(documents, base)
    intercepts, slopes, names, slope_names, flags = [], [], [], [], []
    for journal in sorted(set(journals.tolist())):
        indicator = (journals == journal).astype(float)
        intercepts.append(indicator)
        names.append(f"intercept_{journal}")
        if np.unique(offsets[indicator > 0]).size < 2:
            flags.append(f"trend_{journal}: single year, slope dropped")
            logger.warning(
                f"Journal {journal} has a single year; its slope is dropped"
            )
            continue
        slopes.append(indicator * offsets)
        slope_names.append(f"trend_{journal}")
    return EffectModelSpec(
        model_id="journal_topic_trend",
        unit=f"topic_{topic}",
        x=np.column_stack(intercepts + slopes),
        names=names + slope_names,
        response=TopicShare(topic),
        percent=tuple(slope_names),
        flags=flags,
    )


TEAM_COLUMNS = (
    "intercept",
    "trend",
    "n_authors",
    "woman",
    "top_tier",
    "gender_unknown",
)


def model_team(
    documents: Sequence[Document], topic: int, base_year: Optional[int] = None
) -> EffectModelSpec:
    """Prevalence of a topic on team characteristics.

    mu = logit^-1(a + b (year - base) + c n_authors + d woman + e top_tier),
    with an indicator for unknown gender as a control. Constant columns are
    dropped and flagged.
    """
    base = resolve_base_year(documents, base_year)
    gender = [d.has_woman for d in documents]
    x = np.column_stack(
        [
            np.ones(len(documents)),
            _year_offsets(documents, base),
            np.array([d.n_authors for d in documents], dtype=float),
            np.array([g == GenderFlag.YES for g in gender], dtype=float),
            np.array([d.has_top_tier for d in documents], dtype=float),
            np.array([g == GenderFlag.UNKNOWN for g in gender], dtype=float),
        ]
    )
    x, names, flags = drop_constant_columns(x, list(TEAM_COLUMNS))
    return EffectModelSpec(
        model_id="team",
        unit=f"topic_{topic}",
        x=x,
        names=names,
        response=TopicShare(topic),
        percent=tuple(n for n in ("n_authors", "woman", "top_tier") if n in names),
        flags=flags,
    )
