"""Tables of effect estimates."""

import logging
from typing import Dict, Optional, Sequence

import numpy as np
import pandas as pd

from src.effects.composition import EffectEstimate

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    "model",
    "unit",
    "coefficient",
    "estimate",
    "se",
    "p_value",
    "stars",
    "scaled",
]
TEAM_EXTREME_COLUMNS = [
    "characteristic",
    "sign",
    "rank",
    "unit",
    "label",
    "estimate",
    "se",
    "p_value",
    "stars",
]
JOURNAL_EXTREME_COLUMNS = [
    "journal",
    "sign",
    "rank",
    "unit",
    "label",
    "estimate",
    "p_value",
    "stars",
]


def significance_stars(p_value: float) -> str:
    """*** below 1%, ** below 5%, * below 10%."""
    if p_value < 0.01:
        return "***"
    if p_value < 0.05:
        return "**"
    if p_value < 0.1:
        return "*"
    return ""


def effect_report(estimates: Sequence[EffectEstimate]) -> pd.DataFrame:
    """Long-format coefficient table.

    Coefficients listed in an estimate's `percent` are multiplied by 100. A
    transformed intercept is reported as `base_prevalence` (x100) with a
    delta-method standard error.
    """
    rows = []
    for est in estimates:
        for i, name in enumerate(est.names):
            value, se = float(est.estimate[i]), float(est.se[i])
            p = float(est.p_value[i])
            scaled = False
            if i == 0 and est.transform_intercept:
                mu = est.intercept_prevalence()
                se = 100.0 * mu * (1.0 - mu) * se
                name, value, scaled = "base_prevalence", 100.0 * mu, True
            elif name in est.percent:
                value, se, scaled = 100.0 * value, 100.0 * se, True
            rows.append(
                {
                    "model": est.model_id,
                    "unit": est.unit,
                    "coefficient": name,
                    "estimate": value,
                    "se": se,
                    "p_value": p,
                    "stars": significance_stars(p),
                    "scaled": scaled,
                }
            )
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def _topic_label(unit: str, labels: Optional[Sequence[str]]) -> str:
    if labels is None or not unit.startswith("topic_"):
        return unit
    return labels[int(unit.split("_", 1)[1])]


def team_extremes(
    estimates: Sequence[EffectEstimate],
    n: int = 6,
    labels: Optional[Sequence[str]] = None,
) -> pd.DataFrame:
    """The n most positive and n most negative topics per team trait (x100)."""
    rows = []
    for characteristic in ("n_authors", "woman", "top_tier"):
        values = [
            (e, *e.coefficient(characteristic))
            for e in estimates
            if characteristic in e.names
        ]
        if not values:
            logger.warning(f"No estimates carry {characteristic}")
            continue
        ordered = sorted(values, key=lambda t: (-t[1], t[0].unit))
        bottom = list(reversed(ordered))[:n]
        for sign, picked in (("positive", ordered[:n]), ("negative", bottom)):
            for rank, (est, value, se, p) in enumerate(picked, start=1):
                rows.append(
                    {
                        "characteristic": characteristic,
                        "sign": sign,
                        "rank": rank,
                        "unit": est.unit,
                        "label": _topic_label(est.unit, labels),
                        "estimate": 100.0 * value,
                        "se": 100.0 * se,
                        "p_value": p,
                        "stars": significance_stars(p),
                    }
                )
    return pd.DataFrame(rows, columns=TEAM_EXTREME_COLUMNS)


def journal_topic_extremes(
    estimates: Sequence[EffectEstimate],
    n: int = 2,
    labels: Optional[Sequence[str]] = None,
) -> pd.DataFrame:
    """Per journal, the n topics with the highest and lowest slopes (x100)."""
    journals = sorted(
        {
            name[len("trend_") :]
            for e in estimates
            for name in e.names
            if name.startswith("trend_")
        }
    )
    rows = []
    for journal in journals:
        name = f"trend_{journal}"
        values = [(e, *e.coefficient(name)) for e in estimates if name in e.names]
        ordered = sorted(values, key=lambda t: (-t[1], t[0].unit))
        bottom = list(reversed(ordered))[:n]
        for sign, picked in (("highest", ordered[:n]), ("lowest", bottom)):
            for rank, (est, value, se, p) in enumerate(picked, start=1):
                rows.append(
                    {
                        "journal": journal,
                        "sign": sign,
                        "rank": rank,
                        "unit": est.unit,
                        "label": _topic_label(est.unit, labels),
                        "estimate": 100.0 * value,
                        "p_value": p,
                        "stars": significance_stars(p),
                    }
                )
    return pd.DataFrame(rows, columns=JOURNAL_EXTREME_COLUMNS)


def yearly_table(
    estimates: Sequence[EffectEstimate], labels: Optional[Sequence[str]] = None
) -> pd.DataFrame:
    """Topic x year matrix of yearly coefficients (x100), heatmap-ready."""
    records: Dict[str, Dict[str, float]] = {}
    for est in estimates:
        row = records.setdefault(_topic_label(est.unit, labels), {})
        for i, name in enumerate(est.names[1:], start=1):
            row[name[len("year_") :]] = 100.0 * float(est.estimate[i])
    frame = pd.DataFrame.from_dict(records, orient="index")
    frame = frame.reindex(sorted(frame.columns, key=int), axis=1)
    frame.index.name = "topic"
    return frame.reset_index()


def trend_summary(
    estimates: Sequence[EffectEstimate], level: float = 0.05
) -> Dict[str, float]:
    """Across topics: base-year prevalence vs trend correlation, and sign counts."""
    trend = [e for e in estimates if "trend" in e.names]
    slopes = np.array([e.coefficient("trend")[0] for e in trend])
    p_values = np.array([e.coefficient("trend")[2] for e in trend])
    levels = np.array([e.intercept_prevalence() for e in trend])
    correlation = float("nan")
    if len(trend) > 2:
        correlation = float(np.corrcoef(levels, slopes)[0, 1])
    return {
        "n_topics": len(trend),
        "level_trend_correlation": correlation,
        "n_increasing": int(np.sum((slopes > 0) & (p_values < level))),
        "n_decreasing": int(np.sum((slopes < 0) & (p_values < level))),
    }
