"""Covariate effects on topic prevalence: beta regression over composition draws."""

from src.effects.betareg import (
    BetaRegressionFit,
    beta_regression_fit,
    check_full_rank,
    clamp_response,
)
from src.effects.composition import (
    EffectEstimate,
    EffectModelSpec,
    TopicShare,
    aggregate_fits,
    draw_prevalences,
    estimate_effects,
    method_of_composition,
)
from src.effects.models import (
    JournalConcentration,
    drop_constant_columns,
    model_journal_tc,
    model_journal_topic_trend,
    model_team,
    model_trend,
    model_yearly,
    resolve_base_year,
)
from src.effects.report import (
    effect_report,
    journal_topic_extremes,
    significance_stars,
    team_extremes,
    trend_summary,
    yearly_table,
)

__all__ = [
    "BetaRegressionFit",
    "EffectEstimate",
    "EffectModelSpec",
    "JournalConcentration",
    "TopicShare",
    "aggregate_fits",
    "beta_regression_fit",
    "check_full_rank",
    "clamp_response",
    "draw_prevalences",
    "drop_constant_columns",
    "effect_report",
    "estimate_effects",
    "journal_topic_extremes",
    "method_of_composition",
    "model_journal_tc",
    "model_journal_topic_trend",
    "model_team",
    "model_trend",
    "model_yearly",
    "resolve_base_year",
    "significance_stars",
    "team_extremes",
    "trend_summary",
    "yearly_table",
]
