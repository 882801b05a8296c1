"""Scientometric analyses of fitted topic prevalences."""

from src.scientometrics.concentration import tc_linear_trend, topic_concentration
from src.scientometrics.descriptive import (
    DescriptiveStats,
    descriptive_stats,
    documents_frame,
)
from src.scientometrics.labels import (
    RankedItems,
    frex_words,
    label_table,
    top_documents,
    top_words,
    word_set_contrast,
)
from src.scientometrics.networks import (
    CorrelationNetwork,
    journal_network,
    spearman_matrix,
    spearman_network,
    topic_network,
)
from src.scientometrics.prevalence import (
    GroupBy,
    PrevalenceTable,
    aggregate_prevalence,
    aggregate_theta,
    default_labels,
    extreme_topics,
    topic_prevalence_table,
    yearly_concentration,
)

__all__ = [
    "CorrelationNetwork",
    "DescriptiveStats",
    "GroupBy",
    "PrevalenceTable",
    "RankedItems",
    "aggregate_prevalence",
    "aggregate_theta",
    "default_labels",
    "descriptive_stats",
    "documents_frame",
    "extreme_topics",
    "frex_words",
    "journal_network",
    "label_table",
    "spearman_matrix",
    "spearman_network",
    "tc_linear_trend",
    "top_documents",
    "top_words",
    "topic_concentration",
    "topic_network",
    "topic_prevalence_table",
    "word_set_contrast",
    "yearly_concentration",
]
