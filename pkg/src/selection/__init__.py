"""Model selection: semantic coherence, FREX exclusivity and topic-count sweeps."""

from src.selection.metrics import (
    ecdf,
    exclusivity,
    frex_scores,
    model_coherence,
    semantic_coherence,
    top_word_indices,
)
from src.selection.sweep import SelectionPoint, selection_frame, sweep_k

__all__ = [
    "SelectionPoint",
    "ecdf",
    "exclusivity",
    "frex_scores",
    "model_coherence",
    "selection_frame",
    "semantic_coherence",
    "sweep_k",
    "top_word_indices",
]
