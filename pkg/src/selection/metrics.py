"""Topic quality metrics: semantic coherence and FREX exclusivity."""

from typing import List

import numpy as np
from scipy.stats import rankdata

from src.corpus.dtm import SparseDtm
from src.stm.model import StmModel


def top_word_indices(beta_row: np.ndarray, m: int) -> np.ndarray:
    """Indices of the m most probable words; ties go to the lower index.

    Vocabulary indices follow lexicographic token order, so a tie goes to the
    earlier token.
    """
    order = np.argsort(-beta_row, kind="stable")
    return order[: min(m, beta_row.shape[0])]


def semantic_coherence(beta_row: np.ndarray, dtm: SparseDtm, top_m: int = 10) -> float:
    """Co-document coherence of a topic's top words.

    C = sum_{i=2..M} sum_{j<i} log((D(v_i, v_j) + 1) / D(v_j)), where D counts
    documents containing the word(s) and v_1..v_M are ordered by probability.

    Args:
        beta_row: The topic's word distribution.
        dtm: Document-term matrix.
        top_m: Number of top words M.

    Returns:
        float: The coherence (0 when M = 1).
    """
    if top_m < 1:
        raise ValueError("top_m must be at least 1")
    top = top_word_indices(beta_row, top_m)
    present = (dtm.matrix[:, top] > 0).astype(np.float64)
    co_docs = np.asarray((present.T @ present).todense())
    doc_freq = np.diag(co_docs)
    total = 0.0
    for i in range(1, len(top)):
        for j in range(i):
            total += np.log((co_docs[i, j] + 1.0) / doc_freq[j])
    return float(total)


def ecdf(values: np.ndarray) -> np.ndarray:
    """Share of entries less than or equal to each entry.

    Ties take the upper rank, not the midpoint, so a word that tops every
    topic it appears in scores exactly 1.
    """
    return rankdata(values, method="max") / values.size


def frex_scores(model: StmModel, omega: float = 0.7) -> np.ndarray:
    """FREX score of every word in every topic (K x V).

    1 / (omega / F + (1 - omega) / R), with F the within-topic ECDF of the word's
    exclusivity beta_kv / sum_j beta_jv and R the within-topic ECDF of beta_kv.
    """
    beta = model.beta
    exclusive = beta / beta.sum(axis=0, keepdims=True)
    f = np.apply_along_axis(ecdf, 1, exclusive)
    r = np.apply_along_axis(ecdf, 1, beta)
    return 1.0 / (omega / f + (1.0 - omega) / r)


def exclusivity(model: StmModel, top_m: int = 10, omega: float = 0.7) -> List[float]:
    """Mean FREX of each topic's top words.

    Raises:
        ValueError: If the model has fewer than two topics.
    """
    if model.n_topics < 2:
        raise ValueError("Exclusivity needs at least two topics")
    scores = frex_scores(model, omega)
    beta = model.beta
    return [
        float(scores[k, top_word_indices(beta[k], top_m)].mean())
        for k in range(model.n_topics)
    ]


def model_coherence(model: StmModel, dtm: SparseDtm, top_m: int = 10) -> List[float]:
    """Semantic coherence of every topic."""
    beta = model.beta
    return [semantic_coherence(beta[k], dtm, top_m) for k in range(model.n_topics)]
