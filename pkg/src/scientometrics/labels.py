"""Topic labeling support: top words, top documents, FREX words, keyword contrasts."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from src.corpus.dtm import Vocabulary
from src.scientometrics.prevalence import default_labels
from src.selection.metrics import frex_scores, top_word_indices
from src.stm.model import StmModel

logger = logging.getLogger(__name__)


@dataclass
class RankedItems:
    """Top items of one topic with their scores."""

    items: List[str]
    scores: List[float]
    truncated: bool = False


def top_words(
    model: StmModel, vocabulary: Vocabulary, k: int, m: int = 10
) -> RankedItems:
    """Most probable words of topic k; ties go to the earlier token.

    Raises:
        ValueError: If the vocabulary does not match the model.
    """
    if len(vocabulary.tokens) != model.vocab_size:
        raise ValueError(
            f"Vocabulary has {len(vocabulary.tokens)} tokens, "
            f"model has {model.vocab_size}"
        )
    beta = model.beta[k]
    truncated = m > model.vocab_size
    if truncated:
        logger.warning(
            f"Requested {m} words but the vocabulary has {model.vocab_size}"
        )
    order = top_word_indices(beta, m)
    return RankedItems(
        [vocabulary.tokens[v] for v in order],
        [float(beta[v]) for v in order],
        truncated,
    )


def top_documents(
    theta: np.ndarray, doc_ids: Sequence[str], k: int, n: int = 5
) -> RankedItems:
    """Documents with the largest prevalence of topic k; ties go to the smaller id."""
    ids = [str(i) for i in doc_ids]
    _, id_rank = np.unique(ids, return_inverse=True)
    order = np.lexsort((id_rank, -theta[:, k]))[:n]
    return RankedItems(
        [str(ids[d]) for d in order],
        [float(theta[d, k]) for d in order],
        n > len(ids),
    )


def frex_words(
    model: StmModel, vocabulary: Vocabulary, k: int, m: int = 10, omega: float = 0.7
) -> RankedItems:
    """Words of topic k ranked by FREX score."""
    scores = frex_scores(model, omega)[k]
    order = top_word_indices(scores, m)
    return RankedItems(
        [vocabulary.tokens[v] for v in order],
        [float(scores[v]) for v in order],
        m > len(scores),
    )


def label_table(
    model: StmModel,
    vocabulary: Vocabulary,
    m: int = 10,
    omega: float = 0.7,
    labels: Optional[Sequence[str]] = None,
) -> pd.DataFrame:
    """Top-probability and top-FREX words of every topic."""
    labels = list(labels) if labels is not None else default_labels(model.n_topics)
    rows = []
    for k in range(model.n_topics):
        rows.append(
            {
                "topic": k,
                "label": labels[k],
                "prob_words": ", ".join(top_words(model, vocabulary, k, m).items),
                "frex_words": ", ".join(
                    frex_words(model, vocabulary, k, m, omega).items
                ),
            }
        )
    return pd.DataFrame(rows, columns=["topic", "label", "prob_words", "frex_words"])


def word_set_contrast(
    model: StmModel,
    vocabulary: Vocabulary,
    positive: Sequence[str],
    negative: Sequence[str],
    labels: Optional[Sequence[str]] = None,
) -> pd.DataFrame:
    """Per topic, mass on the positive keywords minus mass on the negative ones.

    Keywords missing from the vocabulary are ignored with a warning. Rows are
    sorted by contrast, largest first.
    """
    labels = list(labels) if labels is not None else default_labels(model.n_topics)
    index = vocabulary.index()

    def columns(words: Sequence[str]) -> List[int]:
        missing = [w for w in words if w not in index]
        if missing:
            logger.warning(f"Keywords not in vocabulary: {missing}")
        return sorted({index[w] for w in words if w in index})

    beta = model.beta
    positive_mass = beta[:, columns(positive)].sum(axis=1)
    negative_mass = beta[:, columns(negative)].sum(axis=1)
    frame = pd.DataFrame(
        {
            "topic": np.arange(model.n_topics),
            "label": labels,
            "positive_mass": positive_mass,
            "negative_mass": negative_mass,
            "contrast": positive_mass - negative_mass,
        }
    )
    frame = frame.sort_values(
        ["contrast", "topic"], ascending=[False, True], kind="mergesort"
    )
    return frame.reset_index(drop=True)
