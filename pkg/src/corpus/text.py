"""Token-level text processing."""

import re
from typing import List, Mapping, Optional, Sequence

from sklearn.feature_extraction.text import ENGLISH_STOP_WORDS

from src.common.errors import PosAlignmentError

WORD_PATTERN = re.compile(r"[^\W\d_]+")
KEPT_TAGS = frozenset({"NOUN", "PROPN"})
STOPWORDS = frozenset(ENGLISH_STOP_WORDS)


def normalize_text(raw: str) -> List[str]:
    """Lowercase and tokenize text.

    Numbers, punctuation, one-letter words and extra whitespace are removed.

    Args:
        raw: Any text, possibly empty.

    Returns:
        List[str]: The normalized tokens.
    """
    return [token for token in WORD_PATTERN.findall(raw.lower()) if len(token) > 1]


def lemmatize(tokens: Sequence[str], lemma_table: Mapping[str, str]) -> List[str]:
    """Map tokens to their roots, leaving unknown tokens unchanged."""
    return [lemma_table.get(token, token) for token in tokens]


def remove_stopwords(tokens: Sequence[str]) -> List[str]:
    """Drop English stopwords."""
    return [token for token in tokens if token not in STOPWORDS]


def filter_pos(tokens: Sequence[str], pos_tags: Optional[Sequence[str]]) -> List[str]:
    """Keep nouns, proper nouns and collocation tokens.

    Args:
        tokens: The tokens.
        pos_tags: Universal tags aligned with `tokens`, or None to keep everything.

    Returns:
        List[str]: The retained tokens.

    Raises:
        PosAlignmentError: If tags and tokens differ in length.
    """
    if pos_tags is None:
        return list(tokens)
    if len(pos_tags) != len(tokens):
        raise PosAlignmentError(f"{len(pos_tags)} tags for {len(tokens)} tokens")
    return [
        token
        for token, tag in zip(tokens, pos_tags)
        if tag in KEPT_TAGS or "_" in token
    ]
