"""Collocation detection and replacement.

Two detectors feed one table: contiguous runs between stopwords scored by corpus
count, and part-of-speech patterns (adjective/noun/preposition sequences) when
tags are available.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from src.corpus.text import STOPWORDS

logger = logging.getLogger(__name__)

Phrase = Tuple[str, ...]

# Coarse classes for pattern matching: A adjective, N noun, P adposition.
TAG_CLASSES = {"ADJ": "A", "NOUN": "N", "PROPN": "N", "ADP": "P"}
BIGRAM_PATTERNS = frozenset({"AN", "NN"})
TRIGRAM_PATTERNS = frozenset({"AAN", "ANN", "NAN", "NNN", "NPN"})


class Detector(str, Enum):
    """Collocation detector."""

    FREQUENCY_RAKE = "frequency-rake"
    POS_PATTERN = "pos-pattern"


@dataclass(frozen=True)
class Collocation:
    """A retained phrase."""

    words: Phrase
    count: int
    detector: Detector

    @property
    def joined(self) -> str:
        return "_".join(self.words)


@dataclass
class CollocationTable:
    """Retained collocations, ordered by count then lexicographically."""

    phrases: List[Collocation] = field(default_factory=list)
    pos_skipped: bool = False

    def __len__(self) -> int:
        return len(self.phrases)

    def lookup(self) -> Dict[Phrase, Collocation]:
        return {c.words: c for c in self.phrases}

    def counts_by_detector(self) -> Dict[str, int]:
        counts = Counter(c.detector.value for c in self.phrases)
        return {d.value: counts.get(d.value, 0) for d in Detector}


def _count_runs(corpus: Iterable[Sequence[str]]) -> Counter:
    counts: Counter = Counter()
    for tokens in corpus:
        run: List[str] = []
        for token in list(tokens) + [""]:
            if token and token not in STOPWORDS:
                run.append(token)
                continue
            for n in (2, 3):
                for i in range(len(run) - n + 1):
                    counts[tuple(run[i : i + n])] += 1
            run = []
    return counts


def _count_patterns(
    corpus: Sequence[Sequence[str]], pos_tags: Sequence[Optional[Sequence[str]]]
) -> Counter:
    counts: Counter = Counter()
    for tokens, tags in zip(corpus, pos_tags):
        if tags is None:
            continue
        classes = "".join(TAG_CLASSES.get(tag, "x") for tag in tags)
        for n, patterns in ((2, BIGRAM_PATTERNS), (3, TRIGRAM_PATTERNS)):
            for i in range(len(tokens) - n + 1):
                if classes[i : i + n] in patterns:
                    counts[tuple(tokens[i : i + n])] += 1
    return counts


def detect_collocations(
    corpus: Sequence[Sequence[str]],
    pos_tags: Optional[Sequence[Optional[Sequence[str]]]] = None,
    min_bigram: int = 100,
    min_trigram: int = 50,
) -> CollocationTable:
    """Find two- and three-word collocations.

    Args:
        corpus: Tokenized documents.
        pos_tags: Per-document tag sequences aligned with `corpus` (entries may
            be None).
        min_bigram: Minimum corpus count for two-word phrases.
        min_trigram: Minimum corpus count for three-word phrases.

    Returns:
        CollocationTable: Phrases whose count reaches the threshold for their length.

    Raises:
        ValueError: If the corpus is empty or a threshold is below 1.
    """
    if not corpus:
        raise ValueError("Cannot detect collocations in an empty corpus")
    if min_bigram < 1 or min_trigram < 1:
        raise ValueError("Collocation thresholds must be at least 1")

    thresholds = {2: min_bigram, 3: min_trigram}
    found: Dict[Phrase, Collocation] = {}

    for phrase, count in _count_runs(corpus).items():
        if count >= thresholds[len(phrase)]:
            found[phrase] = Collocation(phrase, count, Detector.FREQUENCY_RAKE)

    pos_skipped = pos_tags is None or all(tags is None for tags in pos_tags)
    if pos_skipped:
        logger.warning(
            "No part-of-speech tags supplied; pattern-based collocations skipped"
        )
    else:
        for phrase, count in _count_patterns(corpus, pos_tags).items():
            if count < thresholds[len(phrase)]:
                continue
            current = found.get(phrase)
            if current is None or count > current.count:
                found[phrase] = Collocation(phrase, count, Detector.POS_PATTERN)

    phrases = sorted(found.values(), key=lambda c: (-c.count, c.words))
    logger.info(f"Detected {len(phrases)} collocations")
    return CollocationTable(phrases=phrases, pos_skipped=pos_skipped)


def collocation_spans(
    tokens: Sequence[str], table: CollocationTable
) -> List[Tuple[int, int]]:
    """Locate phrase occurrences, longest match first, scanning left to right.

    Returns:
        List[Tuple[int, int]]: (start, length) of every non-overlapping match.
    """
    known: Set[Phrase] = {c.words for c in table.phrases}
    if not known:
        return []
    lengths = sorted({len(p) for p in known}, reverse=True)
    spans: List[Tuple[int, int]] = []
    i = 0
    while i < len(tokens):
        for n in lengths:
            if tuple(tokens[i : i + n]) in known:
                spans.append((i, n))
                i += n
                break
        else:
            i += 1
    return spans


def apply_collocations(tokens: Sequence[str], table: CollocationTable) -> List[str]:
    """Replace phrase occurrences by underscore-joined tokens."""
    out: List[str] = []
    cursor = 0
    for start, n in collocation_spans(tokens, table):
        out.extend(tokens[cursor:start])
        out.append("_".join(tokens[start : start + n]))
        cursor = start + n
    out.extend(tokens[cursor:])
    return out
