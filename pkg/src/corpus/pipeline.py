"""End-to-end text processing: raw documents to vocabulary and count matrix."""

import logging
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from src.common.config import PreprocessSettings
from src.common.errors import PosAlignmentError
from src.common.parallel import map_ordered
from src.corpus.collocations import (
    CollocationTable,
    apply_collocations,
    collocation_spans,
    detect_collocations,
)
from src.corpus.documents import Document, validate_corpus
from src.corpus.dtm import SparseDtm, Vocabulary, build_dtm, prune_vocabulary
from src.corpus.text import filter_pos, lemmatize, normalize_text, remove_stopwords

logger = logging.getLogger(__name__)

Tagged = Tuple[List[str], Optional[List[str]]]


@dataclass
class PreprocessReport:
    """Summary of a preprocessing run."""

    n_documents_in: int
    n_documents_out: int
    dropped_ids: List[str]
    vocabulary_size: int
    n_tagged_documents: int
    pos_filter_relaxed: bool
    pos_collocations_skipped: bool
    stopwords_removed: bool
    collocations_by_detector: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class PreprocessResult:
    """Outputs of preprocess_corpus."""

    vocabulary: Vocabulary
    dtm: SparseDtm
    collocations: CollocationTable
    report: PreprocessReport


def _tokenize_document(doc: Document, lemma_table: Mapping[str, str]) -> Tagged:
    tokens = normalize_text(doc.text)
    tags: Optional[List[str]] = None
    if doc.pos_tags is not None:
        tagged_tokens = [t.lower() for t, _ in doc.pos_tags]
        if tagged_tokens != tokens:
            raise PosAlignmentError(
                f"Document {doc.id!r}: part-of-speech tokens do not reconstruct "
                "the normalized text"
            )
        tags = [tag.upper() for _, tag in doc.pos_tags]
    return lemmatize(tokens, lemma_table), tags


def _finalize_document(
    tagged: Tagged, table: CollocationTable, drop_stopwords: bool
) -> List[str]:
    tokens, tags = tagged
    spans = collocation_spans(tokens, table)
    joined = apply_collocations(tokens, table)
    if tags is None:
        return remove_stopwords(joined) if drop_stopwords else joined

    # A joined phrase takes the tag of its last word.
    merged_tags: List[str] = []
    cursor = 0
    for start, n in spans:
        merged_tags.extend(tags[cursor:start])
        merged_tags.append(tags[start + n - 1])
        cursor = start + n
    merged_tags.extend(tags[cursor:])
    return filter_pos(joined, merged_tags)


def preprocess_corpus(
    documents: Sequence[Document],
    lemma_table: Mapping[str, str],
    settings: PreprocessSettings,
    workers: int = 1,
) -> PreprocessResult:
    """Normalize, lemmatize, join collocations, filter nouns, prune and count.

    Args:
        documents: The corpus.
        lemma_table: token -> root.
        settings: Thresholds.
        workers: Worker processes for the per-document steps.

    Returns:
        PreprocessResult: Vocabulary, matrix, collocation table and report.
    """
    validate_corpus(documents, settings.year_min, settings.year_max)
    logger.info(f"Preprocessing {len(documents)} documents")

    tokenize = partial(_tokenize_document, lemma_table=dict(lemma_table))
    tagged = map_ordered(tokenize, documents, workers)
    n_tagged = sum(1 for _, tags in tagged if tags is not None)
    if n_tagged < len(documents):
        logger.warning(
            f"{len(documents) - n_tagged} documents lack part-of-speech tags; "
            "noun filter relaxed for them"
        )

    table = detect_collocations(
        [tokens for tokens, _ in tagged],
        [tags for _, tags in tagged],
        min_bigram=settings.min_bigram,
        min_trigram=settings.min_trigram,
    )

    finalize = partial(
        _finalize_document, table=table, drop_stopwords=settings.drop_stopwords
    )
    corpus = map_ordered(finalize, tagged, workers)
    vocabulary = prune_vocabulary(corpus, settings.prune_lower, settings.prune_upper)
    dtm = build_dtm(corpus, vocabulary, [doc.id for doc in documents])

    report = PreprocessReport(
        n_documents_in=len(documents),
        n_documents_out=dtm.n_docs,
        dropped_ids=list(dtm.dropped_ids),
        vocabulary_size=len(vocabulary),
        n_tagged_documents=n_tagged,
        pos_filter_relaxed=n_tagged < len(documents),
        pos_collocations_skipped=table.pos_skipped,
        stopwords_removed=settings.drop_stopwords and n_tagged < len(documents),
        collocations_by_detector=table.counts_by_detector(),
    )
    logger.info(
        f"Preprocessed corpus: {dtm.n_docs} x {len(vocabulary)} matrix, "
        f"{dtm.matrix.nnz} entries"
    )
    return PreprocessResult(
        vocabulary=vocabulary, dtm=dtm, collocations=table, report=report
    )
