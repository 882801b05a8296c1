"""Corpus processing for scitopics.

Turns raw article records into a pruned vocabulary and a sparse document-term
matrix.
"""

from src.corpus.collocations import (
    Collocation,
    CollocationTable,
    Detector,
    apply_collocations,
    detect_collocations,
)
from src.corpus.documents import (
    Document,
    GenderFlag,
    load_corpus,
    load_lemma_table,
    write_corpus,
)
from src.corpus.dtm import (
    SparseDtm,
    Vocabulary,
    build_dtm,
    prune_vocabulary,
    vocabulary_report,
)
from src.corpus.pipeline import PreprocessReport, PreprocessResult, preprocess_corpus
from src.corpus.text import filter_pos, lemmatize, normalize_text, remove_stopwords

__all__ = [
    "Collocation",
    "CollocationTable",
    "Detector",
    "Document",
    "GenderFlag",
    "PreprocessReport",
    "PreprocessResult",
    "SparseDtm",
    "Vocabulary",
    "apply_collocations",
    "build_dtm",
    "detect_collocations",
    "filter_pos",
    "lemmatize",
    "load_corpus",
    "load_lemma_table",
    "normalize_text",
    "preprocess_corpus",
    "prune_vocabulary",
    "remove_stopwords",
    "vocabulary_report",
    "write_corpus",
]
