"""Test utilities for scitopics tests."""

from tests.test_utils.data_generators import (
    JOURNALS,
    THEMES,
    block_corpus,
    generate_random_abstract,
    generate_random_document,
    generate_random_documents,
    make_document,
    make_dtm,
    make_model,
    make_posteriors,
    random_simplex,
    small_fit_settings,
    small_simulation_settings,
    small_study,
)
