"""Tests for test data generators."""

import numpy as np
import pytest

from tests.test_utils.data_generators import (
    block_corpus,
    generate_random_abstract,
    generate_random_documents,
    make_model,
    make_posteriors,
    random_simplex,
)


@pytest.mark.unit
def test_generate_random_abstract():
    """Test generate_random_abstract function."""
    rng = np.random.default_rng(0)
    abstract = generate_random_abstract(rng, length=25)
    assert isinstance(abstract, str)
    assert len(abstract.split()) == 25


@pytest.mark.unit
def test_generate_random_documents():
    """Test generate_random_documents function."""
    documents = generate_random_documents(20, seed=1)
    assert len(documents) == 20
    assert len({d.id for d in documents}) == 20
    assert documents[0].year == 1992
    assert documents[-1].year == 2021
    assert all(d.n_authors >= 1 for d in documents)

    # Same seed, same documents
    assert generate_random_documents(20, seed=1) == documents


@pytest.mark.unit
def test_make_model_reproduces_beta():
    """Test make_model function."""
    beta = np.array([[0.5, 0.3, 0.2], [0.1, 0.1, 0.8]])
    model = make_model(beta)
    np.testing.assert_allclose(model.beta, beta, atol=1e-12)


@pytest.mark.unit
def test_make_posteriors_reproduces_theta():
    """Test make_posteriors function."""
    theta = random_simplex(6, 4, seed=3)
    posteriors = make_posteriors(theta)
    np.testing.assert_allclose(
        np.vstack([p.theta_map for p in posteriors]), theta, atol=1e-12
    )


@pytest.mark.unit
def test_block_corpus():
    """Test block_corpus function."""
    dtm, membership = block_corpus(n_docs=10, block_size=3, doc_length=12)
    dense = dtm.matrix.toarray()
    assert dense.shape == (10, 6)
    assert np.all(dense.sum(axis=1) == 12)
    for row, block in zip(dense, membership):
        other = slice(3, 6) if block == 0 else slice(0, 3)
        assert row[other].sum() == 0
