"""Tests for the variational EM driver."""

import numpy as np
import pytest

from src.common.errors import ScitopicsError
from src.covariates.design import DesignMatrix
from src.covariates.splines import make_spline_spec
from src.stm.bound import document_bounds, elbo, prior_terms
from src.stm.fit import align_topics, fit, mean_theta_correlation, total_variation
from src.stm.model import theta_matrix
from tests.test_utils.data_generators import (
    block_corpus,
    random_simplex,
    small_fit_settings,
)


def _intercept_design(doc_ids):
    return DesignMatrix(
        rows=np.ones((len(doc_ids), 1)),
        column_labels=["intercept"],
        spline_spec=make_spline_spec([2000, 2001], degree=1, df=2),
        journals=[],
        doc_ids=list(doc_ids),
    )


@pytest.mark.unit
def test_bound_trace_is_monotone(fitted_study):
    """The safeguarded bound never decreases."""
    trace = fitted_study.bound_trace
    assert len(trace) == fitted_study.n_iterations
    for previous, current in zip(trace, trace[1:]):
        assert current >= previous - 1e-8


@pytest.mark.unit
def test_fit_outputs(simulated_study, fitted_study):
    """One posterior per row and valid probability rows."""
    model = fitted_study.model
    assert len(fitted_study.posteriors) == simulated_study.dtm.n_docs
    np.testing.assert_allclose(model.beta.sum(axis=1), 1.0)
    np.testing.assert_allclose(theta_matrix(fitted_study.posteriors).sum(axis=1), 1.0)
    assert model.gamma.shape == (simulated_study.design.n_covariates, 2)
    assert np.all(np.linalg.eigvalsh(model.sigma) > 0)
    assert model.column_labels == simulated_study.design.column_labels


@pytest.mark.unit
def test_elbo_decomposition(simulated_study, fitted_study):
    """The bound is the sum of document terms plus the prior terms."""
    model, posts = fitted_study.model, fitted_study.posteriors
    terms = document_bounds(model, posts, simulated_study.dtm, simulated_study.design)
    assert np.all(np.isfinite(terms))
    total = elbo(model, posts, simulated_study.dtm, simulated_study.design)
    assert total == pytest.approx(terms.sum() + prior_terms(model))
    assert fitted_study.bound_trace[-1] == pytest.approx(total)


@pytest.mark.unit
def test_fit_is_deterministic(simulated_study):
    """Same seed, same model."""
    settings = small_fit_settings(max_iterations=3)
    a = fit(simulated_study.dtm, simulated_study.design, 3, settings, seed=1)
    b = fit(simulated_study.dtm, simulated_study.design, 3, settings, seed=1)
    np.testing.assert_array_equal(a.model.kappa, b.model.kappa)
    assert a.bound_trace == b.bound_trace


@pytest.mark.unit
def test_separates_disjoint_blocks():
    """Documents drawn from two disjoint word blocks land in separate topics."""
    dtm, membership = block_corpus(n_docs=60, block_size=5, doc_length=30, seed=0)
    settings = small_fit_settings(n_topics=2, max_iterations=60, tolerance=1e-8)
    result = fit(dtm, _intercept_design(dtm.doc_ids), 2, settings, seed=3)

    block0_topic = int(np.argmax(result.model.beta[:, :5].sum(axis=1)))
    topic_for_block = np.where(membership == 0, block0_topic, 1 - block0_topic)
    theta = theta_matrix(result.posteriors)
    mass = theta[np.arange(dtm.n_docs), topic_for_block]
    assert mass.mean() >= 0.9


@pytest.mark.unit
def test_convergence_waits_for_min_iterations(simulated_study):
    """A loose tolerance cannot stop the loop before the minimum iteration count."""
    settings = small_fit_settings(max_iterations=10, min_iterations=4, tolerance=0.5)
    result = fit(simulated_study.dtm, simulated_study.design, 3, settings, seed=2)
    assert result.converged
    assert result.n_iterations == 4
    assert len(result.bound_trace) == 4


@pytest.mark.unit
def test_misaligned_design(simulated_study):
    """Design rows must match the matrix rows."""
    design = _intercept_design(simulated_study.dtm.doc_ids[:-1])
    with pytest.raises(ScitopicsError):
        fit(simulated_study.dtm, design, 3, small_fit_settings(), seed=0)


@pytest.mark.unit
def test_align_topics_recovers_permutation():
    """Greedy matching undoes a topic permutation."""
    beta = random_simplex(4, 30, seed=2, concentration=0.2)
    perm = np.array([2, 0, 3, 1])
    fitted = beta[np.argsort(perm)]
    recovered = align_topics(fitted, beta)
    np.testing.assert_allclose(
        total_variation(fitted[recovered], beta), 0.0, atol=1e-12
    )

    theta = random_simplex(10, 4, seed=3)
    shuffled = theta[:, np.argsort(recovered)]
    assert mean_theta_correlation(shuffled, theta, recovered) == pytest.approx(1.0)
