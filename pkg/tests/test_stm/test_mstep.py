"""Tests for the global parameter updates."""

import numpy as np
import pytest

from src.stm.bound import elbo
from src.stm.mstep import (
    expected_topic_word_counts,
    m_step,
    sigma_target,
    update_gamma,
    update_kappa,
    update_sigma,
)


@pytest.mark.unit
def test_update_gamma_approaches_least_squares():
    """With a flat prior the coefficients solve the least-squares problem."""
    rng = np.random.default_rng(0)
    x = rng.normal(size=(200, 3))
    gamma_true = np.array([[0.5, -1.0], [2.0, 0.0], [0.0, 0.3]])
    eta = x @ gamma_true
    gamma = update_gamma(
        eta, x, np.array([[1.0, 0.2], [0.2, 0.5]]), ridge_variance=1e10
    )
    np.testing.assert_allclose(gamma, gamma_true, atol=1e-6)


@pytest.mark.unit
def test_update_gamma_shrinks():
    """A tight prior pulls coefficients toward zero."""
    rng = np.random.default_rng(1)
    x = rng.normal(size=(50, 2))
    eta = x @ np.array([[1.0], [1.0]])
    loose = update_gamma(eta, x, np.eye(1), ridge_variance=100.0)
    tight = update_gamma(eta, x, np.eye(1), ridge_variance=1e-3)
    assert np.abs(tight).sum() < np.abs(loose).sum()


@pytest.mark.unit
def test_sigma_target_is_shrunk_moment():
    """Full shrinkage keeps only the diagonal of the second moment."""
    residuals = np.array([[1.0, 1.0], [-1.0, -1.0]])
    hessian_invs = np.zeros((2, 2, 2))
    target = sigma_target(residuals, hessian_invs, shrinkage=1.0)
    np.testing.assert_allclose(target, np.eye(2), atol=1e-5)
    assert np.all(np.linalg.eigvalsh(sigma_target(residuals, hessian_invs, 0.0)) > 0)


@pytest.mark.unit
def test_update_sigma_moves_toward_moment():
    """The accepted step lands on the target when it improves the objective."""
    residuals = np.random.default_rng(2).normal(0.0, 2.0, size=(500, 2))
    sigma, moved = update_sigma(np.eye(2) * 0.1, residuals, np.zeros((500, 2, 2)), 0.0)
    assert moved
    np.testing.assert_allclose(np.diag(sigma), [4.0, 4.0], rtol=0.2)


@pytest.mark.unit
def test_update_kappa_fits_expected_counts():
    """Deviations move the topic rows toward the expected word frequencies."""
    counts = np.array([[90.0, 5.0, 5.0], [5.0, 5.0, 90.0]])
    m = np.log(np.full(3, 1 / 3))
    kappa = update_kappa(counts, m, np.zeros((2, 3)), penalty=1e-6)
    beta = np.exp(m + kappa)
    beta /= beta.sum(axis=1, keepdims=True)
    np.testing.assert_allclose(
        beta, counts / counts.sum(axis=1, keepdims=True), atol=1e-3
    )


@pytest.mark.unit
def test_expected_counts_preserve_totals(simulated_study, fitted_study):
    """Expected topic-word counts sum to the observed word totals."""
    expected = expected_topic_word_counts(
        fitted_study.posteriors, simulated_study.dtm, fitted_study.model.log_beta
    )
    observed = np.asarray(simulated_study.dtm.matrix.sum(axis=0)).ravel()
    np.testing.assert_allclose(expected.sum(axis=0), observed)


@pytest.mark.unit
def test_m_step_does_not_lower_bound(simulated_study, fitted_study):
    """A safeguarded update never decreases the bound."""
    dtm, design = simulated_study.dtm, simulated_study.design
    before = elbo(fitted_study.model, fitted_study.posteriors, dtm, design)
    updated = m_step(fitted_study.posteriors, dtm, design, fitted_study.model)
    assert elbo(updated, fitted_study.posteriors, dtm, design) >= before


@pytest.mark.unit
def test_m_step_rejects_misaligned_posteriors(simulated_study, fitted_study):
    """Posterior count must match the matrix rows."""
    with pytest.raises(ValueError):
        m_step(
            fitted_study.posteriors[:-1],
            simulated_study.dtm,
            simulated_study.design,
            fitted_study.model,
        )
