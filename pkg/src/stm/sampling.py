"""Posterior draws of topic prevalence."""

from typing import Optional, Sequence

import numpy as np

from src.stm.model import DocPosterior, softmax_prevalence


def covariance_factor(covariance: np.ndarray) -> np.ndarray:
    """Square-root factor L with L L' = covariance; negative eigenvalues become 0."""
    eigvals, eigvecs = np.linalg.eigh(0.5 * (covariance + covariance.T))
    return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def sample_eta(
    posterior: DocPosterior, n_draws: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw eta ~ Normal(eta_hat, hessian_inv); returns n_draws x (K-1)."""
    z = rng.standard_normal((n_draws, posterior.eta_hat.shape[0]))
    return posterior.eta_hat[None, :] + z @ covariance_factor(posterior.hessian_inv).T


def sample_theta(
    posterior: DocPosterior,
    n_draws: int,
    seed: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Draw prevalence vectors from the Laplace posterior.

    Args:
        posterior: The document posterior.
        n_draws: Number of draws.
        seed: Seed for a fresh generator (ignored when `rng` is given).
        rng: Generator to draw from.

    Returns:
        np.ndarray: n_draws x K simplex rows.

    Raises:
        ValueError: If n_draws < 1.
    """
    if n_draws < 1:
        raise ValueError("n_draws must be at least 1")
    rng = rng or np.random.default_rng(seed)
    return softmax_prevalence(sample_eta(posterior, n_draws, rng))


def sample_theta_matrix(posteriors: Sequence[DocPosterior], seed: int) -> np.ndarray:
    """One prevalence draw for every document (D x K), deterministic given seed."""
    rng = np.random.default_rng(seed)
    return np.vstack([sample_theta(p, 1, rng=rng)[0] for p in posteriors])
