"""Approximate evidence lower bound under the Laplace posterior."""

from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from src.corpus.dtm import SparseDtm
from src.covariates.design import DesignMatrix
from src.stm.model import DocPosterior, StmModel


def document_bounds(
    model: StmModel,
    posteriors: Sequence[DocPosterior],
    dtm: SparseDtm,
    design: DesignMatrix,
) -> np.ndarray:
    """Per-document bound terms.

    For each document:
        sum_v c_v log(theta_hat' beta_v)
        - 1/2 r' Sigma^-1 r - 1/2 tr(Sigma^-1 nu) - 1/2 log det Sigma
        + 1/2 log det nu + (K - 1) / 2
    with r = eta_hat - x_d gamma and nu the Laplace covariance.

    Returns:
        np.ndarray: One value per document.
    """
    log_beta = model.log_beta
    sigma_inv = np.linalg.inv(model.sigma)
    _, logdet_sigma = np.linalg.slogdet(model.sigma)
    mu = design.rows @ model.gamma
    dim = model.n_topics - 1

    out = np.empty(dtm.n_docs)
    for d, post in enumerate(posteriors):
        words, counts = dtm.row(d)
        log_theta = np.log(post.theta_map)
        log_p = logsumexp(log_theta[:, None] + log_beta[:, words], axis=0)
        r = post.eta_hat - mu[d]
        _, logdet_nu = np.linalg.slogdet(post.hessian_inv)
        out[d] = (
            counts @ log_p
            - 0.5 * r @ sigma_inv @ r
            - 0.5 * np.sum(sigma_inv * post.hessian_inv)
            - 0.5 * logdet_sigma
            + 0.5 * logdet_nu
            + 0.5 * dim
        )
    return out


def prior_terms(model: StmModel) -> float:
    """Ridge prior on gamma and quadratic penalty on kappa."""
    gamma_term = -0.5 / model.gamma_ridge_variance * np.sum(model.gamma**2)
    kappa_term = -0.5 * model.kappa_penalty * np.sum(model.kappa**2)
    return float(gamma_term + kappa_term)


def elbo(
    model: StmModel,
    posteriors: Sequence[DocPosterior],
    dtm: SparseDtm,
    design: DesignMatrix,
) -> float:
    """Total bound: per-document terms plus prior terms."""
    documents = float(np.sum(document_bounds(model, posteriors, dtm, design)))
    return documents + prior_terms(model)
