"""Structural topic model parameters and per-document posteriors."""

import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np
from scipy.special import log_softmax, softmax

from src.common.config import InitMethod
from src.common.errors import ScitopicsError
from src.corpus.dtm import SparseDtm

logger = logging.getLogger(__name__)


def softmax_prevalence(eta: np.ndarray) -> np.ndarray:
    """Map unnormalized log-prevalence to the simplex.

    The last topic's coordinate is pinned at 0. Works row-wise on 2-D input.

    Args:
        eta: Array with K-1 entries in the last axis.

    Returns:
        np.ndarray: Array with K entries in the last axis, summing to 1.
    """
    eta = np.asarray(eta, dtype=float)
    padded = np.concatenate([eta, np.zeros(eta.shape[:-1] + (1,))], axis=-1)
    return softmax(padded, axis=-1)


@dataclass(frozen=True)
class StmModel:
    """Global parameters of the topic model.

    Attributes:
        gamma: p x (K-1) prevalence coefficients.
        sigma: (K-1) x (K-1) prevalence covariance.
        m: Baseline log word frequencies (V).
        kappa: K x V topic deviations; beta_k = softmax(m + kappa_k).
        gamma_ridge_variance: Prior variance of gamma.
        kappa_penalty: Quadratic penalty weight on kappa.
        sigma_shrinkage: Weight pulling sigma toward its diagonal.
        seed: Seed the model was initialized with.
        column_labels: Covariate labels for the rows of gamma.
    """

    gamma: np.ndarray
    sigma: np.ndarray
    m: np.ndarray
    kappa: np.ndarray
    gamma_ridge_variance: float = 1.0
    kappa_penalty: float = 1.0
    sigma_shrinkage: float = 0.5
    seed: int = 0
    column_labels: List[str] = field(default_factory=list)

    @property
    def n_topics(self) -> int:
        return self.kappa.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.kappa.shape[1]

    @property
    def n_covariates(self) -> int:
        return self.gamma.shape[0]

    @property
    def log_beta(self) -> np.ndarray:
        return log_softmax(self.m[None, :] + self.kappa, axis=1)

    @property
    def beta(self) -> np.ndarray:
        return softmax(self.m[None, :] + self.kappa, axis=1)

    def with_params(self, **changes: object) -> "StmModel":
        return replace(self, **changes)


@dataclass(frozen=True)
class DocPosterior:
    """Laplace approximation to one document's log-prevalence posterior."""

    eta_hat: np.ndarray
    hessian_inv: np.ndarray
    theta_map: np.ndarray

    @classmethod
    def from_mode(cls, eta_hat: np.ndarray, hessian_inv: np.ndarray) -> "DocPosterior":
        return cls(
            eta_hat=eta_hat,
            hessian_inv=hessian_inv,
            theta_map=softmax_prevalence(eta_hat),
        )


def theta_matrix(posteriors: Sequence[DocPosterior]) -> np.ndarray:
    """Stack MAP prevalences into a D x K matrix."""
    return np.vstack([p.theta_map for p in posteriors])


def retained_theta(
    theta: np.ndarray, discarded: Sequence[int], renormalize: bool = False
) -> np.ndarray:
    """Drop topic columns, optionally renormalizing rows over the kept topics.

    Args:
        theta: D x K prevalence matrix.
        discarded: Topic indices to drop.
        renormalize: Rescale rows to sum to 1.

    Returns:
        np.ndarray: D x (K - len(discarded)) matrix.
    """
    keep = [k for k in range(theta.shape[1]) if k not in set(discarded)]
    out = theta[:, keep]
    if renormalize:
        out = out / out.sum(axis=1, keepdims=True)
    return out


def _document_deviations(
    dtm: SparseDtm,
    n_topics: int,
    rng: np.random.Generator,
    word_freq: np.ndarray,
    n_documents: int,
) -> np.ndarray:
    """Topic deviations seeded from the counts of randomly drawn documents.

    Each topic pools `n_documents` rows; V pseudo-tokens spread by corpus
    frequency keep every word's probability positive.
    """
    n_docs, vocab_size = dtm.matrix.shape
    replace = n_topics * n_documents > n_docs
    picks = rng.choice(n_docs, size=(n_topics, n_documents), replace=replace)
    pseudo = vocab_size * word_freq
    deviations = np.empty((n_topics, vocab_size))
    for k in range(n_topics):
        counts = np.asarray(dtm.matrix[picks[k]].sum(axis=0), dtype=float).ravel()
        beta = (counts + pseudo) / (counts.sum() + vocab_size)
        deviations[k] = np.log(beta) - np.log(word_freq)
    return deviations


def init_model(
    dtm: SparseDtm,
    n_covariates: int,
    n_topics: int,
    seed: int,
    gamma_ridge_variance: float = 1.0,
    kappa_penalty_scale: float = 0.01,
    sigma_shrinkage: float = 0.5,
    init_sigma: float = 0.2,
    init_kappa_sd: float = 0.5,
    column_labels: Optional[Sequence[str]] = None,
    init_method: InitMethod = InitMethod.DOCUMENTS,
    init_documents: int = 5,
) -> StmModel:
    """Initialize model parameters.

    m is the log of the normalized corpus word frequencies, gamma is zero and
    sigma is init_sigma * I. With the documents method each row of kappa is
    seeded from a few randomly drawn documents; with random it is Gaussian
    noise. Both draws come from `seed`.

    Args:
        dtm: Document-term matrix.
        n_covariates: Number of design columns p.
        n_topics: K.
        seed: Random seed.
        gamma_ridge_variance: Prior variance of gamma.
        kappa_penalty_scale: Penalty per token per word; the weight is
            scale * tokens / V.
        sigma_shrinkage: Diagonal shrinkage weight.
        init_sigma: Initial covariance scale.
        init_kappa_sd: Standard deviation of random initial deviations.
        column_labels: Covariate labels.
        init_method: How kappa is initialized.
        init_documents: Documents pooled per topic by the documents method.

    Returns:
        StmModel: The initial model.

    Raises:
        ScitopicsError: If K < 2 or K > V.
    """
    vocab_size = dtm.n_tokens
    if n_topics < 2:
        raise ScitopicsError(f"Need at least 2 topics, got {n_topics}")
    if n_topics > vocab_size:
        raise ScitopicsError(f"K={n_topics} exceeds vocabulary size {vocab_size}")

    word_counts = np.asarray(dtm.matrix.sum(axis=0), dtype=float).ravel()
    if np.any(word_counts <= 0):
        raise ScitopicsError("Every vocabulary column needs a positive corpus count")
    total = word_counts.sum()
    word_freq = word_counts / total
    m = np.log(word_freq)
    rng = np.random.default_rng(seed)
    if InitMethod(init_method) == InitMethod.DOCUMENTS:
        kappa = _document_deviations(dtm, n_topics, rng, word_freq, init_documents)
    else:
        kappa = rng.normal(0.0, init_kappa_sd, size=(n_topics, vocab_size))
    return StmModel(
        gamma=np.zeros((n_covariates, n_topics - 1)),
        sigma=np.eye(n_topics - 1) * init_sigma,
        m=m,
        kappa=kappa,
        gamma_ridge_variance=gamma_ridge_variance,
        kappa_penalty=kappa_penalty_scale * total / vocab_size,
        sigma_shrinkage=sigma_shrinkage,
        seed=seed,
        column_labels=list(column_labels or []),
    )
