"""Global parameter updates."""

import logging
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import log_softmax

from src.common.errors import SingularSystemError
from src.corpus.dtm import SparseDtm
from src.covariates.design import DesignMatrix
from src.stm.bound import elbo
from src.stm.estep import responsibilities
from src.stm.model import DocPosterior, StmModel

logger = logging.getLogger(__name__)

SIGMA_JITTER = 1e-6
MAX_SIGMA_HALVINGS = 5


def update_gamma(
    eta_hat: np.ndarray, x: np.ndarray, sigma: np.ndarray, ridge_variance: float
) -> np.ndarray:
    """Maximize the prevalence regression objective with a ridge prior.

    Solves (X'X) gamma + (1/s) gamma Sigma = X'H by rotating into Sigma's
    eigenbasis, where every column becomes an ordinary ridge problem.

    Args:
        eta_hat: D x (K-1) posterior modes H.
        x: D x p design rows.
        sigma: Current covariance.
        ridge_variance: Prior variance s.

    Returns:
        np.ndarray: p x (K-1) coefficients.

    Raises:
        SingularSystemError: If a rotated system is singular.
    """
    eigvals, eigvecs = np.linalg.eigh(sigma)
    xtx = x.T @ x
    rhs = x.T @ eta_hat @ eigvecs
    rotated = np.empty_like(rhs)
    for j, lam in enumerate(eigvals):
        system = xtx + (lam / ridge_variance) * np.eye(xtx.shape[0])
        try:
            rotated[:, j] = np.linalg.solve(system, rhs[:, j])
        except np.linalg.LinAlgError as e:
            raise SingularSystemError(
                f"Prevalence regression system {j} is singular"
            ) from e
        if not np.all(np.isfinite(rotated[:, j])):
            raise SingularSystemError(
                f"Prevalence regression system {j} gave non-finite coefficients"
            )
    return rotated @ eigvecs.T


def sigma_target(
    residuals: np.ndarray, hessian_invs: np.ndarray, shrinkage: float
) -> np.ndarray:
    """Regularized second moment of residuals plus mean posterior covariance.

    Args:
        residuals: D x (K-1) values eta_hat - x gamma.
        hessian_invs: D x (K-1) x (K-1) posterior covariances.
        shrinkage: Weight on the diagonal target.

    Returns:
        np.ndarray: Positive definite covariance.
    """
    n_docs = residuals.shape[0]
    moment = (residuals.T @ residuals + hessian_invs.sum(axis=0)) / n_docs
    shrunk = (1.0 - shrinkage) * moment + shrinkage * np.diag(np.diag(moment))
    shrunk = 0.5 * (shrunk + shrunk.T)
    return shrunk + SIGMA_JITTER * np.eye(shrunk.shape[0])


def sigma_objective(sigma: np.ndarray, moment: np.ndarray, n_docs: int) -> float:
    """Sigma-dependent part of the bound: -D/2 (log det Sigma + tr(Sigma^-1 S))."""
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        return -np.inf
    return float(-0.5 * n_docs * (logdet + np.trace(np.linalg.solve(sigma, moment))))


def update_sigma(
    sigma_old: np.ndarray,
    residuals: np.ndarray,
    hessian_invs: np.ndarray,
    shrinkage: float,
) -> Tuple[np.ndarray, bool]:
    """Move sigma toward its shrunk target without lowering the bound.

    Tries the full step, then up to five halvings along the segment from the
    old value; keeps the old value if none improves.

    Returns:
        Tuple of (new sigma, whether a step was accepted).
    """
    n_docs = residuals.shape[0]
    moment = (residuals.T @ residuals + hessian_invs.sum(axis=0)) / n_docs
    target = sigma_target(residuals, hessian_invs, shrinkage)
    base = sigma_objective(sigma_old, moment, n_docs)
    t = 1.0
    for _ in range(MAX_SIGMA_HALVINGS + 1):
        candidate = (1.0 - t) * sigma_old + t * target
        if sigma_objective(candidate, moment, n_docs) >= base:
            return candidate, True
        t *= 0.5
    logger.warning("Covariance update rejected: no step improved the bound")
    return sigma_old, False


def expected_topic_word_counts(
    posteriors: Sequence[DocPosterior], dtm: SparseDtm, log_beta: np.ndarray
) -> np.ndarray:
    """K x V expected counts sum_d c_dv phi_dvk."""
    n_topics, vocab_size = log_beta.shape
    counts = np.zeros((n_topics, vocab_size))
    for d, post in enumerate(posteriors):
        words, c = dtm.row(d)
        phi = responsibilities(post.eta_hat, words, log_beta)
        counts[:, words] += (phi * c[:, None]).T
    return counts


def _kappa_objective(
    kappa_k: np.ndarray, n_k: np.ndarray, m: np.ndarray, penalty: float
) -> Tuple[float, np.ndarray]:
    log_beta = log_softmax(m + kappa_k)
    total = n_k.sum()
    value = n_k @ log_beta - 0.5 * penalty * kappa_k @ kappa_k
    grad = n_k - total * np.exp(log_beta) - penalty * kappa_k
    return -float(value), -grad


def update_kappa(
    expected_counts: np.ndarray, m: np.ndarray, kappa_old: np.ndarray, penalty: float
) -> np.ndarray:
    """Penalized maximization of the expected token likelihood, one topic at a time.

    Args:
        expected_counts: K x V expected counts.
        m: Baseline log frequencies.
        kappa_old: Starting deviations.
        penalty: Quadratic penalty weight.

    Returns:
        np.ndarray: Updated K x V deviations.
    """
    kappa = kappa_old.copy()
    for k in range(kappa.shape[0]):
        args = (expected_counts[k], m, penalty)
        start_value, _ = _kappa_objective(kappa_old[k], *args)
        result = minimize(
            _kappa_objective, kappa_old[k], args=args, jac=True, method="L-BFGS-B"
        )
        if result.fun <= start_value and np.all(np.isfinite(result.x)):
            kappa[k] = result.x
        else:
            logger.debug(f"Topic {k} deviation update rejected")
    return kappa


def m_step(
    posteriors: Sequence[DocPosterior],
    dtm: SparseDtm,
    design: DesignMatrix,
    model: StmModel,
    safeguard: bool = True,
) -> StmModel:
    """Update gamma, then sigma, then kappa given the document posteriors.

    With `safeguard`, each update is kept only if the evaluated bound does not
    drop, so rounding can never make the bound trace decrease.

    Args:
        posteriors: One posterior per matrix row.
        dtm: Document-term matrix.
        design: Covariate rows aligned with the matrix.
        model: Current model.
        safeguard: Check the bound after every update.

    Returns:
        StmModel: The updated model.

    Raises:
        ValueError: If the posteriors do not match the matrix rows.
        SingularSystemError: If the prevalence regression cannot be solved.
    """
    if len(posteriors) != dtm.n_docs:
        raise ValueError(
            f"{len(posteriors)} posteriors for {dtm.n_docs} documents"
        )

    eta_hat = np.vstack([p.eta_hat for p in posteriors])
    hessian_invs = np.stack([p.hessian_inv for p in posteriors])
    current = elbo(model, posteriors, dtm, design) if safeguard else 0.0

    def accept(candidate: StmModel, name: str) -> bool:
        nonlocal current
        if not safeguard:
            return True
        value = elbo(candidate, posteriors, dtm, design)
        if value >= current:
            current = value
            return True
        logger.warning(f"{name} update rejected: bound {value:.6f} < {current:.6f}")
        return False

    gamma = update_gamma(
        eta_hat, design.rows, model.sigma, model.gamma_ridge_variance
    )
    candidate = model.with_params(gamma=gamma)
    if accept(candidate, "Prevalence coefficient"):
        model = candidate

    residuals = eta_hat - design.rows @ model.gamma
    sigma, moved = update_sigma(
        model.sigma, residuals, hessian_invs, model.sigma_shrinkage
    )
    if moved:
        candidate = model.with_params(sigma=sigma)
        if accept(candidate, "Covariance"):
            model = candidate

    expected = expected_topic_word_counts(posteriors, dtm, model.log_beta)
    kappa = update_kappa(expected, model.m, model.kappa, model.kappa_penalty)
    candidate = model.with_params(kappa=kappa)
    if accept(candidate, "Topic deviation"):
        model = candidate
    return model
