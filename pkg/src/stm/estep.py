"""Per-document variational step.

The collapsed objective for one document with word indices w and counts c is

    f(eta) = -1/2 (eta - mu)' Sigma^-1 (eta - mu) + sum_v c_v log(theta(eta)' beta_v)

It is maximized by BFGS followed by Newton polishing; the posterior covariance
is the inverse negative Hessian at the mode.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from src.common.errors import EStepConvergenceError
from src.stm.model import DocPosterior, StmModel

logger = logging.getLogger(__name__)

MAX_NEWTON_STEPS = 50
MAX_BACKTRACKS = 40
JITTER = 1e-10


@dataclass(frozen=True)
class EStepContext:
    """Model quantities shared by all documents in one E-step."""

    log_beta: np.ndarray
    sigma_inv: np.ndarray
    tolerance: float = 1e-6
    max_iterations: int = 200

    @classmethod
    def from_model(
        cls, model: StmModel, tolerance: float = 1e-6, max_iterations: int = 200
    ) -> "EStepContext":
        return cls(
            log_beta=model.log_beta,
            sigma_inv=np.linalg.inv(model.sigma),
            tolerance=tolerance,
            max_iterations=max_iterations,
        )


def _responsibilities(
    eta: np.ndarray, log_beta_doc: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """theta (K), phi (n_w x K) and log p_v (n_w) at eta."""
    log_theta = np.append(eta, 0.0)
    log_theta = log_theta - logsumexp(log_theta)
    joint = log_theta[None, :] + log_beta_doc.T
    log_p = logsumexp(joint, axis=1)
    phi = np.exp(joint - log_p[:, None])
    return np.exp(log_theta), phi, log_p


def objective(
    eta: np.ndarray,
    counts: np.ndarray,
    log_beta_doc: np.ndarray,
    mu: np.ndarray,
    sigma_inv: np.ndarray,
) -> float:
    """Evaluate f(eta)."""
    _, _, log_p = _responsibilities(eta, log_beta_doc)
    diff = eta - mu
    return float(counts @ log_p - 0.5 * diff @ sigma_inv @ diff)


def gradient(
    eta: np.ndarray,
    counts: np.ndarray,
    log_beta_doc: np.ndarray,
    mu: np.ndarray,
    sigma_inv: np.ndarray,
) -> np.ndarray:
    """Gradient of f on the first K-1 coordinates.

    sum_v c_v phi_v - N theta - Sigma^-1 (eta - mu)
    """
    theta, phi, _ = _responsibilities(eta, log_beta_doc)
    grad = counts @ phi - counts.sum() * theta
    return grad[:-1] - sigma_inv @ (eta - mu)


def negative_hessian(
    eta: np.ndarray, counts: np.ndarray, log_beta_doc: np.ndarray, sigma_inv: np.ndarray
) -> np.ndarray:
    """Negative Hessian of f.

    Sigma^-1 + N (diag theta - theta theta') - sum_v c_v (diag phi_v - phi_v phi_v'),
    restricted to the first K-1 coordinates.
    """
    theta, phi, _ = _responsibilities(eta, log_beta_doc)
    n_tokens = counts.sum()
    weighted = phi * counts[:, None]
    word_part = np.diag(weighted.sum(axis=0)) - phi.T @ weighted
    prior_part = n_tokens * (np.diag(theta) - np.outer(theta, theta))
    h = prior_part - word_part
    return sigma_inv + h[:-1, :-1]


def _cholesky_with_jitter(matrix: np.ndarray) -> np.ndarray:
    sym = 0.5 * (matrix + matrix.T)
    jitter = 0.0
    scale = max(float(np.abs(np.diag(sym)).max()), 1.0)
    for _ in range(30):
        try:
            return np.linalg.cholesky(sym + jitter * np.eye(sym.shape[0]))
        except np.linalg.LinAlgError:
            jitter = JITTER * scale if jitter == 0.0 else jitter * 10.0
    raise np.linalg.LinAlgError("Matrix is not positive definite even after jitter")


def _newton_polish(
    eta: np.ndarray,
    counts: np.ndarray,
    log_beta_doc: np.ndarray,
    mu: np.ndarray,
    context: EStepContext,
) -> Tuple[np.ndarray, np.ndarray]:
    args = (counts, log_beta_doc, mu, context.sigma_inv)
    value = objective(eta, *args)
    grad = gradient(eta, *args)
    for _ in range(MAX_NEWTON_STEPS):
        if np.linalg.norm(grad) <= context.tolerance:
            break
        hessian = negative_hessian(eta, counts, log_beta_doc, context.sigma_inv)
        chol = _cholesky_with_jitter(hessian)
        step = np.linalg.solve(chol.T, np.linalg.solve(chol, grad))
        t = 1.0
        for _ in range(MAX_BACKTRACKS):
            candidate = eta + t * step
            cand_value = objective(candidate, *args)
            if cand_value >= value:
                break
            t *= 0.5
        else:
            break
        eta, value = candidate, cand_value
        grad = gradient(eta, *args)
    return eta, grad


def e_step_document(
    words: np.ndarray,
    counts: np.ndarray,
    mu: np.ndarray,
    context: EStepContext,
    start: Optional[np.ndarray] = None,
) -> DocPosterior:
    """Find the posterior mode and Laplace covariance of one document.

    Args:
        words: Vocabulary indices of the document's words.
        counts: Counts aligned with `words`.
        mu: Prior mean x_d gamma.
        context: Shared model quantities.
        start: Starting point; mu when None.

    Returns:
        DocPosterior: Mode, inverse negative Hessian and MAP prevalence.

    Raises:
        ValueError: If the document is empty.
        EStepConvergenceError: If the gradient norm stays above tolerance.
    """
    if len(words) == 0 or counts.sum() <= 0:
        raise ValueError("Cannot run the E-step on an empty document")

    log_beta_doc = context.log_beta[:, words]
    x0 = np.array(mu if start is None else start, dtype=float)

    def neg_f(eta: np.ndarray) -> Tuple[float, np.ndarray]:
        return (
            -objective(eta, counts, log_beta_doc, mu, context.sigma_inv),
            -gradient(eta, counts, log_beta_doc, mu, context.sigma_inv),
        )

    result = minimize(
        neg_f,
        x0,
        jac=True,
        method="BFGS",
        options={"gtol": context.tolerance, "maxiter": context.max_iterations},
    )
    eta, grad = _newton_polish(result.x, counts, log_beta_doc, mu, context)
    grad_norm = float(np.linalg.norm(grad))
    if grad_norm > context.tolerance:
        raise EStepConvergenceError(
            "Per-document optimizer did not converge", eta, grad_norm
        )

    hessian = negative_hessian(eta, counts, log_beta_doc, context.sigma_inv)
    chol = _cholesky_with_jitter(hessian)
    chol_inv = np.linalg.inv(chol)
    hessian_inv = chol_inv.T @ chol_inv
    logger.debug(
        f"E-step converged after {result.nit} BFGS iterations, |g|={grad_norm:.2e}"
    )
    return DocPosterior.from_mode(eta, 0.5 * (hessian_inv + hessian_inv.T))


def estep_task(
    task: Tuple[np.ndarray, np.ndarray, np.ndarray], context: EStepContext
) -> DocPosterior:
    """Picklable wrapper for process pools: task is (words, counts, mu)."""
    words, counts, mu = task
    return e_step_document(words, counts, mu, context)


def responsibilities(
    eta: np.ndarray, words: np.ndarray, log_beta: np.ndarray
) -> np.ndarray:
    """Token-topic responsibilities phi (n_w x K), each row summing to 1."""
    _, phi, _ = _responsibilities(eta, log_beta[:, words])
    return phi

