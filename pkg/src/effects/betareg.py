"""Beta regression with logit mean link and log precision link."""

import logging
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit
from statsmodels.othermod.betareg import BetaModel
from statsmodels.tools.sm_exceptions import ConvergenceWarning, HessianInversionWarning

from src.common.errors import BetaRegressionConvergenceError, RankDeficientDesignError

logger = logging.getLogger(__name__)

CLAMP_EPSILON = 1e-6


@dataclass
class BetaRegressionFit:
    """Maximum-likelihood beta regression.

    Attributes:
        names: Coefficient names.
        coefficients: Mean-model coefficients (logit scale).
        se: Standard errors from the observed information.
        covariance: Covariance of the mean-model coefficients.
        precision: Precision phi (> 0).
        log_likelihood: Log-likelihood at the optimum.
        gradient_norm: Norm of the score at the optimum.
        n_obs: Number of observations.
        n_clamped: Responses moved into [eps, 1 - eps].
        converged: Whether the score reached tolerance.
        trace: Score norms of the final Newton iterations.
    """

    names: List[str]
    coefficients: np.ndarray
    se: np.ndarray
    covariance: np.ndarray
    precision: float
    log_likelihood: float
    gradient_norm: float
    n_obs: int
    n_clamped: int = 0
    converged: bool = True
    trace: List[float] = field(default_factory=list)

    def fitted_mean(self, x: np.ndarray) -> np.ndarray:
        return expit(np.asarray(x, dtype=float) @ self.coefficients)


def clamp_response(
    y: np.ndarray, epsilon: float = CLAMP_EPSILON
) -> Tuple[np.ndarray, int]:
    """Clamp responses into [epsilon, 1 - epsilon] and count the moved entries."""
    y = np.asarray(y, dtype=float)
    clamped = np.clip(y, epsilon, 1.0 - epsilon)
    return clamped, int(np.count_nonzero(clamped != y))


def check_full_rank(x: np.ndarray) -> None:
    """Raise RankDeficientDesignError unless x has full column rank."""
    rank = int(np.linalg.matrix_rank(x))
    if rank < x.shape[1]:
        raise RankDeficientDesignError(
            f"Design has rank {rank} but {x.shape[1]} columns",
            rank=rank,
            n_columns=x.shape[1],
        )


def _newton_polish(
    model: BetaModel, params: np.ndarray, tolerance: float, max_iterations: int
) -> Tuple[np.ndarray, List[float]]:
    trace: List[float] = []
    loglike = model.loglike(params)
    for _ in range(max_iterations):
        score = model.score(params)
        norm = float(np.linalg.norm(score))
        trace.append(norm)
        if norm <= tolerance:
            return params, trace
        try:
            step = np.linalg.solve(model.hessian(params), score)
        except np.linalg.LinAlgError as e:
            raise BetaRegressionConvergenceError(
                f"Singular information matrix: {e}", trace=trace
            ) from e

        scale = 1.0
        floor = loglike - 1e-12 * abs(loglike)
        for _ in range(30):
            candidate = params - scale * step
            candidate_loglike = model.loglike(candidate)
            if np.isfinite(candidate_loglike) and candidate_loglike >= floor:
                break
            scale *= 0.5
        else:
            raise BetaRegressionConvergenceError("Line search failed", trace=trace)
        params, loglike = candidate, candidate_loglike

    raise BetaRegressionConvergenceError(
        f"Score norm {trace[-1]:.3e} above {tolerance:.1e} "
        f"after {max_iterations} iterations",
        trace=trace,
    )


def beta_regression_fit(
    y: np.ndarray,
    x: np.ndarray,
    names: Optional[Sequence[str]] = None,
    tolerance: float = 1e-6,
    max_iterations: int = 100,
) -> BetaRegressionFit:
    """Fit y ~ Beta(mean = logit^-1(x b), precision phi) by maximum likelihood.

    Responses are clamped into [1e-6, 1 - 1e-6] first. The statsmodels Newton
    fit is polished with safeguarded Newton steps until the score norm is at
    most `tolerance`.

    Args:
        y: Responses in [0, 1].
        x: Design rows (include an intercept column where wanted).
        names: Coefficient names; x0, x1, ... when None.
        tolerance: Score norm tolerance.
        max_iterations: Iteration cap for each optimizer.

    Returns:
        BetaRegressionFit: The fit.

    Raises:
        RankDeficientDesignError: If x is rank deficient.
        BetaRegressionConvergenceError: If the optimizer does not converge or the
            response has no variation.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != len(y):
        raise ValueError(f"Design shape {x.shape} does not match {len(y)} responses")
    check_full_rank(x)
    names = list(names) if names is not None else [f"x{i}" for i in range(x.shape[1])]

    y, n_clamped = clamp_response(y)
    if n_clamped:
        logger.warning(
            f"Clamped {n_clamped} of {len(y)} responses into "
            f"[{CLAMP_EPSILON}, {1 - CLAMP_EPSILON}]"
        )
    if np.ptp(y) == 0.0:
        raise BetaRegressionConvergenceError(
            "Response has no variation; precision is unbounded", trace=[]
        )

    model = BetaModel(y, x)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        warnings.simplefilter("ignore", HessianInversionWarning)
        warnings.simplefilter("ignore", RuntimeWarning)
        result = model.fit(method="newton", maxiter=max_iterations, disp=False)
    params = np.asarray(result.params, dtype=float)
    if not np.all(np.isfinite(params)) or not np.isfinite(model.loglike(params)):
        logger.debug("Newton fit diverged, restarting polish from start values")
        params = np.asarray(model._start_params(), dtype=float)

    params, trace = _newton_polish(model, params, tolerance, max_iterations)

    information = -model.hessian(params)
    try:
        covariance = np.linalg.inv(information)
    except np.linalg.LinAlgError as e:
        raise BetaRegressionConvergenceError(
            f"Observed information is singular: {e}", trace=trace
        ) from e
    p = x.shape[1]
    variances = np.diag(covariance)[:p]
    if not np.all(variances > 0):
        raise BetaRegressionConvergenceError(
            "Observed information is not positive definite", trace=trace
        )

    return BetaRegressionFit(
        names=names,
        coefficients=params[:p],
        se=np.sqrt(variances),
        covariance=covariance[:p, :p],
        precision=float(np.exp(params[p])),
        log_likelihood=float(model.loglike(params)),
        gradient_norm=trace[-1],
        n_obs=len(y),
        n_clamped=n_clamped,
        converged=True,
        trace=trace,
    )
