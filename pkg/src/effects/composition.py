"""Method of composition: propagate posterior uncertainty into beta regressions."""

import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit
from scipy.stats import norm

from src.common.errors import BetaRegressionConvergenceError, CompositionFailureError
from src.common.parallel import map_ordered
from src.effects.betareg import BetaRegressionFit, beta_regression_fit, check_full_rank
from src.stm.model import DocPosterior, softmax_prevalence
from src.stm.sampling import covariance_factor

logger = logging.getLogger(__name__)

MAX_FAILED_SHARE = 0.2


@dataclass
class EffectModelSpec:
    """One regression to run under the method of composition.

    Attributes:
        model_id: Model family (trend, yearly, journal_tc, journal_topic_trend, team).
        unit: What the regression is about (a topic or a journal).
        x: Design rows.
        names: Coefficient names, one per column of x.
        response: Maps a D x K prevalence draw to the response vector for x.
        percent: Coefficients reported x100.
        transform_intercept: Report the intercept as a base prevalence logit^-1(a).
        flags: Columns or rows dropped while building the design.
    """

    model_id: str
    unit: str
    x: np.ndarray
    names: List[str]
    response: Callable[[np.ndarray], np.ndarray]
    percent: Tuple[str, ...] = ()
    transform_intercept: bool = False
    flags: List[str] = field(default_factory=list)


@dataclass
class EffectEstimate:
    """Coefficients aggregated over composition draws."""

    model_id: str
    unit: str
    names: List[str]
    estimate: np.ndarray
    se: np.ndarray
    p_value: np.ndarray
    n_compositions: int
    n_failed: int = 0
    within_variance: Optional[np.ndarray] = None
    between_variance: Optional[np.ndarray] = None
    precision: float = float("nan")
    percent: Tuple[str, ...] = ()
    transform_intercept: bool = False
    flags: List[str] = field(default_factory=list)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def coefficient(self, name: str) -> Tuple[float, float, float]:
        """(estimate, se, p) of one coefficient."""
        i = self.index(name)
        return float(self.estimate[i]), float(self.se[i]), float(self.p_value[i])

    def intercept_prevalence(self) -> float:
        """logit^-1 of the intercept: the fitted prevalence at the base level."""
        return float(expit(self.estimate[0]))


@dataclass(frozen=True)
class TopicShare:
    """Response: one topic's prevalence, optionally for a subset of rows."""

    topic: int
    rows: Optional[np.ndarray] = None

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        column = theta[:, self.topic]
        return column if self.rows is None else column[self.rows]


def draw_prevalences(
    posteriors: Sequence[DocPosterior], n_draws: int, seed: int
) -> List[np.ndarray]:
    """Independent D x K prevalence draws, one child seed per draw.

    Draw i depends only on (seed, i), so the draws do not change with the
    number of workers.
    """
    eta_hat = np.vstack([p.eta_hat for p in posteriors])
    factors = np.stack([covariance_factor(p.hessian_inv) for p in posteriors])
    draws = []
    for child in np.random.SeedSequence(seed).spawn(n_draws):
        z = np.random.default_rng(child).standard_normal(eta_hat.shape)
        draws.append(softmax_prevalence(eta_hat + np.einsum("dij,dj->di", factors, z)))
    return draws


def _fit_draw(
    y: np.ndarray, x: np.ndarray, names: List[str]
) -> Optional[BetaRegressionFit]:
    try:
        return beta_regression_fit(y, x, names)
    except BetaRegressionConvergenceError as e:
        logger.warning(f"Composition draw dropped: {e}")
        return None


def aggregate_fits(
    fits: Sequence[BetaRegressionFit],
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Mean coefficients and total variance within + (1 + 1/n) between.

    Values are sorted per coefficient before summing so the result does not
    depend on draw order.

    Returns:
        Tuple of (estimate, total variance, within variance, between variance).
    """
    n = len(fits)
    coefs = np.sort(np.vstack([f.coefficients for f in fits]), axis=0)
    variances = np.sort(np.vstack([f.se**2 for f in fits]), axis=0)
    estimate = coefs.mean(axis=0)
    within = variances.mean(axis=0)
    between = np.zeros_like(estimate)
    if n > 1:
        between = np.sort((coefs - estimate) ** 2, axis=0).sum(axis=0) / (n - 1)
    return estimate, within + (1.0 + 1.0 / n) * between, within, between


def method_of_composition(
    posteriors: Sequence[DocPosterior],
    spec: EffectModelSpec,
    n_compositions: int = 25,
    seed: int = 0,
    workers: int = 1,
    draws: Optional[Sequence[np.ndarray]] = None,
) -> EffectEstimate:
    """Fit the regression on posterior draws of prevalence and aggregate.

    Args:
        posteriors: Document posteriors in design-row order.
        spec: The regression.
        n_compositions: Number of draws (>= 2).
        seed: Seed of the draw sequence.
        workers: Processes for the per-draw fits.
        draws: Precomputed prevalence draws from draw_prevalences; drawn here when None.

    Returns:
        EffectEstimate: Aggregated coefficients with normal-approximation p-values.

    Raises:
        ValueError: If n_compositions < 2.
        RankDeficientDesignError: If the design is rank deficient.
        CompositionFailureError: If more than 20% of the draws fail.
    """
    if n_compositions < 2:
        raise ValueError("n_compositions must be at least 2")
    check_full_rank(spec.x)

    if draws is None:
        draws = draw_prevalences(posteriors, n_compositions, seed)
    elif len(draws) != n_compositions:
        raise ValueError(f"Expected {n_compositions} draws, got {len(draws)}")
    responses = [spec.response(theta) for theta in draws]
    fit_draw = partial(_fit_draw, x=spec.x, names=spec.names)
    results = map_ordered(fit_draw, responses, workers)
    fits = [f for f in results if f is not None]
    n_failed = n_compositions - len(fits)
    if n_failed > MAX_FAILED_SHARE * n_compositions or not fits:
        raise CompositionFailureError(failed=n_failed, total=n_compositions)

    estimate, total, within, between = aggregate_fits(fits)
    se = np.sqrt(total)
    p_value = 2.0 * norm.sf(np.abs(estimate / se))
    logger.debug(f"{spec.model_id}/{spec.unit}: {len(fits)} draws, {n_failed} dropped")
    return EffectEstimate(
        model_id=spec.model_id,
        unit=spec.unit,
        names=list(spec.names),
        estimate=estimate,
        se=se,
        p_value=p_value,
        n_compositions=len(fits),
        n_failed=n_failed,
        within_variance=within,
        between_variance=between,
        precision=float(np.mean(np.sort([f.precision for f in fits]))),
        percent=spec.percent,
        transform_intercept=spec.transform_intercept,
        flags=list(spec.flags),
    )


def estimate_effects(
    posteriors: Sequence[DocPosterior],
    specs: Sequence[EffectModelSpec],
    n_compositions: int = 25,
    seed: int = 0,
    workers: int = 1,
) -> List[EffectEstimate]:
    """Run several regressions on one shared set of prevalence draws."""
    if not specs:
        return []
    draws = draw_prevalences(posteriors, n_compositions, seed)
    estimates = []
    for spec in specs:
        estimates.append(
            method_of_composition(
                posteriors, spec, n_compositions, seed, workers, draws=draws
            )
        )
    logger.info(
        f"Estimated {len(estimates)} {specs[0].model_id} regressions "
        f"over {n_compositions} draws"
    )
    return estimates
