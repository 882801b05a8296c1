"""Variational EM driver."""

import logging
from dataclasses import dataclass, field
from functools import partial
from typing import List, Optional, Sequence

import numpy as np

from src.common.config import FitSettings
from src.common.errors import ScitopicsError
from src.common.parallel import map_ordered
from src.corpus.dtm import SparseDtm
from src.covariates.design import DesignMatrix
from src.stm.bound import document_bounds, elbo
from src.stm.estep import EStepContext, estep_task
from src.stm.model import DocPosterior, StmModel, init_model
from src.stm.mstep import m_step

logger = logging.getLogger(__name__)


@dataclass
class FitResult:
    """Outputs of a variational EM run."""

    model: StmModel
    posteriors: List[DocPosterior]
    bound_trace: List[float]
    converged: bool
    n_iterations: int
    rejected_document_updates: int = 0
    settings: Optional[FitSettings] = field(default=None, repr=False)


def relative_change(new: float, old: float) -> float:
    """Relative bound change |new - old| / |old|."""
    return abs(new - old) / max(abs(old), np.finfo(float).tiny)


def e_step(
    model: StmModel,
    dtm: SparseDtm,
    design: DesignMatrix,
    settings: FitSettings,
    workers: int = 1,
) -> List[DocPosterior]:
    """Run the per-document step for every matrix row, in row order."""
    context = EStepContext.from_model(
        model, settings.estep_tolerance, settings.estep_max_iterations
    )
    mu = design.rows @ model.gamma
    tasks = [(*dtm.row(d), mu[d]) for d in range(dtm.n_docs)]
    return map_ordered(partial(estep_task, context=context), tasks, workers)


def check_alignment(dtm: SparseDtm, design: DesignMatrix) -> None:
    """Raise if the matrix and design rows do not describe the same documents."""
    if dtm.n_docs == 0:
        raise ScitopicsError("Cannot fit an empty document-term matrix")
    ids_differ = design.doc_ids and list(design.doc_ids) != list(dtm.doc_ids)
    if design.n_docs != dtm.n_docs or ids_differ:
        raise ScitopicsError(
            "Design rows are not aligned with the document-term matrix rows"
        )


def fit(
    dtm: SparseDtm,
    design: DesignMatrix,
    n_topics: int,
    settings: FitSettings,
    seed: int,
    workers: int = 1,
    initial_model: Optional[StmModel] = None,
) -> FitResult:
    """Estimate the topic model by bound-safeguarded variational EM.

    Each iteration runs the per-document step for every row, keeping a
    document's new posterior only when its bound term does not drop, then the
    global updates. Once `settings.min_iterations` have run, iteration stops
    when the relative bound change falls below `settings.tolerance`; the
    iteration cap always applies.

    Args:
        dtm: Document-term matrix.
        design: Covariate rows aligned with `dtm`.
        n_topics: K.
        settings: Estimation settings.
        seed: Initialization seed.
        workers: Processes for the per-document step.
        initial_model: Starting model; initialized from `seed` when None.

    Returns:
        FitResult: Model, posteriors, bound trace and convergence flag.
    """
    check_alignment(dtm, design)
    model = initial_model or init_model(
        dtm,
        design.n_covariates,
        n_topics,
        seed,
        gamma_ridge_variance=settings.gamma_ridge_variance,
        kappa_penalty_scale=settings.kappa_penalty_scale,
        sigma_shrinkage=settings.sigma_shrinkage,
        init_sigma=settings.init_sigma,
        init_kappa_sd=settings.init_kappa_sd,
        column_labels=design.column_labels,
        init_method=settings.init_method,
        init_documents=settings.init_documents,
    )
    logger.info(
        f"Fitting K={n_topics} on {dtm.n_docs} documents x {dtm.n_tokens} tokens "
        f"(seed {seed})"
    )

    posteriors: Optional[List[DocPosterior]] = None
    trace: List[float] = []
    rejected = 0
    converged = False
    iteration = 0
    for iteration in range(1, settings.max_iterations + 1):
        candidates = e_step(model, dtm, design, settings, workers)
        if posteriors is None:
            posteriors = candidates
        else:
            new_bounds = document_bounds(model, candidates, dtm, design)
            old_bounds = document_bounds(model, posteriors, dtm, design)
            keep_new = new_bounds >= old_bounds
            rejected += int((~keep_new).sum())
            posteriors = [
                c if k else o for c, o, k in zip(candidates, posteriors, keep_new)
            ]

        model = m_step(posteriors, dtm, design, model)
        trace.append(elbo(model, posteriors, dtm, design))

        if len(trace) > 1:
            change = relative_change(trace[-1], trace[-2])
            logger.info(
                f"Iteration {iteration}: bound {trace[-1]:.6f} "
                f"(relative change {change:.3e})"
            )
            if change < settings.tolerance and iteration >= settings.min_iterations:
                converged = True
                break
        else:
            logger.info(f"Iteration {iteration}: bound {trace[-1]:.6f}")

    if not converged:
        logger.warning(
            f"Reached {settings.max_iterations} iterations without convergence"
        )
    if rejected:
        logger.warning(
            f"Kept the previous posterior for {rejected} document updates "
            "that lowered the bound"
        )
    return FitResult(
        model=model,
        posteriors=posteriors or [],
        bound_trace=trace,
        converged=converged,
        n_iterations=iteration,
        rejected_document_updates=rejected,
        settings=settings,
    )


def align_topics(beta_fit: np.ndarray, beta_true: np.ndarray) -> np.ndarray:
    """Greedily match fitted topics to true topics by total variation distance.

    Repeatedly takes the closest unmatched (true, fitted) pair.

    Args:
        beta_fit: K x V fitted topic-word rows.
        beta_true: K x V true topic-word rows.

    Returns:
        np.ndarray: perm with perm[k] = fitted topic matched to true topic k.
    """
    n_topics = beta_true.shape[0]
    distance = 0.5 * np.abs(beta_true[:, None, :] - beta_fit[None, :, :]).sum(axis=2)
    perm = np.full(n_topics, -1, dtype=int)
    used_true: set = set()
    used_fit: set = set()
    for flat in np.argsort(distance, axis=None, kind="stable"):
        t, f = divmod(int(flat), beta_fit.shape[0])
        if t in used_true or f in used_fit:
            continue
        perm[t] = f
        used_true.add(t)
        used_fit.add(f)
        if len(used_true) == n_topics:
            break
    return perm


def total_variation(beta_a: np.ndarray, beta_b: np.ndarray) -> np.ndarray:
    """Row-wise total variation distance."""
    return 0.5 * np.abs(beta_a - beta_b).sum(axis=1)


def mean_theta_correlation(
    theta_fit: np.ndarray, theta_true: np.ndarray, perm: Sequence[int]
) -> float:
    """Mean per-document Pearson correlation after reordering fitted topics."""
    aligned = theta_fit[:, list(perm)]
    a = aligned - aligned.mean(axis=1, keepdims=True)
    b = theta_true - theta_true.mean(axis=1, keepdims=True)
    corr = (a * b).sum(axis=1) / np.sqrt((a**2).sum(axis=1) * (b**2).sum(axis=1))
    return float(np.nanmean(corr))
