"""Topic-count sweep for the coherence/exclusivity tradeoff."""

import logging
from dataclasses import dataclass, field
from functools import partial
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from src.common.config import FitSettings, SelectionSettings
from src.common.errors import DuplicateKError, ScitopicsError
from src.common.parallel import map_ordered
from src.corpus.dtm import SparseDtm
from src.covariates.design import DesignMatrix
from src.selection.metrics import exclusivity, model_coherence
from src.stm.fit import fit

logger = logging.getLogger(__name__)


@dataclass
class SelectionPoint:
    """Coherence and exclusivity of one fitted K."""

    k: int
    coherence: List[float] = field(default_factory=list)
    exclusivity: List[float] = field(default_factory=list)
    status: str = "ok"
    error: str = ""
    converged: bool = False
    final_bound: Optional[float] = None

    @property
    def mean_coherence(self) -> float:
        return float(np.mean(self.coherence)) if self.coherence else float("nan")

    @property
    def mean_exclusivity(self) -> float:
        return float(np.mean(self.exclusivity)) if self.exclusivity else float("nan")


def _evaluate_k(
    k: int,
    dtm: SparseDtm,
    design: DesignMatrix,
    fit_settings: FitSettings,
    selection: SelectionSettings,
    base_seed: int,
) -> SelectionPoint:
    try:
        result = fit(dtm, design, k, fit_settings, seed=base_seed + k)
    except (ScitopicsError, ValueError, np.linalg.LinAlgError) as e:
        logger.warning(f"Fit failed for K={k}: {e}")
        return SelectionPoint(k=k, status="failed", error=str(e))
    point = SelectionPoint(
        k=k,
        coherence=model_coherence(result.model, dtm, selection.top_m),
        exclusivity=exclusivity(result.model, selection.top_m, selection.frex_weight),
        converged=result.converged,
        final_bound=result.bound_trace[-1] if result.bound_trace else None,
    )
    logger.info(
        f"K={k}: coherence {point.mean_coherence:.4f}, "
        f"exclusivity {point.mean_exclusivity:.4f}"
    )
    return point


def sweep_k(
    dtm: SparseDtm,
    design: DesignMatrix,
    k_values: Sequence[int],
    fit_settings: FitSettings,
    selection: SelectionSettings,
    seed: int,
    workers: int = 1,
) -> List[SelectionPoint]:
    """Fit one model per K and score it.

    The fit for K uses seed + K. A failed fit is reported as a failed point and
    does not stop the remaining values.

    Args:
        dtm: Document-term matrix.
        design: Covariate rows.
        k_values: Topic counts.
        fit_settings: Estimation settings.
        selection: Metric settings.
        seed: Base seed.
        workers: Processes, one model per process.

    Returns:
        List[SelectionPoint]: One point per K in input order.

    Raises:
        ValueError: If k_values is empty or a K is below 2.
        DuplicateKError: If a K repeats.
    """
    if not k_values:
        raise ValueError("k_values must not be empty")
    if len(set(k_values)) != len(k_values):
        raise DuplicateKError(f"Duplicate topic counts in {list(k_values)}")
    if any(k < 2 for k in k_values):
        raise ValueError("Every K must be at least 2")

    task = partial(
        _evaluate_k,
        dtm=dtm,
        design=design,
        fit_settings=fit_settings,
        selection=selection,
        base_seed=seed,
    )
    return map_ordered(task, list(k_values), workers)


def selection_frame(points: Sequence[SelectionPoint]) -> pd.DataFrame:
    """Plot-ready table: K, coherence, exclusivity, status, error."""
    return pd.DataFrame(
        {
            "K": [p.k for p in points],
            "coherence": [p.mean_coherence for p in points],
            "exclusivity": [p.mean_exclusivity for p in points],
            "converged": [p.converged for p in points],
            "status": [p.status for p in points],
            "error": [p.error for p in points],
        }
    )
