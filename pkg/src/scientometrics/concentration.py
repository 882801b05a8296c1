"""Topic concentration: the normalized Herfindahl index of a prevalence vector."""

import logging
from typing import Dict, Union

import numpy as np
import pandas as pd
import statsmodels.api as sm

logger = logging.getLogger(__name__)


def topic_concentration(theta: np.ndarray) -> Union[float, np.ndarray]:
    """TC = (sum_k theta_k^2 - 1/K) / (1 - 1/K).

    0 when all K topics have prevalence 1/K, 1 for a single topic. 2-D input is
    evaluated row-wise.

    Args:
        theta: Simplex vector(s) over K topics.

    Returns:
        A float for 1-D input, an array for 2-D input.

    Raises:
        ValueError: If K < 2.
    """
    theta = np.asarray(theta, dtype=float)
    k = theta.shape[-1]
    if k < 2:
        raise ValueError("Topic concentration needs at least two topics")
    tc = (np.square(theta).sum(axis=-1) - 1.0 / k) / (1.0 - 1.0 / k)
    return float(tc) if theta.ndim == 1 else tc


def tc_linear_trend(yearly: pd.DataFrame, value_column: str = "tc") -> Dict[str, float]:
    """OLS of yearly concentration on year.

    Args:
        yearly: Table with a `year` column and the concentration column.
        value_column: Name of the concentration column.

    Returns:
        Dict with intercept, slope, se, p_value, r_squared and n_years.

    Raises:
        ValueError: With fewer than three years.
    """
    if len(yearly) < 3:
        raise ValueError(f"Linear trend needs at least 3 years, got {len(yearly)}")
    x = sm.add_constant(yearly["year"].to_numpy(dtype=float))
    result = sm.OLS(yearly[value_column].to_numpy(dtype=float), x).fit()
    logger.info(
        f"Concentration trend: slope {result.params[1]:.6f} "
        f"(p={result.pvalues[1]:.4f})"
    )
    return {
        "intercept": float(result.params[0]),
        "slope": float(result.params[1]),
        "se": float(result.bse[1]),
        "p_value": float(result.pvalues[1]),
        "r_squared": float(result.rsquared),
        "n_years": int(len(yearly)),
    }
