"""Clamped B-spline basis for publication years."""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np
from scipy.interpolate import BSpline

from src.common.errors import OutOfRangeYearError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplineSpec:
    """Degree, knots and size of a clamped B-spline basis.

    The basis has `df` columns; `df - degree - 1` interior knots sit at equally
    spaced quantiles of the observed years unless that places them on or outside
    the boundaries, in which case they are spread evenly (`equal_spacing=True`).
    """

    degree: int
    df: int
    interior_knots: Tuple[float, ...]
    boundary_knots: Tuple[float, float]
    equal_spacing: bool = False

    @property
    def knot_vector(self) -> np.ndarray:
        lo, hi = self.boundary_knots
        k = self.degree
        interior = np.asarray(self.interior_knots, dtype=float)
        return np.concatenate([np.full(k + 1, lo), interior, np.full(k + 1, hi)])

    def greville(self) -> np.ndarray:
        """Knot averages; sum_j B_j(x) * greville_j == x inside the boundaries."""
        t = self.knot_vector
        k = self.degree
        return np.array([t[j + 1 : j + k + 1].mean() for j in range(self.df)])

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["interior_knots"] = list(self.interior_knots)
        d["boundary_knots"] = list(self.boundary_knots)
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "SplineSpec":
        return cls(
            degree=int(d["degree"]),
            df=int(d["df"]),
            interior_knots=tuple(float(x) for x in d["interior_knots"]),
            boundary_knots=(
                float(d["boundary_knots"][0]),
                float(d["boundary_knots"][1]),
            ),
            equal_spacing=bool(d.get("equal_spacing", False)),
        )


def make_spline_spec(
    years: Sequence[int], degree: int = 3, df: int = 10
) -> SplineSpec:
    """Place knots for the observed years.

    Args:
        years: Observed publication years.
        degree: Spline degree.
        df: Number of basis columns.

    Returns:
        SplineSpec: Clamped spec with boundaries at the min and max year.

    Raises:
        ValueError: If fewer than two distinct years are observed or
            df < degree + 1.
    """
    if df < degree + 1:
        raise ValueError(f"df={df} too small for degree {degree}")
    arr = np.asarray(years, dtype=float)
    lo, hi = float(arr.min()), float(arr.max())
    if hi <= lo:
        raise ValueError("A year spline needs at least two distinct years")

    n_interior = df - degree - 1
    probs = np.arange(1, n_interior + 1) / (n_interior + 1)
    knots = np.quantile(arr, probs)
    equal_spacing = False
    if n_interior and (
        knots[0] <= lo or knots[-1] >= hi or np.any(np.diff(knots) <= 0)
    ):
        knots = lo + (hi - lo) * probs
        equal_spacing = True
        logger.warning(
            "Quantile knots not strictly interior; using equally spaced knots"
        )
    return SplineSpec(
        degree, df, tuple(float(x) for x in knots), (lo, hi), equal_spacing
    )


def bspline_matrix(years: Sequence[float], spec: SplineSpec) -> np.ndarray:
    """Evaluate the basis at many years (de Boor recursion via scipy).

    Raises:
        OutOfRangeYearError: If a year lies outside the boundary knots.
    """
    x = np.asarray(years, dtype=float)
    lo, hi = spec.boundary_knots
    outside = (x < lo) | (x > hi)
    if np.any(outside):
        bad = x[outside][0]
        raise OutOfRangeYearError(
            f"Year {bad:g} outside spline boundaries [{lo:g}, {hi:g}]"
        )
    basis = BSpline.design_matrix(x, spec.knot_vector, spec.degree).toarray()
    return basis


def bspline_basis(year: float, spec: SplineSpec) -> np.ndarray:
    """Evaluate the basis at one year; entries are in [0, 1] and sum to 1."""
    return bspline_matrix([year], spec)[0]
