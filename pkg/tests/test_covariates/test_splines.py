"""Tests for the year B-spline basis."""

import numpy as np
import pytest

from src.common.errors import OutOfRangeYearError
from src.covariates.splines import (
    SplineSpec,
    bspline_basis,
    bspline_matrix,
    make_spline_spec,
)

YEARS = list(range(1992, 2022))


@pytest.fixture
def spec() -> SplineSpec:
    return make_spline_spec(YEARS, degree=3, df=10)


@pytest.mark.unit
def test_spec_layout(spec: SplineSpec):
    """Clamped knots at the year range ends with df - degree - 1 interior knots."""
    assert spec.boundary_knots == (1992.0, 2021.0)
    assert len(spec.interior_knots) == 6
    assert all(1992.0 < k < 2021.0 for k in spec.interior_knots)
    assert not spec.equal_spacing
    assert spec.knot_vector.shape == (6 + 2 * 4,)


@pytest.mark.unit
def test_partition_of_unity(spec: SplineSpec):
    """Entries lie in [0, 1] and sum to 1 at every year."""
    basis = bspline_matrix(YEARS + [1992.5, 2020.25], spec)
    assert basis.shape == (32, 10)
    assert np.all(basis >= 0.0) and np.all(basis <= 1.0)
    np.testing.assert_allclose(basis.sum(axis=1), 1.0, atol=1e-12)


@pytest.mark.unit
def test_left_boundary(spec: SplineSpec):
    """At the left boundary only the first function is nonzero."""
    expected = np.zeros(10)
    expected[0] = 1.0
    np.testing.assert_allclose(bspline_basis(1992, spec), expected, atol=1e-12)


@pytest.mark.unit
def test_greville_reproduces_year(spec: SplineSpec):
    """The knot averages reproduce linear functions of the year."""
    basis = bspline_matrix(YEARS, spec)
    np.testing.assert_allclose(basis @ spec.greville(), YEARS, atol=1e-9)


@pytest.mark.unit
def test_out_of_range(spec: SplineSpec):
    """No extrapolation beyond the boundary knots."""
    with pytest.raises(OutOfRangeYearError):
        bspline_basis(2030, spec)
    with pytest.raises(OutOfRangeYearError):
        bspline_matrix([1991, 2000], spec)


@pytest.mark.unit
def test_equal_spacing_fallback():
    """Quantile knots collapsing on a boundary fall back to equal spacing."""
    spec = make_spline_spec([2000] * 10 + [2001], degree=3, df=6)
    assert spec.equal_spacing
    np.testing.assert_allclose(spec.interior_knots, [2000 + 1 / 3, 2000 + 2 / 3])


@pytest.mark.unit
def test_invalid_specs():
    """A single year or too few columns cannot form a basis."""
    with pytest.raises(ValueError):
        make_spline_spec([2000, 2000])
    with pytest.raises(ValueError):
        make_spline_spec(YEARS, degree=3, df=3)


@pytest.mark.unit
def test_spec_serialization(spec: SplineSpec):
    """to_dict and from_dict are inverse."""
    assert SplineSpec.from_dict(spec.to_dict()) == spec
