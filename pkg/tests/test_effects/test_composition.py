"""Tests for the method of composition."""

import numpy as np
import pytest

from src.common.errors import CompositionFailureError
from src.effects.betareg import BetaRegressionFit, beta_regression_fit
from src.effects.composition import (
    EffectModelSpec,
    TopicShare,
    aggregate_fits,
    draw_prevalences,
    estimate_effects,
    method_of_composition,
)
from src.stm.model import theta_matrix
from tests.test_utils.data_generators import make_posteriors, random_simplex

N_DOCS = 80


@pytest.fixture(scope="module")
def theta() -> np.ndarray:
    return random_simplex(N_DOCS, 3, seed=12, concentration=5.0)


@pytest.fixture
def spec() -> EffectModelSpec:
    t = np.arange(N_DOCS, dtype=float) % 10
    return EffectModelSpec(
        model_id="trend",
        unit="topic_0",
        x=np.column_stack([np.ones(N_DOCS), t]),
        names=["intercept", "trend"],
        response=TopicShare(0),
        percent=("trend",),
        transform_intercept=True,
    )


def _fit(coefficients, se):
    return BetaRegressionFit(
        names=["a"],
        coefficients=np.array(coefficients),
        se=np.array(se),
        covariance=np.diag(np.square(se)),
        precision=10.0,
        log_likelihood=0.0,
        gradient_norm=0.0,
        n_obs=10,
    )


@pytest.mark.unit
def test_zero_covariance_equals_single_fit(theta, spec):
    """Without posterior spread, composition equals one regression on the MAP values."""
    posteriors = make_posteriors(theta, variance=0.0)
    single = beta_regression_fit(theta_matrix(posteriors)[:, 0], spec.x, spec.names)
    estimate = method_of_composition(posteriors, spec, n_compositions=4, seed=3)

    np.testing.assert_allclose(estimate.estimate, single.coefficients, rtol=1e-12)
    np.testing.assert_allclose(estimate.between_variance, 0.0, atol=1e-20)
    np.testing.assert_allclose(estimate.se, single.se, rtol=1e-8)
    assert estimate.n_compositions == 4 and estimate.n_failed == 0
    assert estimate.transform_intercept and estimate.percent == ("trend",)


@pytest.mark.unit
def test_seeded_and_order_invariant(theta, spec):
    """The same seed gives identical estimates; spread adds between-draw variance."""
    posteriors = make_posteriors(theta, variance=0.05)
    a = method_of_composition(posteriors, spec, n_compositions=6, seed=8)
    b = method_of_composition(posteriors, spec, n_compositions=6, seed=8)
    np.testing.assert_array_equal(a.estimate, b.estimate)
    np.testing.assert_array_equal(a.se, b.se)
    assert np.all(a.between_variance > 0)

    draws = draw_prevalences(posteriors, 6, seed=8)
    reversed_draws = method_of_composition(
        posteriors, spec, n_compositions=6, draws=draws[::-1]
    )
    np.testing.assert_array_equal(reversed_draws.estimate, a.estimate)


@pytest.mark.unit
def test_draws_depend_only_on_seed_and_index(theta):
    """Asking for more draws keeps the earlier ones."""
    posteriors = make_posteriors(theta, variance=0.1)
    short = draw_prevalences(posteriors, 2, seed=5)
    long = draw_prevalences(posteriors, 4, seed=5)
    np.testing.assert_array_equal(short[1], long[1])
    np.testing.assert_allclose(long[3].sum(axis=1), 1.0)


@pytest.mark.unit
def test_aggregation_rule():
    """Total variance is within + (1 + 1/n) between."""
    estimate, total, within, between = aggregate_fits(
        [_fit([1.0], [1.0]), _fit([3.0], [1.0])]
    )
    assert estimate[0] == pytest.approx(2.0)
    assert within[0] == pytest.approx(1.0)
    assert between[0] == pytest.approx(2.0)
    assert total[0] == pytest.approx(1.0 + 1.5 * 2.0)


@pytest.mark.unit
def test_invalid_draw_count(theta, spec):
    """At least two draws are needed, and supplied draws must match."""
    posteriors = make_posteriors(theta)
    with pytest.raises(ValueError):
        method_of_composition(posteriors, spec, n_compositions=1)
    with pytest.raises(ValueError):
        method_of_composition(
            posteriors, spec, n_compositions=3, draws=draw_prevalences(posteriors, 2, 0)
        )


@pytest.mark.unit
def test_too_many_failures(theta, spec):
    """Draws whose regressions cannot be fitted abort the composition."""
    failing = EffectModelSpec(
        "trend",
        "topic_0",
        spec.x,
        spec.names,
        response=lambda t: np.full(t.shape[0], 0.4),
    )
    with pytest.raises(CompositionFailureError):
        method_of_composition(make_posteriors(theta), failing, n_compositions=3)


@pytest.mark.unit
def test_estimate_effects_shares_draws(theta, spec):
    """Identical specs on shared draws give identical estimates."""
    posteriors = make_posteriors(theta, variance=0.02)
    first, second = estimate_effects(posteriors, [spec, spec], n_compositions=3, seed=1)
    np.testing.assert_array_equal(first.estimate, second.estimate)
    assert first.coefficient("trend") == second.coefficient("trend")
    assert 0.0 < first.intercept_prevalence() < 1.0
    assert estimate_effects(posteriors, [], n_compositions=3) == []
