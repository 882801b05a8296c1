"""Tests for model and posterior containers."""

from pathlib import Path

import numpy as np
import pytest

from src.common.artifacts import embedded_hash
from src.common.errors import StageInputError
from src.stm.io import load_model, load_posteriors, save_model, save_posteriors

HASH = "ab" * 32


@pytest.mark.unit
def test_model_container(temp_dir: Path, fitted_study):
    """Parameters, settings and extra metadata survive a write and read."""
    model = fitted_study.model
    path = save_model(
        model,
        temp_dir / "model.bin",
        HASH,
        {"n_topics": 3},
        {"bound_trace": fitted_study.bound_trace},
    )
    loaded, meta = load_model(path)

    for name in ("gamma", "sigma", "m", "kappa"):
        np.testing.assert_array_equal(getattr(loaded, name), getattr(model, name))
    assert loaded.column_labels == model.column_labels
    assert loaded.kappa_penalty == model.kappa_penalty
    assert meta["fit_settings"] == {"n_topics": 3}
    assert meta["bound_trace"] == fitted_study.bound_trace
    assert embedded_hash(path) == HASH


@pytest.mark.unit
def test_posterior_container(temp_dir: Path, simulated_study, fitted_study):
    """Posteriors keep their order and ids."""
    path = save_posteriors(
        fitted_study.posteriors,
        simulated_study.dtm.doc_ids,
        temp_dir / "post.bin",
        HASH,
    )
    loaded, ids = load_posteriors(path)

    assert ids == simulated_study.dtm.doc_ids
    assert len(loaded) == len(fitted_study.posteriors)
    np.testing.assert_array_equal(
        loaded[5].hessian_inv, fitted_study.posteriors[5].hessian_inv
    )
    np.testing.assert_array_equal(
        loaded[-1].theta_map, fitted_study.posteriors[-1].theta_map
    )


@pytest.mark.unit
def test_wrong_container_kind(temp_dir: Path, simulated_study, fitted_study):
    """Reading a posterior file as a model fails with an input error."""
    path = save_posteriors(
        fitted_study.posteriors,
        simulated_study.dtm.doc_ids,
        temp_dir / "post.bin",
        HASH,
    )
    with pytest.raises(StageInputError):
        load_model(path)
