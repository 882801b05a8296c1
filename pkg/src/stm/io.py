"""Model and posterior containers."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.common.artifacts import load_arrays, save_arrays
from src.common.errors import StageInputError
from src.stm.model import DocPosterior, StmModel

PathLike = Union[str, Path]


def save_model(
    model: StmModel,
    path: PathLike,
    config_hash: str,
    fit_settings: Optional[Dict[str, Any]] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write model parameters with their provenance.

    Args:
        model: The model.
        path: Target file.
        config_hash: Hash of the producing configuration.
        fit_settings: Estimation settings used.
        extra: Further JSON-serializable metadata (bound trace, convergence).

    Returns:
        Path: The written file.
    """
    meta = {
        "kind": "stm_model",
        "n_topics": model.n_topics,
        "vocab_size": model.vocab_size,
        "n_covariates": model.n_covariates,
        "column_labels": list(model.column_labels),
        "gamma_ridge_variance": model.gamma_ridge_variance,
        "kappa_penalty": model.kappa_penalty,
        "sigma_shrinkage": model.sigma_shrinkage,
        "seed": model.seed,
        "fit_settings": fit_settings or {},
    }
    meta.update(extra or {})
    arrays = {
        "gamma": model.gamma,
        "sigma": model.sigma,
        "m": model.m,
        "kappa": model.kappa,
    }
    return save_arrays(path, arrays, config_hash, meta)


def load_model(path: PathLike) -> Tuple[StmModel, Dict[str, Any]]:
    """Read a model written by save_model.

    Returns:
        Tuple of (model, metadata).
    """
    arrays, header = load_arrays(path)
    meta = header["meta"]
    if meta.get("kind") != "stm_model":
        raise StageInputError(f"{path} does not hold a topic model", path=str(path))
    model = StmModel(
        gamma=arrays["gamma"],
        sigma=arrays["sigma"],
        m=arrays["m"],
        kappa=arrays["kappa"],
        gamma_ridge_variance=float(meta["gamma_ridge_variance"]),
        kappa_penalty=float(meta["kappa_penalty"]),
        sigma_shrinkage=float(meta["sigma_shrinkage"]),
        seed=int(meta["seed"]),
        column_labels=list(meta["column_labels"]),
    )
    return model, meta


def save_posteriors(
    posteriors: Sequence[DocPosterior],
    doc_ids: Sequence[str],
    path: PathLike,
    config_hash: str,
) -> Path:
    """Write posterior modes, covariances and MAP prevalences, one row per doc."""
    arrays = {
        "eta_hat": np.vstack([p.eta_hat for p in posteriors]),
        "hessian_inv": np.stack([p.hessian_inv for p in posteriors]),
        "theta_map": np.vstack([p.theta_map for p in posteriors]),
    }
    meta = {"kind": "posteriors", "doc_ids": list(doc_ids)}
    return save_arrays(path, arrays, config_hash, meta)


def load_posteriors(path: PathLike) -> Tuple[List[DocPosterior], List[str]]:
    """Read posteriors written by save_posteriors.

    Returns:
        Tuple of (posteriors, doc ids).
    """
    arrays, header = load_arrays(path)
    meta = header["meta"]
    if meta.get("kind") != "posteriors":
        raise StageInputError(f"{path} does not hold posteriors", path=str(path))
    posteriors = [
        DocPosterior(eta_hat=e, hessian_inv=h, theta_map=t)
        for e, h, t in zip(
            arrays["eta_hat"], arrays["hessian_inv"], arrays["theta_map"]
        )
    ]
    return posteriors, list(meta["doc_ids"])
