"""Structural topic model: generative sampler, variational EM and posterior draws."""

from src.stm.bound import document_bounds, elbo
from src.stm.estep import (
    EStepContext,
    e_step_document,
    gradient,
    negative_hessian,
    objective,
)
from src.stm.fit import (
    FitResult,
    align_topics,
    fit,
    mean_theta_correlation,
    total_variation,
)
from src.stm.io import load_model, load_posteriors, save_model, save_posteriors
from src.stm.model import (
    DocPosterior,
    StmModel,
    init_model,
    retained_theta,
    softmax_prevalence,
    theta_matrix,
)
from src.stm.mstep import m_step
from src.stm.sampling import sample_theta, sample_theta_matrix
from src.stm.simulate import SimulatedStudy, generate_corpus, simulate_study

__all__ = [
    "DocPosterior",
    "EStepContext",
    "FitResult",
    "SimulatedStudy",
    "StmModel",
    "align_topics",
    "document_bounds",
    "e_step_document",
    "elbo",
    "fit",
    "generate_corpus",
    "gradient",
    "init_model",
    "load_model",
    "load_posteriors",
    "m_step",
    "mean_theta_correlation",
    "negative_hessian",
    "objective",
    "retained_theta",
    "sample_theta",
    "sample_theta_matrix",
    "save_model",
    "save_posteriors",
    "simulate_study",
    "softmax_prevalence",
    "theta_matrix",
    "total_variation",
]
