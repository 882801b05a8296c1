"""Configuration module for scitopics."""

import hashlib
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from pydantic import (
    BaseModel,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.common.errors import ConfigError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class LogLevel(str, Enum):
    """Log level enum."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class PathSettings(BaseModel):
    """Input and output locations."""

    corpus: Optional[str] = Field(None, description="JSON-lines corpus file")
    lemma_table: Optional[str] = Field(None, description="Token/root table")
    output_dir: str = Field("out", description="Root directory for stage artifacts")


class PreprocessSettings(BaseModel):
    """Text processing thresholds."""

    min_bigram: int = Field(
        100, ge=1, description="Minimum corpus count for two-word collocations"
    )
    min_trigram: int = Field(
        50, ge=1, description="Minimum corpus count for three-word collocations"
    )
    prune_lower: float = Field(
        0.001, ge=0.0, le=1.0, description="Drop tokens in fewer than this share"
    )
    prune_upper: float = Field(
        0.99, ge=0.0, le=1.0, description="Drop tokens in more than this share"
    )
    drop_stopwords: bool = Field(
        True, description="Drop stopwords when no part-of-speech tags are available"
    )
    year_min: int = Field(1992, description="Earliest admissible publication year")
    year_max: int = Field(2021, description="Latest admissible publication year")

    @model_validator(mode="after")
    def check_ranges(self) -> "PreprocessSettings":
        """Validate threshold ordering.

        Raises:
            ValueError: If the prune bounds or year range are inverted.
        """
        if not self.prune_lower < self.prune_upper:
            raise ValueError("prune_lower must be smaller than prune_upper")
        if self.year_min > self.year_max:
            raise ValueError("year_min must not exceed year_max")
        return self


class SplineSettings(BaseModel):
    """Year spline settings."""

    degree: int = Field(3, ge=1, description="B-spline degree")
    df: int = Field(10, ge=2, description="Number of spline basis columns")

    @model_validator(mode="after")
    def check_df(self) -> "SplineSettings":
        if self.df < self.degree + 1:
            raise ValueError("df must be at least degree + 1")
        return self


class InitMethod(str, Enum):
    """Starting point for the topic-word deviations."""

    DOCUMENTS = "documents"
    RANDOM = "random"


class DesignSettings(BaseModel):
    """Covariate design settings."""

    journals: Optional[List[str]] = Field(
        None, description="Admissible journal keys; corpus journals when unset"
    )
    spline: SplineSettings = Field(
        default_factory=SplineSettings, description="Year spline settings"
    )


class FitSettings(BaseModel):
    """Variational EM settings."""

    n_topics: int = Field(50, ge=2, description="Number of topics K")
    max_iterations: int = Field(200, ge=1, description="VEM iteration cap")
    min_iterations: int = Field(
        10, ge=1, description="Iterations run before the convergence check applies"
    )
    tolerance: float = Field(
        1e-5, gt=0.0, description="Relative bound change for convergence"
    )
    estep_tolerance: float = Field(
        1e-6, gt=0.0, description="Gradient norm tolerance of the document step"
    )
    estep_max_iterations: int = Field(
        200, ge=1, description="Iteration cap of the document step"
    )
    gamma_ridge_variance: float = Field(
        1.0, gt=0.0, description="Prior variance of the prevalence coefficients"
    )
    kappa_penalty_scale: float = Field(
        0.01, gt=0.0, description="Topic deviation penalty per token per word"
    )
    sigma_shrinkage: float = Field(
        0.5, ge=0.0, le=1.0, description="Pull of the covariance toward its diagonal"
    )
    init_sigma: float = Field(0.2, gt=0.0, description="Initial covariance scale")
    init_method: InitMethod = Field(
        InitMethod.DOCUMENTS, description="Topic start: random documents or noise"
    )
    init_documents: int = Field(
        5, ge=1, description="Documents pooled per topic by the documents start"
    )
    init_kappa_sd: float = Field(
        0.5, gt=0.0, description="Spread of random initial topic deviations"
    )


class SelectionSettings(BaseModel):
    """Topic-count sweep settings."""

    k_values: List[int] = Field(
        default_factory=lambda: list(range(20, 151, 10)),
        description="Topic counts to sweep",
    )
    top_m: int = Field(
        10, ge=1, description="Top words per topic for coherence and exclusivity"
    )
    frex_weight: float = Field(
        0.7, ge=0.0, le=1.0, description="Exclusivity weight in FREX"
    )

    @field_validator("k_values")
    @classmethod
    def check_k_values(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("k_values must not be empty")
        if any(k < 2 for k in v):
            raise ValueError("every K must be at least 2")
        return v


class AnalysisSettings(BaseModel):
    """Downstream analysis settings."""

    network_threshold: float = Field(
        0.45, ge=-1.0, le=1.0, description="Minimum Spearman rho for an edge"
    )
    absolute_correlation: bool = Field(
        False, description="Threshold on |rho| instead of signed rho"
    )
    n_compositions: int = Field(
        25, ge=2, description="Posterior draws for the method of composition"
    )
    top_m: int = Field(10, ge=1, description="Words per topic in label tables")
    top_documents: int = Field(5, ge=1, description="Documents per topic in labels")
    base_year: Optional[int] = Field(
        None, description="Reference year for trends; corpus minimum when unset"
    )
    tc_per_article: bool = Field(
        False, description="Regress per-article concentration, not yearly averages"
    )
    topics: Optional[List[int]] = Field(
        None, description="Topics to run effect models on; all when unset"
    )
    topic_labels: Optional[List[str]] = Field(None, description="Human topic labels")
    discarded_topics: List[int] = Field(
        default_factory=list, description="Topics excluded from reporting"
    )
    renormalize_retained: bool = Field(
        False, description="Renormalize prevalence over retained topics"
    )
    word_set_positive: List[str] = Field(
        default_factory=list, description="Keywords counted positively"
    )
    word_set_negative: List[str] = Field(
        default_factory=list, description="Keywords counted negatively"
    )
    team_extremes: int = Field(
        6, ge=1, description="Topics listed per sign in the team table"
    )


class SimulationSettings(BaseModel):
    """Synthetic corpus settings."""

    n_docs: int = Field(2000, ge=1, description="Number of documents")
    n_topics: int = Field(5, ge=2, description="True number of topics")
    vocab_size: int = Field(200, ge=2, description="Vocabulary size")
    mean_doc_length: int = Field(60, ge=1, description="Mean document length")
    trend: float = Field(0.05, description="Per-year slope of topic 0's log-odds")
    woman_effect: float = Field(
        0.0, description="Shift of topic 0's log-odds for teams with a woman"
    )
    sigma: float = Field(
        0.1, gt=0.0, description="Diagonal of the true prevalence covariance"
    )
    topic_concentration: float = Field(
        0.05, gt=0.0, description="Dirichlet concentration of the true topic rows"
    )
    journals: List[str] = Field(
        default_factory=lambda: ["jbf", "jf", "jfe", "rfs"],
        description="Journal keys",
    )
    year_min: int = Field(1992, description="First simulated year")
    year_max: int = Field(2021, description="Last simulated year")


class RunConfig(BaseSettings):
    """Run configuration for every pipeline stage."""

    model_config = SettingsConfigDict(
        env_prefix="SCITOPICS_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore",
    )

    seed: int = Field(..., ge=0, description="Base random seed (mandatory)")
    workers: int = Field(1, ge=1, description="Worker processes")
    log_level: LogLevel = Field(LogLevel.INFO, description="Log level")

    paths: PathSettings = Field(default_factory=PathSettings, description="Paths")
    preprocess: PreprocessSettings = Field(
        default_factory=PreprocessSettings, description="Text processing"
    )
    design: DesignSettings = Field(
        default_factory=DesignSettings, description="Covariate design"
    )
    fit: FitSettings = Field(
        default_factory=FitSettings, description="Model estimation"
    )
    selection: SelectionSettings = Field(
        default_factory=SelectionSettings, description="Topic-count sweep"
    )
    analysis: AnalysisSettings = Field(
        default_factory=AnalysisSettings, description="Analyses"
    )
    simulation: SimulationSettings = Field(
        default_factory=SimulationSettings, description="Simulation"
    )

    def config_hash(self) -> str:
        """Hash the settings that determine artifact contents.

        Worker count, log level and output location do not change results and
        are excluded.

        Returns:
            str: Hex SHA-256 of the canonical JSON dump.
        """
        excluded = {"workers": True, "log_level": True, "paths": {"output_dir"}}
        payload = self.model_dump(mode="json", exclude=excluded)
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def stage_dir(self, stage: str) -> Path:
        """Get the artifact directory of a stage.

        Args:
            stage: Stage name.

        Returns:
            Path: The stage directory (not created).
        """
        return Path(self.paths.output_dir) / stage


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_run_config(
    path: Optional[Union[str, Path]] = None, **overrides: Any
) -> RunConfig:
    """Load and validate a run configuration.

    Args:
        path: YAML file; when None only overrides and environment are used.
        **overrides: Values that take precedence over the file (e.g. seed,
            workers, or a nested dict such as paths={"output_dir": ...}).
            None values are ignored.

    Returns:
        RunConfig: The validated configuration.

    Raises:
        ConfigError: If the file is missing, unparsable or invalid.
    """
    data: Dict[str, Any] = {}
    if path is not None:
        config_path = Path(path)
        if not config_path.is_file():
            raise ConfigError(f"Config file not found: {config_path}")
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in {config_path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {config_path} must contain a mapping")

    data = _merge(data, {k: v for k, v in overrides.items() if v is not None})

    try:
        config = RunConfig(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e

    logger.debug(f"Loaded configuration with hash {config.config_hash()}")
    return config
