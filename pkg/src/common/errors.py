"""Exception hierarchy for scitopics.

Library code raises these; only the command-line layer turns them into exit codes.
"""

from typing import Any, List, Optional, Sequence

import numpy as np


class ScitopicsError(Exception):
    """Base class for all scitopics errors."""

    exit_code: int = 1


class ConfigError(ScitopicsError):
    """Raised when a run configuration fails validation."""

    exit_code = 2


class StageInputError(ScitopicsError):
    """Raised when a stage input artifact is missing or unreadable."""

    exit_code = 3

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class NumericalError(ScitopicsError):
    """Raised when an optimizer or linear solve fails."""

    exit_code = 4


class EStepConvergenceError(NumericalError):
    """Raised when the per-document optimizer does not reach its tolerance."""

    def __init__(self, message: str, last_iterate: np.ndarray, gradient_norm: float):
        super().__init__(f"{message} (gradient norm {gradient_norm:.3e})")
        self.last_iterate = last_iterate
        self.gradient_norm = gradient_norm


class SingularSystemError(NumericalError):
    """Raised when the prevalence regression system cannot be solved."""

    def __init__(self, message: str):
        super().__init__(f"{message}; try a larger gamma_ridge_variance")


class RankDeficientDesignError(NumericalError, ValueError):
    """Raised when a regression design matrix is not of full column rank."""

    def __init__(self, message: str, rank: int, n_columns: int):
        super().__init__(f"{message}: rank {rank} < {n_columns} columns")
        self.rank = rank
        self.n_columns = n_columns


class BetaRegressionConvergenceError(NumericalError):
    """Raised when beta regression maximum likelihood does not converge."""

    def __init__(self, message: str, trace: Optional[Sequence[Any]] = None):
        super().__init__(message)
        self.trace: List[Any] = list(trace or [])


class CompositionFailureError(NumericalError):
    """Raised when too many composition draws fail."""

    def __init__(self, failed: int, total: int):
        super().__init__(f"{failed} of {total} composition draws failed")
        self.failed = failed
        self.total = total


class EmptyVocabularyError(ScitopicsError, ValueError):
    """Raised when pruning removes every token."""

    exit_code = 4


class PosAlignmentError(ScitopicsError, ValueError):
    """Raised when part-of-speech tags do not line up with tokens."""

    exit_code = 3


class UnknownJournalError(ScitopicsError, ValueError):
    """Raised when a document references a journal outside the configured list."""

    exit_code = 3

    def __init__(self, doc_id: str, journal: str):
        super().__init__(f"Document {doc_id!r} has unknown journal {journal!r}")
        self.doc_id = doc_id
        self.journal = journal


class OutOfRangeYearError(ScitopicsError, ValueError):
    """Raised when a year falls outside the configured or spline range."""

    exit_code = 3


class DuplicateKError(ScitopicsError, ValueError):
    """Raised when a topic-count sweep lists the same K twice."""

    exit_code = 2
