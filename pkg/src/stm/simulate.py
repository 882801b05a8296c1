"""Synthetic corpora drawn from the generative model."""

import logging
import string
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from src.common.config import SimulationSettings
from src.corpus.documents import Document, GenderFlag
from src.corpus.dtm import SparseDtm
from src.covariates.design import DesignMatrix, build_design_matrix
from src.covariates.splines import make_spline_spec
from src.stm.model import StmModel, softmax_prevalence
from src.stm.sampling import covariance_factor

logger = logging.getLogger(__name__)

WORD_PREFIX = "zq"
BETA_FLOOR = 1e-10


def synthetic_word(index: int, width: int = 3) -> str:
    """Alphabetic word for a vocabulary index, e.g. 0 -> 'zqaaa'."""
    letters = []
    for _ in range(width):
        index, r = divmod(index, 26)
        letters.append(string.ascii_lowercase[r])
    return WORD_PREFIX + "".join(reversed(letters))


def generate_corpus(
    model: StmModel,
    design: DesignMatrix,
    doc_lengths: Sequence[int],
    seed: int,
    doc_ids: Optional[Sequence[str]] = None,
) -> Tuple[SparseDtm, np.ndarray, np.ndarray]:
    """Sample documents from the model.

    theta_d ~ LogisticNormal(x_d gamma, Sigma); each token's topic is drawn
    from theta_d and its word from that topic's row of beta.

    Args:
        model: True parameters.
        design: Covariate rows, one per document.
        doc_lengths: Tokens per document (all >= 1).
        seed: Random seed.
        doc_ids: Row ids; generated when None.

    Returns:
        Tuple of (count matrix, true theta D x K, true topic counts D x K).

    Raises:
        ValueError: If lengths are not positive or do not match the design.
    """
    lengths = np.asarray(doc_lengths, dtype=np.int64)
    if np.any(lengths < 1):
        raise ValueError("Every document length must be at least 1")
    if lengths.shape[0] != design.n_docs:
        raise ValueError(f"{lengths.shape[0]} lengths for {design.n_docs} design rows")

    rng = np.random.default_rng(seed)
    n_docs = design.n_docs
    mu = design.rows @ model.gamma
    eta = mu + rng.standard_normal(mu.shape) @ covariance_factor(model.sigma).T
    theta = softmax_prevalence(eta)
    beta = model.beta

    z_counts = np.zeros((n_docs, model.n_topics), dtype=np.int64)
    rows: List[np.ndarray] = []
    for d in range(n_docs):
        z_counts[d] = rng.multinomial(lengths[d], theta[d])
        words = np.zeros(model.vocab_size, dtype=np.int64)
        for k in np.flatnonzero(z_counts[d]):
            words += rng.multinomial(z_counts[d, k], beta[k])
        rows.append(words)

    matrix = sp.csr_matrix(np.vstack(rows))
    if doc_ids is None:
        doc_ids = [f"sim{d:06d}" for d in range(n_docs)]
    ids = list(doc_ids)
    return SparseDtm(matrix=matrix, doc_ids=ids), theta, z_counts


@dataclass
class SimulatedStudy:
    """A synthetic corpus with its latent truths."""

    documents: List[Document]
    design: DesignMatrix
    model: StmModel
    dtm: SparseDtm
    theta: np.ndarray
    z_counts: np.ndarray
    vocabulary: List[str]
    word_columns: np.ndarray

    @property
    def observed_beta(self) -> np.ndarray:
        """True topic-word rows restricted to the observed words and renormalized."""
        beta = self.model.beta[:, self.word_columns]
        return beta / beta.sum(axis=1, keepdims=True)


def _true_gamma(
    design: DesignMatrix, settings: SimulationSettings, rng: np.random.Generator
) -> np.ndarray:
    """Topic 0 gets a linear log-odds trend in the year and an optional woman effect."""
    n_topics = settings.n_topics
    gamma = np.zeros((design.n_covariates, n_topics - 1))
    spline_cols = design.spline_columns()
    offsets = rng.normal(0.0, 0.3, size=n_topics - 1)
    # Spline rows reproduce any linear function of the year via the knot averages.
    greville = design.spline_spec.greville()
    for j, col in enumerate(spline_cols):
        gamma[col, :] = offsets
        gamma[col, 0] += settings.trend * (greville[j] - settings.year_min)
    gamma[design.column_labels.index("woman"), 0] += settings.woman_effect
    return gamma


def simulate_study(
    settings: SimulationSettings, seed: int, spline_degree: int = 3, spline_df: int = 10
) -> SimulatedStudy:
    """Draw documents, covariates, true parameters and counts.

    Args:
        settings: Corpus size, effects and covariate ranges.
        seed: Random seed.
        spline_degree: Year spline degree.
        spline_df: Year spline columns.

    Returns:
        SimulatedStudy: Everything needed for a recovery check.
    """
    rng = np.random.default_rng(seed)
    n_docs, n_topics = settings.n_docs, settings.n_topics
    vocab_size = settings.vocab_size
    ids = [f"sim{d:06d}" for d in range(n_docs)]

    years = rng.integers(settings.year_min, settings.year_max + 1, size=n_docs)
    years[0], years[-1] = settings.year_min, settings.year_max
    journals = rng.choice(sorted(settings.journals), size=n_docs)
    n_authors = 1 + rng.poisson(1.5, size=n_docs)
    flags = [GenderFlag.YES, GenderFlag.NO, GenderFlag.UNKNOWN]
    draws = rng.choice(len(flags), p=[0.3, 0.6, 0.1], size=n_docs)
    gender = [flags[i] for i in draws]
    top_tier = rng.random(n_docs) < 0.3

    skeleton = [
        Document(
            id=ids[d],
            year=int(years[d]),
            journal=str(journals[d]),
            n_authors=int(n_authors[d]),
            has_woman=gender[d],
            has_top_tier=bool(top_tier[d]),
        )
        for d in range(n_docs)
    ]
    spec = make_spline_spec(years, degree=spline_degree, df=spline_df)
    design = build_design_matrix(skeleton, spec, settings.journals)

    beta = rng.dirichlet(
        np.full(vocab_size, settings.topic_concentration), size=n_topics
    )
    beta = np.maximum(beta, BETA_FLOOR)
    beta /= beta.sum(axis=1, keepdims=True)
    m = np.log(beta.mean(axis=0))
    model = StmModel(
        gamma=_true_gamma(design, settings, rng),
        sigma=np.eye(n_topics - 1) * settings.sigma,
        m=m,
        kappa=np.log(beta) - m[None, :],
        seed=seed,
        column_labels=list(design.column_labels),
    )

    lengths = np.maximum(1, rng.poisson(settings.mean_doc_length, size=n_docs))
    dtm, theta, z_counts = generate_corpus(
        model, design, lengths, int(rng.integers(2**32)), doc_ids=ids
    )

    # Words never drawn are left out so every matrix column has a positive count.
    word_columns = np.flatnonzero(np.asarray(dtm.matrix.sum(axis=0)).ravel() > 0)
    dtm = SparseDtm(matrix=dtm.matrix[:, word_columns].tocsr(), doc_ids=dtm.doc_ids)
    vocabulary = [synthetic_word(int(v)) for v in word_columns]
    documents = []
    for d, doc in enumerate(skeleton):
        words, counts = dtm.row(d)
        tokens = np.repeat(np.asarray(vocabulary)[words], counts.astype(np.int64))
        tokens = tokens[rng.permutation(tokens.shape[0])]
        documents.append(doc.model_copy(update={"abstract": " ".join(tokens)}))

    logger.info(f"Simulated {n_docs} documents, K={n_topics}, V={vocab_size}")
    return SimulatedStudy(
        documents, design, model, dtm, theta, z_counts, vocabulary, word_columns
    )
