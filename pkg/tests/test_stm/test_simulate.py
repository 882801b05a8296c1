"""Tests for synthetic corpora."""

import numpy as np
import pytest

from src.common.config import SimulationSettings
from src.corpus.documents import GenderFlag
from src.corpus.text import normalize_text
from src.stm.model import softmax_prevalence
from src.stm.simulate import generate_corpus, simulate_study, synthetic_word
from tests.test_utils.data_generators import small_study


@pytest.mark.unit
def test_synthetic_words():
    """Vocabulary indices map to ordered alphabetic words."""
    assert synthetic_word(0) == "zqaaa"
    assert synthetic_word(1) == "zqaab"
    assert synthetic_word(26) == "zqaba"
    words = [synthetic_word(i) for i in range(300)]
    assert words == sorted(words)
    assert all(normalize_text(w) == [w] for w in words[:5])


@pytest.mark.unit
def test_generate_corpus_lengths(simulated_study):
    """Row sums equal the requested lengths and topic counts partition the tokens."""
    lengths = np.arange(1, simulated_study.design.n_docs + 1)
    dtm, theta, z_counts = generate_corpus(
        simulated_study.model, simulated_study.design, lengths, seed=3
    )
    np.testing.assert_array_equal(dtm.doc_lengths, lengths)
    np.testing.assert_array_equal(z_counts.sum(axis=1), lengths)
    np.testing.assert_allclose(theta.sum(axis=1), 1.0)


@pytest.mark.unit
def test_generate_corpus_rejects_bad_lengths(simulated_study):
    """Lengths must be positive and one per design row."""
    n = simulated_study.design.n_docs
    with pytest.raises(ValueError):
        generate_corpus(simulated_study.model, simulated_study.design, [0] * n, seed=0)
    with pytest.raises(ValueError):
        generate_corpus(
            simulated_study.model, simulated_study.design, [5] * (n - 1), seed=0
        )


@pytest.mark.unit
def test_study_consistency(simulated_study):
    """Documents, matrix and truths describe the same corpus."""
    study = simulated_study
    assert len(study.documents) == study.dtm.n_docs == study.theta.shape[0]
    assert study.dtm.n_tokens == len(study.vocabulary)
    assert study.vocabulary == sorted(study.vocabulary)
    assert np.all(np.asarray(study.dtm.matrix.sum(axis=0)).ravel() > 0)
    np.testing.assert_allclose(study.observed_beta.sum(axis=1), 1.0)

    doc = study.documents[3]
    assert len(doc.abstract.split()) == int(study.dtm.doc_lengths[3])
    assert [d.year for d in (study.documents[0], study.documents[-1])] == [1992, 2021]


@pytest.mark.unit
def test_study_is_seeded():
    """Same seed, same corpus."""
    a = small_study(seed=21, n_docs=40)
    b = small_study(seed=21, n_docs=40)
    assert (a.dtm.matrix != b.dtm.matrix).nnz == 0
    assert [d.abstract for d in a.documents] == [d.abstract for d in b.documents]


@pytest.mark.unit
def test_generate_corpus_with_zero_covariance(simulated_study):
    """A zero covariance gives every document its mean prevalence."""
    model = simulated_study.model.with_params(
        sigma=np.zeros_like(simulated_study.model.sigma)
    )
    lengths = np.full(simulated_study.design.n_docs, 10)
    _, theta, _ = generate_corpus(model, simulated_study.design, lengths, seed=4)
    np.testing.assert_allclose(
        theta, softmax_prevalence(simulated_study.design.rows @ model.gamma)
    )


@pytest.mark.unit
def test_default_simulation_mixes_gender_flags():
    """The default simulator draws all three gender flags as validated documents."""
    settings = SimulationSettings(
        n_docs=300, n_topics=3, vocab_size=40, mean_doc_length=20
    )
    study = simulate_study(settings, seed=101)
    flags = [doc.has_woman for doc in study.documents]
    assert all(isinstance(flag, GenderFlag) for flag in flags)
    assert set(flags) == {GenderFlag.YES, GenderFlag.NO, GenderFlag.UNKNOWN}
    assert study.design.column("gender_unknown").sum() > 0
