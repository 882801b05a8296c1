"""Tests for the effect model designs."""

import numpy as np
import pytest

from src.corpus.documents import GenderFlag
from src.effects.models import (
    JournalConcentration,
    drop_constant_columns,
    model_journal_tc,
    model_journal_topic_trend,
    model_team,
    model_trend,
    model_yearly,
    resolve_base_year,
)
from src.scientometrics.concentration import topic_concentration
from tests.test_utils.data_generators import make_document


@pytest.fixture
def documents():
    return [
        make_document(
            "a", year=2000, journal="jf", n_authors=1, has_woman=GenderFlag.YES
        ),
        make_document("b", year=2001, journal="jf", n_authors=2),
        make_document(
            "c", year=2003, journal="jf", n_authors=3, has_woman=GenderFlag.UNKNOWN
        ),
        make_document("d", year=2001, journal="rfs", n_authors=2),
        make_document(
            "e", year=2003, journal="rfs", n_authors=4, has_woman=GenderFlag.YES
        ),
        make_document("f", year=2002, journal="jbf", n_authors=1),
    ]


@pytest.mark.unit
def test_base_year(documents):
    """The corpus minimum unless configured."""
    assert resolve_base_year(documents) == 2000
    assert resolve_base_year(documents, 1995) == 1995
    with pytest.raises(ValueError):
        resolve_base_year([])


@pytest.mark.unit
def test_trend_design(documents):
    """Intercept and year offset from the base year."""
    spec = model_trend(documents, topic=2)
    assert spec.names == ["intercept", "trend"]
    np.testing.assert_array_equal(spec.x[:, 1], [0, 1, 3, 1, 3, 2])
    assert spec.unit == "topic_2" and spec.transform_intercept
    with pytest.raises(ValueError):
        model_trend(
            [make_document("x", year=2000), make_document("y", year=2000)], topic=0
        )


@pytest.mark.unit
def test_yearly_design_flags_empty_years():
    """Years without documents lose their indicator."""
    documents = [
        make_document(str(i), year=y) for i, y in enumerate([2000, 2000, 2001, 2003])
    ]
    spec = model_yearly(documents, topic=0)
    assert spec.names == ["intercept", "year_2001", "year_2003"]
    assert spec.flags == ["year_2002: no documents, indicator dropped"]
    np.testing.assert_array_equal(spec.x[:, 2], [0, 0, 0, 1])
    assert spec.percent == ("year_2001", "year_2003")
    with pytest.raises(ValueError):
        model_yearly(documents, topic=0, base_year=1999)


@pytest.mark.unit
def test_journal_concentration_skips_short_series(documents):
    """Journals observed in fewer than three years are skipped and reported."""
    specs, skipped = model_journal_tc(documents)
    assert [s.unit for s in specs] == ["jf"]
    assert len(skipped) == 2
    assert skipped[0].startswith("jbf")
    np.testing.assert_array_equal(specs[0].x[:, 1], [0, 1, 3])


@pytest.mark.unit
def test_journal_concentration_response():
    """The yearly response is the concentration of the yearly mean prevalence."""
    theta = np.array([[0.6, 0.4], [0.2, 0.8], [0.5, 0.5]])
    yearly = JournalConcentration(groups=(np.array([0, 1]), np.array([2])))
    np.testing.assert_allclose(
        yearly(theta), [topic_concentration(np.array([0.4, 0.6])), 0.0], atol=1e-12
    )
    per_article = JournalConcentration(groups=(np.array([0, 2]),), per_article=True)
    assert per_article(theta).shape == (2,)


@pytest.mark.unit
def test_journal_concentration_per_article(documents):
    """Per-article responses use one row per article."""
    specs, _ = model_journal_tc(documents, per_article=True, min_years=2)
    by_unit = {s.unit: s for s in specs}
    assert set(by_unit) == {"jf", "rfs"}
    assert by_unit["rfs"].x.shape == (2, 2)


@pytest.mark.unit
def test_journal_topic_trend(documents):
    """Journal intercepts and slopes; a single-year journal keeps only its intercept."""
    spec = model_journal_topic_trend(documents, topic=1)
    assert spec.names == [
        "intercept_jbf",
        "intercept_jf",
        "intercept_rfs",
        "trend_jf",
        "trend_rfs",
    ]
    assert spec.flags == ["trend_jbf: single year, slope dropped"]
    np.testing.assert_array_equal(spec.x[:, 3], [0, 1, 3, 0, 0, 0])
    assert np.linalg.matrix_rank(spec.x) == 5


@pytest.mark.unit
def test_team_design_drops_constant_columns(documents):
    """A characteristic that never varies is dropped and flagged."""
    spec = model_team(documents, topic=0)
    assert spec.names == ["intercept", "trend", "n_authors", "woman", "gender_unknown"]
    assert spec.flags == ["top_tier: constant across the corpus, column dropped"]
    assert spec.percent == ("n_authors", "woman")
    np.testing.assert_array_equal(spec.x[:, 3], [1, 0, 0, 0, 1, 0])


@pytest.mark.unit
def test_drop_constant_columns_keeps_intercept():
    """The intercept survives even though it is constant."""
    x = np.column_stack([np.ones(3), [1.0, 2.0, 3.0], np.zeros(3)])
    kept, names, flags = drop_constant_columns(x, ["intercept", "a", "b"])
    assert names == ["intercept", "a"]
    assert kept.shape == (3, 2)
    assert len(flags) == 1
