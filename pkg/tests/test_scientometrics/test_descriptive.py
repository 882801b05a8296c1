"""Tests for descriptive statistics."""

import math

import pytest

from src.corpus.documents import GenderFlag
from src.scientometrics.descriptive import descriptive_stats, documents_frame
from tests.test_utils.data_generators import make_document


@pytest.fixture
def documents():
    return [
        make_document(
            "a",
            year=2000,
            journal="jf",
            n_authors=2,
            has_woman=GenderFlag.YES,
            has_top_tier=True,
        ),
        make_document("b", year=2001, journal="jf", n_authors=4),
        make_document(
            "c",
            year=2000,
            journal="rfs",
            n_authors=1,
            has_woman=GenderFlag.UNKNOWN,
            has_top_tier=True,
        ),
        make_document("d", year=2003, journal="jf", n_authors=3),
        make_document(
            "e", year=2003, journal="jf", n_authors=3, has_woman=GenderFlag.YES
        ),
    ]


@pytest.mark.unit
def test_yearly_counts(documents):
    """Hand-counted yearly articles, outlets and team shares; empty years are absent."""
    yearly = descriptive_stats(documents).yearly
    assert yearly["year"].tolist() == [2000, 2001, 2003]
    assert yearly["articles"].tolist() == [2, 1, 2]
    assert yearly["outlets"].tolist() == [2, 1, 1]
    row = yearly.iloc[0]
    assert row["mean_authors"] == pytest.approx(1.5)
    assert row["share_woman"] == pytest.approx(0.5)
    assert row["share_gender_unknown"] == pytest.approx(0.5)
    assert row["share_top_tier"] == pytest.approx(1.0)
    assert yearly.iloc[2]["share_woman"] == pytest.approx(0.5)


@pytest.mark.unit
def test_journal_growth(documents):
    """Growth compares with the journal's previous observed year."""
    stats = descriptive_stats(documents)
    jf = stats.journal_year[stats.journal_year["journal"] == "jf"]
    assert jf["articles"].tolist() == [1, 1, 2]
    assert math.isnan(jf["growth_rate"].iloc[0])
    assert jf["growth_rate"].iloc[1:].tolist() == pytest.approx([0.0, 1.0])

    journals = stats.journals.set_index("journal")
    assert journals.loc["jf", "articles"] == 4
    assert journals.loc["jf", "mean_yearly_articles"] == pytest.approx(4 / 3)
    assert journals.loc["jf", "mean_growth_rate"] == pytest.approx(0.5)
    assert math.isnan(journals.loc["rfs", "mean_growth_rate"])
    assert stats.growth_summary["mean_growth_rate"] == pytest.approx(0.5)


@pytest.mark.unit
def test_empty_corpus():
    """No documents, empty tables."""
    stats = descriptive_stats([])
    assert stats.yearly.empty
    assert math.isnan(stats.growth_summary["mean_growth_rate"])


@pytest.mark.unit
def test_documents_frame(documents):
    """One row per document with boolean team flags."""
    frame = documents_frame(documents)
    assert len(frame) == 5
    assert frame["woman"].tolist() == [True, False, False, False, True]
    assert frame["gender_unknown"].sum() == 1


@pytest.mark.unit
def test_yearly_median_growth():
    """Each year reports the median of the journals' growth rates, not their mean."""
    counts = {"jf": (1, 2), "rfs": (2, 1), "jbf": (1, 1)}
    documents = [
        make_document(f"{journal}{year}{i}", year=year, journal=journal)
        for journal, per_year in counts.items()
        for year, n in zip((2000, 2001), per_year)
        for i in range(n)
    ]
    yearly = descriptive_stats(documents).yearly.set_index("year")
    assert math.isnan(yearly.loc[2000, "median_growth_rate"])
    assert yearly.loc[2001, "median_growth_rate"] == pytest.approx(0.0)
