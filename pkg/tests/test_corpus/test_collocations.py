"""Tests for collocation detection and replacement."""

import pytest

from src.corpus.collocations import (
    Collocation,
    CollocationTable,
    Detector,
    apply_collocations,
    detect_collocations,
)


def _table(*phrases):
    return CollocationTable(
        [Collocation(tuple(p), 100, Detector.FREQUENCY_RAKE) for p in phrases]
    )


@pytest.mark.unit
def test_frequent_bigram_retained():
    """A bigram occurring 150 times is kept; one occurring 99 times is not."""
    corpus = [["stock", "market", "of", "asset", "pricing"]] * 99
    corpus += [["stock", "market"]] * 51
    table = detect_collocations(corpus, min_bigram=100, min_trigram=50)
    lookup = table.lookup()

    assert lookup[("stock", "market")].count == 150
    assert lookup[("stock", "market")].detector == Detector.FREQUENCY_RAKE
    assert ("asset", "pricing") not in lookup
    assert table.pos_skipped


@pytest.mark.unit
def test_trigram_at_threshold():
    """A trigram occurring exactly min_trigram times is kept."""
    corpus = [["capital", "asset", "pricing", "the", "model"]] * 50
    table = detect_collocations(corpus, min_bigram=100, min_trigram=50)
    phrases = {c.words for c in table.phrases}
    assert ("capital", "asset", "pricing") in phrases
    assert all(len(c.words) in (2, 3) for c in table.phrases)


@pytest.mark.unit
def test_runs_split_on_stopwords():
    """Candidates never span a stopword."""
    corpus = [["market", "of", "options"]] * 10
    table = detect_collocations(corpus, min_bigram=1, min_trigram=1)
    assert ("market", "of") not in table.lookup()
    assert ("market", "of", "options") not in table.lookup()


@pytest.mark.unit
def test_pos_patterns():
    """Adjective-noun patterns are found when tags are present."""
    corpus = [["implied", "volatility", "rises"]] * 3
    tags = [["ADJ", "NOUN", "VERB"]] * 3
    table = detect_collocations(corpus, tags, min_bigram=3, min_trigram=3)
    lookup = table.lookup()
    assert not table.pos_skipped
    assert ("implied", "volatility") in lookup
    # Equal counts keep the frequency entry.
    assert lookup[("implied", "volatility")].detector == Detector.FREQUENCY_RAKE


@pytest.mark.unit
def test_pos_pattern_across_stopword():
    """Noun-preposition-noun phrases come from the tagged detector only."""
    corpus = [["return", "on", "equity"]] * 3
    tags = [["NOUN", "ADP", "NOUN"]] * 3
    table = detect_collocations(corpus, tags, min_bigram=3, min_trigram=3)
    assert table.lookup()[("return", "on", "equity")].detector == Detector.POS_PATTERN


@pytest.mark.unit
def test_ordering():
    """Phrases are ordered by count then lexicographically."""
    corpus = (
        [["bond", "yield"]] * 3 + [["credit", "risk"]] * 5 + [["asset", "price"]] * 3
    )
    table = detect_collocations(corpus, min_bigram=1, min_trigram=1)
    assert [c.words for c in table.phrases] == [
        ("credit", "risk"),
        ("asset", "price"),
        ("bond", "yield"),
    ]


@pytest.mark.unit
def test_invalid_input():
    """Empty corpora and zero thresholds are rejected."""
    with pytest.raises(ValueError):
        detect_collocations([])
    with pytest.raises(ValueError):
        detect_collocations([["a", "b"]], min_bigram=0)


@pytest.mark.unit
def test_apply_collocations():
    """Left-to-right, longest-match-first, non-overlapping replacement."""
    table = _table(("stock", "market"), ("exchange", "rate"))
    assert apply_collocations(["stock", "market", "return"], table) == [
        "stock_market",
        "return",
    ]
    assert apply_collocations(["stock", "market"], CollocationTable()) == [
        "stock",
        "market",
    ]
    assert apply_collocations(["exchange", "rate", "exchange", "rate"], table) == [
        "exchange_rate",
        "exchange_rate",
    ]


@pytest.mark.unit
def test_apply_collocations_longest_first():
    """A trigram beats the bigram it starts with."""
    table = _table(
        ("capital", "asset"), ("capital", "asset", "pricing"), ("asset", "pricing")
    )
    tokens = ["capital", "asset", "pricing", "model"]
    out = apply_collocations(tokens, table)
    assert out == ["capital_asset_pricing", "model"]
    assert len(out) <= len(tokens)
