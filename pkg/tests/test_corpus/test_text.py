"""Tests for token-level text processing."""

import pytest

from src.common.errors import PosAlignmentError
from src.corpus.text import filter_pos, lemmatize, normalize_text, remove_stopwords


@pytest.mark.unit
@pytest.mark.parametrize(
    "raw, expected",
    [
        (
            "Flexible Arithmetic Asian Options!",
            ["flexible", "arithmetic", "asian", "options"],
        ),
        ("", []),
        ("A 2008 crisis, a X", ["crisis"]),
        ("  stock\tmarket \n returns ", ["stock", "market", "returns"]),
        ("post-crisis CEO's pay", ["post", "crisis", "ceo", "pay"]),
    ],
)
def test_normalize_text(raw, expected):
    """Numbers, punctuation, one-letter words and extra whitespace are removed."""
    assert normalize_text(raw) == expected


@pytest.mark.unit
def test_normalize_text_is_idempotent():
    """Normalizing the rejoined output changes nothing."""
    raw = "The 3 Fama-French factors: SMB, HML & a market factor (1993)."
    once = normalize_text(raw)
    assert normalize_text(" ".join(once)) == once


@pytest.mark.unit
def test_lemmatize():
    """Table lookup with identity fallback."""
    table = {"returns": "return", "markets": "market", "banks": "bank"}
    assert lemmatize(["returns", "markets"], table) == ["return", "market"]
    assert lemmatize(["return"], {}) == ["return"]
    assert lemmatize(["banks", "banks"], table) == ["bank", "bank"]


@pytest.mark.unit
def test_remove_stopwords():
    """English stopwords are dropped."""
    assert remove_stopwords(["the", "market", "of", "options"]) == ["market", "options"]


@pytest.mark.unit
def test_filter_pos():
    """Nouns, proper nouns and joined collocations survive."""
    assert filter_pos(["volatile", "market"], ["ADJ", "NOUN"]) == ["market"]
    assert filter_pos(["csr"], ["PROPN"]) == ["csr"]
    assert filter_pos(["stock_market", "rise"], ["NOUN", "VERB"]) == ["stock_market"]
    assert filter_pos(["asset_pricing"], ["VERB"]) == ["asset_pricing"]
    assert filter_pos(["volatile", "market"], None) == ["volatile", "market"]


@pytest.mark.unit
def test_filter_pos_misaligned():
    """Tag and token counts must match."""
    with pytest.raises(PosAlignmentError):
        filter_pos(["volatile", "market"], ["ADJ"])
