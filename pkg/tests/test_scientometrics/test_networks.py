"""Tests for Spearman correlation networks."""

from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from src.common.artifacts import embedded_hash
from src.scientometrics.networks import (
    journal_network,
    spearman_matrix,
    spearman_network,
    topic_network,
)
from tests.test_utils.data_generators import make_document, random_simplex

HASH = "cd" * 32


@pytest.mark.unit
def test_hand_computed_rank_correlation():
    """Ranks (1,2,3) against (2,1,3) correlate at 0.5, which clears 0.45."""
    network = spearman_network(np.array([[1, 2], [2, 1], [3, 3]]), ["a", "b"])
    assert network.edges == [("a", "b", pytest.approx(0.5))]


@pytest.mark.unit
def test_negative_correlation_dropped():
    """A decreasing transform gives rho -1, dropped unless thresholding |rho|."""
    x = np.array([0.1, 0.5, 0.3, 0.9])
    columns = np.column_stack([x, x, -np.exp(x)])
    signed = spearman_network(columns, ["x", "same", "reversed"])
    assert [(u, v) for u, v, _ in signed.edges] == [("x", "same")]
    assert signed.edges[0][2] == pytest.approx(1.0)

    absolute = spearman_network(columns, ["x", "same", "reversed"], absolute=True)
    assert absolute.graph.number_of_edges() == 3
    assert absolute.graph["x"]["reversed"]["rho"] == pytest.approx(-1.0)


@pytest.mark.unit
def test_monotone_invariance():
    """Strictly increasing transforms leave rank correlations unchanged."""
    columns = random_simplex(30, 4, seed=6)
    transformed = np.column_stack(
        [
            np.log(columns[:, 0]),
            columns[:, 1] ** 3,
            np.exp(columns[:, 2]),
            columns[:, 3],
        ]
    )
    np.testing.assert_allclose(
        spearman_matrix(transformed), spearman_matrix(columns), atol=1e-12
    )


@pytest.mark.unit
def test_constant_column_flagged():
    """A constant column keeps its node but gets no edges."""
    columns = np.column_stack([[1.0, 2.0, 3.0], [5.0, 5.0, 5.0], [1.0, 2.0, 4.0]])
    network = spearman_network(columns, ["a", "flat", "b"])
    assert network.undefined == ["flat"]
    assert "flat" in network.nodes
    assert network.graph.degree["flat"] == 0
    assert network.graph.has_edge("a", "b")


@pytest.mark.unit
def test_invalid_input():
    """At least three rows and one label per column."""
    with pytest.raises(ValueError):
        spearman_network(np.ones((2, 2)), ["a", "b"])
    with pytest.raises(ValueError):
        spearman_network(np.ones((3, 2)), ["a"])


@pytest.mark.unit
def test_topic_network_structure():
    """Topic networks are undirected, loop-free and thresholded."""
    theta = random_simplex(100, 5, seed=2)
    network = topic_network(theta, [f"T{k}" for k in range(5)], threshold=-1.0)
    assert network.graph.number_of_edges() == 10
    assert nx.number_of_selfloops(network.graph) == 0
    assert all(rho >= -1.0 for _, _, rho in network.edges)


@pytest.mark.unit
def test_journal_network():
    """Identical journal averages link; disjoint one-hot averages do not."""
    theta = np.array(
        [
            [0.7, 0.1, 0.1, 0.1],
            [0.7, 0.1, 0.1, 0.1],
            [0.1, 0.7, 0.1, 0.1],
            [0.0, 1.0, 0.0, 0.0],
        ]
    )
    documents = [
        make_document("a", journal="jbf"),
        make_document("b", journal="jf"),
        make_document("c", journal="rfs"),
        make_document("d", journal="rfs"),
    ]
    network = journal_network(theta, documents)
    assert sorted(network.nodes) == ["jbf", "jf", "rfs"]
    assert [(u, v) for u, v, _ in network.edges] == [("jbf", "jf")]

    single = journal_network(
        theta, [make_document(str(i), journal="jf") for i in range(4)]
    )
    assert single.edges == []


@pytest.mark.unit
def test_save(temp_dir: Path):
    """Edge list and graph file both carry the configuration hash."""
    network = spearman_network(np.array([[1, 2], [2, 1], [3, 3]]), ["a", "b"])
    edges_path, gml_path = network.save(temp_dir, "topics", HASH)
    assert edges_path.name == "topics_edges.csv"
    assert embedded_hash(edges_path) == HASH
    assert embedded_hash(gml_path) == HASH
    graph = nx.read_gml(gml_path)
    assert graph["a"]["b"]["weight"] == pytest.approx(0.5)
