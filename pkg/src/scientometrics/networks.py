"""Spearman correlation networks between topics and between journals."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import pandas as pd
from scipy.stats import rankdata

from src.common.artifacts import write_table
from src.corpus.documents import Document
from src.scientometrics.prevalence import GroupBy, aggregate_theta

logger = logging.getLogger(__name__)


@dataclass
class CorrelationNetwork:
    """Thresholded correlation graph.

    Attributes:
        graph: Undirected graph; edge attribute `rho` holds the signed correlation.
        threshold: Minimum rho (or |rho| when absolute) for an edge.
        absolute: Whether the threshold applies to |rho|.
        undefined: Nodes whose correlations are undefined (constant columns).
    """

    graph: nx.Graph
    threshold: float
    absolute: bool = False
    undefined: List[str] = field(default_factory=list)

    @property
    def nodes(self) -> List[str]:
        return list(self.graph.nodes)

    @property
    def edges(self) -> List[Tuple[str, str, float]]:
        return [(u, v, float(d["rho"])) for u, v, d in self.graph.edges(data=True)]

    def edge_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.edges, columns=["source", "target", "rho"])

    def save(
        self, directory: Union[str, Path], stem: str, config_hash: str
    ) -> List[Path]:
        """Write `<stem>_edges.csv` and `<stem>.gml`."""
        directory = Path(directory)
        edges_path = write_table(
            self.edge_frame(), directory / f"{stem}_edges.csv", config_hash
        )
        graph = self.graph.copy()
        graph.graph.update(
            {
                "config_hash": config_hash,
                "threshold": self.threshold,
                "absolute": int(self.absolute),
            }
        )
        for u, v, data in graph.edges(data=True):
            data["weight"] = data["rho"]
        gml_path = directory / f"{stem}.gml"
        nx.write_gml(graph, gml_path)
        return [edges_path, gml_path]


def spearman_matrix(columns: np.ndarray) -> np.ndarray:
    """Spearman correlations between columns, average ranks for ties."""
    ranks = rankdata(columns, axis=0, method="average")
    return np.atleast_2d(np.corrcoef(ranks, rowvar=False))


def spearman_network(
    columns: np.ndarray,
    labels: Sequence[str],
    threshold: float = 0.45,
    absolute: bool = False,
) -> CorrelationNetwork:
    """Correlate columns pairwise and keep edges with rho >= threshold.

    Constant columns stay as nodes without edges and are listed in `undefined`.

    Args:
        columns: n x m matrix, one variable per column.
        labels: One node label per column.
        threshold: Edge threshold.
        absolute: Threshold |rho| instead of rho.

    Returns:
        CorrelationNetwork: The graph.

    Raises:
        ValueError: With fewer than three rows or a label count mismatch.
    """
    columns = np.asarray(columns, dtype=float)
    if columns.ndim != 2 or columns.shape[0] < 3:
        raise ValueError("Spearman network needs at least three rows")
    if len(labels) != columns.shape[1]:
        raise ValueError(f"{len(labels)} labels for {columns.shape[1]} columns")

    graph = nx.Graph()
    graph.add_nodes_from(labels)
    constant = np.ptp(columns, axis=0) == 0.0
    undefined = [labels[i] for i in np.flatnonzero(constant)]
    if undefined:
        logger.warning(f"Correlation undefined for constant columns: {undefined}")

    defined = np.flatnonzero(~constant)
    if len(defined) >= 2:
        rho = spearman_matrix(columns[:, defined])
        for a in range(len(defined)):
            for b in range(a + 1, len(defined)):
                value = rho[a, b]
                if (abs(value) if absolute else value) >= threshold:
                    graph.add_edge(
                        labels[defined[a]], labels[defined[b]], rho=float(value)
                    )

    logger.info(
        f"Network: {graph.number_of_nodes()} nodes, "
        f"{graph.number_of_edges()} edges at {threshold}"
    )
    return CorrelationNetwork(
        graph=graph, threshold=threshold, absolute=absolute, undefined=undefined
    )


def topic_network(
    theta: np.ndarray,
    labels: Sequence[str],
    threshold: float = 0.45,
    absolute: bool = False,
) -> CorrelationNetwork:
    """Network between the topic columns of the prevalence matrix."""
    return spearman_network(theta, labels, threshold, absolute)


def journal_network(
    theta: np.ndarray,
    documents: Sequence[Document],
    threshold: float = 0.45,
    absolute: bool = False,
) -> CorrelationNetwork:
    """Network between journals' average prevalence vectors, correlated over topics."""
    table = aggregate_theta(theta, documents, GroupBy.JOURNAL)
    return spearman_network(table.values.T, table.units, threshold, absolute)
