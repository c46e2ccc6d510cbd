"""Thresholded community graphs for visualisation.

Communities come from the full weighted correlation matrix; the threshold
only decides which edges are drawn.
"""

from __future__ import annotations

import numpy as np

from . import _rng
from .clustering import spectral_clustering
from .config import KMeansConfig
from .data import Segment, correlation

DEFAULT_THRESHOLD = 0.3


def community_graph(
    Y: np.ndarray,
    segment: Segment,
    k: int,
    threshold: float = DEFAULT_THRESHOLD,
    seed: int = 0,
    kmeans: KMeansConfig | None = None,
    absolute_weights: bool = False,
    labels: list[str] | None = None,
) -> dict:
    """Nodes with community numbers (1-based) and edges where ``|R_ij| > threshold``."""
    R = correlation(Y, segment)
    rng = _rng.stream(seed, _rng.GRAPH, segment.start, segment.end)
    assignment = spectral_clustering(R, k, kmeans, rng, absolute_weights)
    p = R.shape[0]
    names = labels if labels is not None else [str(i + 1) for i in range(p)]
    nodes = [{"id": names[i], "community": int(assignment.labels[i]) + 1} for i in range(p)]
    iu, ju = np.triu_indices(p, k=1)
    keep = np.abs(R[iu, ju]) > threshold
    edges = [
        {"source": names[i], "target": names[j], "weight": float(R[i, j])}
        for i, j in zip(iu[keep].tolist(), ju[keep].tolist())
    ]
    return {"segment": [segment.start, segment.end], "threshold": threshold, "k": k, "nodes": nodes, "edges": edges}


def to_dot(graph: dict, name: str = "network") -> str:
    """Render :func:`community_graph` output as an undirected DOT graph.

    Node ``group`` attributes carry the community so layout tools can colour
    by it.
    """
    lines = [f"graph {name} {{"]
    for key in ("segment", "threshold", "k"):
        lines.append(f'  // {key}: {graph[key]}')
    for node in graph["nodes"]:
        lines.append(f'  "{node["id"]}" [group={node["community"]}, community={node["community"]}];')
    for e in graph["edges"]:
        lines.append(f'  "{e["source"]}" -- "{e["target"]}" [weight={e["weight"]!r}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
