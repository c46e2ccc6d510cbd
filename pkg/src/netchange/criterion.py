"""Centroid expansion and the singular-value similarity criterion.

Two clustered networks on the same nodes are compared through their
centroid expansions ``U_a`` and ``U_b`` (``p x K``, row ``i`` = centroid of
node ``i``'s community). The criterion is the sum of the singular values of
``U_a.T @ U_b``, i.e. its nuclear norm. Small values mean dissimilar
community structure. The columns of ``U`` are not orthonormalised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _rng
from .clustering import ClusterAssignment, spectral_clustering
from .config import DetectionConfig, KMeansConfig
from .data import Segment, correlation
from .errors import ContractError, DegenerateColumnError

# singular values below this are reported as exact zeros
SV_FLOOR = 1e-14


@dataclass(frozen=True)
class CriterionValue:
    gamma: float
    singular_values: np.ndarray

    def __float__(self) -> float:
        return self.gamma


def centroid_expand(assignment: ClusterAssignment) -> np.ndarray:
    """``p x K`` matrix whose row ``i`` is the centroid of node ``i``'s community."""
    return assignment.centroids[assignment.labels]


def gamma(U_left: np.ndarray, U_right: np.ndarray) -> CriterionValue:
    """Nuclear norm of ``U_left.T @ U_right``.

    Invariant under right-multiplication of either argument by an orthogonal
    matrix and symmetric in its arguments.
    """
    U_left = np.asarray(U_left, dtype=float)
    U_right = np.asarray(U_right, dtype=float)
    if U_left.ndim != 2 or U_left.shape != U_right.shape:
        raise ContractError(f"shape mismatch: {U_left.shape} vs {U_right.shape}")
    sv = np.linalg.svd(U_left.T @ U_right, compute_uv=False)
    sv[sv < SV_FLOOR] = 0.0
    return CriterionValue(float(sv.sum()), sv)


def network_similarity(U_a: np.ndarray, U_b: np.ndarray) -> CriterionValue:
    """Similarity of two networks given as centroid expansions.

    Same quantity as :func:`gamma`; used to compare networks from different
    subjects or partitions rather than across a split.
    """
    return gamma(U_a, U_b)


def similarity_matrix(expansions: list[np.ndarray]) -> np.ndarray:
    """Symmetric matrix of pairwise similarities, self-similarity on the diagonal."""
    n = len(expansions)
    S = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            S[i, j] = S[j, i] = network_similarity(expansions[i], expansions[j]).gamma
    return S


def network_expansion(
    X: np.ndarray,
    k: int,
    rng: np.random.Generator,
    kmeans: KMeansConfig | None = None,
    absolute_weights: bool = False,
) -> np.ndarray:
    """Correlate the rows of ``X``, cluster the nodes, return the centroid expansion."""
    A = spectral_clustering(correlation(X), k, kmeans, rng, absolute_weights)
    return centroid_expand(A)


def split_gamma(
    X: np.ndarray,
    delta: int,
    k: int,
    rng: np.random.Generator,
    kmeans: KMeansConfig | None = None,
    absolute_weights: bool = False,
) -> float:
    """Criterion between the networks of ``X[:delta]`` and ``X[delta:]``."""
    U_left = network_expansion(X[:delta], k, rng, kmeans, absolute_weights)
    U_right = network_expansion(X[delta:], k, rng, kmeans, absolute_weights)
    return gamma(U_left, U_right).gamma


def candidate_gamma(Y: np.ndarray, segment: Segment, position: int, config: DetectionConfig) -> float:
    """Criterion for splitting ``segment`` after global row ``position``.

    The clustering randomness is keyed by (seed, segment, position), so the
    value is reproducible regardless of evaluation order.
    """
    X = segment.rows(Y)
    rng = _rng.stream(config.seed, _rng.SWEEP, segment.start, segment.end, position)
    try:
        return split_gamma(X, position - segment.start + 1, config.k, rng, config.kmeans, config.absolute_weights)
    except DegenerateColumnError as exc:
        raise DegenerateColumnError(exc.column, candidate=position) from None
