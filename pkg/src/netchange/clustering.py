"""k-means on embedding rows and the spectral-clustering composition.

Labels are 0-based internally (``0..K-1``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .config import KMeansConfig
from .errors import BoundsError, DegenerateInputError
from .spectral import embed, laplacian


@dataclass(frozen=True)
class ClusterAssignment:
    """Community labels and centroids from k-means.

    Attributes
    ----------
    labels : ndarray of int, shape (p,)
        Community of each node, in ``0..K-1``.
    centroids : ndarray, shape (K, d)
        Row ``k`` is the mean of the points labelled ``k``.
    inertia : float
        Within-cluster sum of squared distances.
    converged : bool
        Whether the winning restart met the tolerance before ``max_iter``.
    objective_trace : tuple of float
        Objective of the winning restart after each assignment step.
    """

    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    converged: bool = True
    n_iter: int = 0
    objective_trace: tuple = field(default=(), repr=False)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]


def _sq_dists(X: np.ndarray, C: np.ndarray, xx: np.ndarray | None = None) -> np.ndarray:
    # X: (n, d), C: (R, K, d) -> (R, n, K); clipped at 0 against cancellation
    if xx is None:
        xx = np.einsum("nd,nd->n", X, X)
    cc = np.einsum("rkd,rkd->rk", C, C)
    D = xx[None, :, None] - 2.0 * (X @ C.transpose(0, 2, 1)) + cc[:, None, :]
    return np.maximum(D, 0.0, out=D)


def _kmeans_pp(X: np.ndarray, k: int, n_init: int, rng: np.random.Generator) -> np.ndarray:
    n, d = X.shape
    C = np.empty((n_init, k, d))
    first = rng.integers(n, size=n_init)
    C[:, 0] = X[first]
    xx = np.einsum("nd,nd->n", X, X)
    d2 = _sq_dists(X, C[:, :1], xx)[:, :, 0]
    for j in range(1, k):
        u = rng.random(n_init)
        cum = np.cumsum(d2, axis=1)
        target = u * cum[:, -1]
        idx = (cum <= target[:, None]).sum(axis=1)
        # target < total almost surely; guard the u == 1 boundary
        idx = np.minimum(idx, n - 1)
        # points already chosen have zero weight and must not be drawn
        for r in np.flatnonzero(d2[np.arange(n_init), idx] == 0):
            idx[r] = int(np.argmax(d2[r]))
        C[:, j] = X[idx]
        d2 = np.minimum(d2, _sq_dists(X, C[:, j : j + 1], xx)[:, :, 0])
    return C


@numba.njit(cache=True)
def _lloyd(X, C, max_iter, tol):
    # One restart, in place on C. Returns labels, objective trace, iterations,
    # convergence flag. Labels are those whose means produced the final C.
    n, d = X.shape
    k = C.shape[0]
    labels = np.zeros(n, dtype=np.int64)
    nearest = np.empty(n)
    counts = np.zeros(k, dtype=np.int64)
    sums = np.empty((k, d))
    trace = np.empty(max_iter)
    converged = False
    it = 0
    while it < max_iter:
        obj = 0.0
        for i in range(n):
            best = np.inf
            lab = 0
            for j in range(k):
                s = 0.0
                for t in range(d):
                    diff = X[i, t] - C[j, t]
                    s += diff * diff
                if s < best:
                    best = s
                    lab = j
            labels[i] = lab
            nearest[i] = best
            obj += best
        trace[it] = obj
        it += 1

        counts[:] = 0
        sums[:, :] = 0.0
        for i in range(n):
            counts[labels[i]] += 1
            for t in range(d):
                sums[labels[i], t] += X[i, t]

        repaired = False
        for j in range(k):
            if counts[j] == 0:
                # farthest point whose removal leaves its own cluster non-empty
                far = -1
                farval = -1.0
                for i in range(n):
                    if counts[labels[i]] > 1 and nearest[i] > farval:
                        farval = nearest[i]
                        far = i
                old = labels[far]
                counts[old] -= 1
                for t in range(d):
                    sums[old, t] -= X[far, t]
                    sums[j, t] = X[far, t]
                counts[j] = 1
                labels[far] = j
                nearest[far] = 0.0
                repaired = True

        shift = 0.0
        for j in range(k):
            s = 0.0
            for t in range(d):
                c = sums[j, t] / counts[j]
                diff = c - C[j, t]
                s += diff * diff
                C[j, t] = c
            if s > shift:
                shift = s
        if not repaired and np.sqrt(shift) < tol:
            converged = True
            break
    return labels, trace[:it], it, converged


def kmeans(
    X: np.ndarray,
    k: int,
    config: KMeansConfig | None = None,
    rng: np.random.Generator | int | None = None,
) -> ClusterAssignment:
    """Lloyd's algorithm with k-means++ seeding and several restarts.

    A point equidistant from several centroids goes to the lowest-indexed
    one. A centroid left without points is reseeded at the point farthest
    from its own centroid. The restart with the lowest objective wins, ties
    going to the earliest restart.

    Raises
    ------
    DegenerateInputError
        ``X`` has fewer than ``k`` distinct rows.
    """
    cfg = config or KMeansConfig()
    rng = np.random.default_rng(rng)
    X = np.ascontiguousarray(X, dtype=float)
    n, d = X.shape
    if not 1 <= k <= n:
        raise BoundsError(f"k must lie in [1, {n}], got {k}")
    if k > 1 and np.unique(X, axis=0).shape[0] < k:
        raise DegenerateInputError(f"fewer than {k} distinct rows; cannot form {k} non-empty clusters")

    seeds = _kmeans_pp(X, k, cfg.n_init, rng)
    best = None
    for r in range(cfg.n_init):
        C = np.ascontiguousarray(seeds[r])
        labels, trace, n_iter, converged = _lloyd(X, C, cfg.max_iter, cfg.tol)
        resid = X - C[labels]
        inertia = float(np.einsum("nd,nd->", resid, resid))
        if best is None or inertia < best.inertia:
            best = ClusterAssignment(
                labels=labels.astype(np.intp),
                centroids=C,
                inertia=inertia,
                converged=bool(converged),
                n_iter=int(n_iter),
                objective_trace=tuple(trace.tolist()),
            )
    return best


def spectral_clustering(
    A: np.ndarray,
    k: int,
    config: KMeansConfig | None = None,
    rng: np.random.Generator | int | None = None,
    absolute_weights: bool = False,
) -> ClusterAssignment:
    """Cluster nodes of a weighted graph: Laplacian, ``k``-dim embedding, k-means."""
    V = embed(laplacian(A, absolute_weights=absolute_weights), k).vectors
    return kmeans(V, k, config, rng)
