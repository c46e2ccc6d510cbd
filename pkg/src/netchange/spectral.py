"""Graph Laplacian of a weighted adjacency matrix and its spectral embedding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BoundsError, ContractError, NumericalError


@dataclass(frozen=True)
class Embedding:
    """Unit eigenvectors (columns of ``vectors``) for the smallest eigenvalues."""

    vectors: np.ndarray
    eigenvalues: np.ndarray

    @property
    def k(self) -> int:
        return self.vectors.shape[1]


def laplacian(A: np.ndarray, absolute_weights: bool = False, atol: float = 1e-10) -> np.ndarray:
    """Unnormalised Laplacian ``diag(A 1) - A``.

    Signed weights and the diagonal (self-loops) are used as given, so the
    result can be indefinite. ``absolute_weights=True`` replaces ``A`` by
    ``|A|`` first, which makes the Laplacian positive semidefinite.

    Raises
    ------
    ContractError
        ``A`` is not square or not symmetric to within ``atol`` (relative to
        its largest entry).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError(f"adjacency must be square, got shape {A.shape}")
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    if np.abs(A - A.T).max(initial=0.0) > atol * scale:
        raise ContractError("adjacency matrix is not symmetric")
    if absolute_weights:
        A = np.abs(A)
    L = -A
    L[np.diag_indices_from(L)] += A.sum(axis=1)
    return 0.5 * (L + L.T)


def _fix_signs(V: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of each column made positive; argmax returns the
    # lowest index among exact ties.
    idx = np.abs(V).argmax(axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def embed(L: np.ndarray, k: int) -> Embedding:
    """Eigenvectors of ``L`` for its ``k`` algebraically smallest eigenvalues.

    Eigenvalues are returned in ascending order. Each eigenvector is flipped
    so that its largest-magnitude entry is positive. Within a numerically
    repeated eigenvalue the basis is whatever the solver returns; only the
    spanned subspace is meaningful there.
    """
    p = L.shape[0]
    if not 2 <= k <= p:
        raise BoundsError(f"k must lie in [2, {p}], got {k}")
    try:
        w, V = scipy.linalg.eigh(L, subset_by_index=[0, k - 1], driver="evr", check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    if not np.isfinite(w).all():
        raise NumericalError("eigendecomposition produced non-finite values")
    return Embedding(_fix_signs(V), w)
