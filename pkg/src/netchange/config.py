"""Configuration objects shared by the clustering, detection and inference code."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Literal

from .errors import ConfigError


@dataclass(frozen=True)
class KMeansConfig:
    """Lloyd's algorithm settings.

    Parameters
    ----------
    n_init : int
        Number of k-means++ restarts; the lowest objective wins.
    max_iter : int
        Iteration cap per restart.
    tol : float
        Convergence threshold on the largest centroid displacement.
    """

    n_init: int = 10
    max_iter: int = 100
    tol: float = 1e-8

    def __post_init__(self):
        if self.n_init < 1:
            raise ConfigError("n_init must be >= 1")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")
        if not self.tol >= 0:
            raise ConfigError("tol must be non-negative")


@dataclass(frozen=True)
class DetectionConfig:
    """Parameters of the candidate sweep and the search-and-split recursion.

    ``min_segment_length`` defaults to ``2 * n_min``, the shortest segment
    admitting one candidate split.
    """

    k: int = 3
    n_min: int = 50
    outlier_fraction: float = 0.05
    min_segment_length: int | None = None
    absolute_weights: bool = False
    seed: int = 0
    kmeans: KMeansConfig = field(default_factory=KMeansConfig)

    def __post_init__(self):
        if self.k < 2:
            raise ConfigError(f"k must be >= 2, got {self.k}")
        if self.n_min < 2:
            raise ConfigError(f"n_min must be >= 2, got {self.n_min}")
        if not 0 <= self.outlier_fraction < 1:
            raise ConfigError("outlier_fraction must lie in [0, 1)")
        if self.min_segment_length is not None and self.min_segment_length < 2 * self.n_min:
            raise ConfigError("min_segment_length must be >= 2 * n_min")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")

    @property
    def stop_length(self) -> int:
        return self.min_segment_length if self.min_segment_length is not None else 2 * self.n_min

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BootstrapConfig:
    """Resampling inference settings.

    The mean block length is either given directly (``mean_block_length``)
    or derived per tested segment as ``max(2, ceil(block_fraction * n))``.
    The geometric block parameter is its reciprocal.
    """

    n_resamples: int = 1000
    alpha: float = 0.05
    mode: Literal["stationary", "permutation"] = "stationary"
    mean_block_length: float | None = None
    block_fraction: float = 0.2
    seed: int = 0
    max_retries: int = 10

    def __post_init__(self):
        if self.n_resamples < 1:
            raise ConfigError("n_resamples must be >= 1")
        if not 0 < self.alpha < 1:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.mode not in ("stationary", "permutation"):
            raise ConfigError(f"unknown resampling mode {self.mode!r}")
        if self.mean_block_length is not None and self.mean_block_length < 1:
            raise ConfigError("mean_block_length must be >= 1")
        if not 0 < self.block_fraction <= 1:
            raise ConfigError("block_fraction must lie in (0, 1]")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")

    def block_length(self, n: int) -> float:
        """Mean block length used for a segment of ``n`` rows."""
        if self.mean_block_length is not None:
            if self.mean_block_length > n:
                raise ConfigError(
                    f"mean block length {self.mean_block_length} exceeds segment length {n}"
                )
            return float(self.mean_block_length)
        return float(min(n, max(2, math.ceil(self.block_fraction * n))))

    def block_prob(self, n: int) -> float:
        return 1.0 / self.block_length(n)

    def to_dict(self) -> dict:
        return asdict(self)
