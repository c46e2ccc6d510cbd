"""Resampling null distributions for the split criterion.

The whole tested segment is resampled (both sides of the split jointly) and
the criterion is recomputed at the same split position on every
pseudo-sample. A candidate is significant when its observed criterion falls
strictly below the lower ``alpha`` empirical quantile of the resampled
values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _rng
from .config import BootstrapConfig, DetectionConfig
from .criterion import candidate_gamma, split_gamma
from .data import Segment
from .errors import (
    BoundsError,
    ConfigError,
    DegenerateColumnError,
    DegenerateInputError,
    InferenceError,
    NumericalError,
)


def draw_block_lengths(n: int, block_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Geometric(``block_prob``) block lengths on {1, 2, ...}, drawn until they cover ``n`` rows.

    The last length is kept whole; the cumulative sum of all but the last is
    below ``n`` and the full sum is at least ``n``.
    """
    if not 0 < block_prob <= 1:
        raise ConfigError(f"block_prob must lie in (0, 1], got {block_prob}")
    batch = max(8, int(2 * n * block_prob) + 8)
    parts = []
    total = 0
    while total < n:
        draws = rng.geometric(block_prob, size=batch)
        cum = total + np.cumsum(draws)
        stop = int(np.searchsorted(cum, n))
        if stop < batch:
            parts.append(draws[: stop + 1])
            break
        parts.append(draws)
        total = int(cum[-1])
    return np.concatenate(parts)


def circular_block_indices(lengths, starts, n: int) -> np.ndarray:
    """Concatenate blocks of consecutive rows with wrap-around.

    ``starts`` are 1-based row numbers; the result is 0-based and truncated
    to ``n`` rows. Row ``j > n`` wraps to ``j mod n``, with 0 meaning ``n``.
    """
    lengths = np.asarray(lengths, dtype=np.int64)
    starts = np.asarray(starts, dtype=np.int64)
    offsets = np.arange(lengths.sum()) - np.repeat(np.cumsum(lengths) - lengths, lengths)
    return ((np.repeat(starts - 1, lengths) + offsets) % n)[:n]


def stationary_indices(n: int, block_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Row indices (0-based) of one stationary-bootstrap pseudo-sample."""
    lengths = draw_block_lengths(n, block_prob, rng)
    starts = rng.integers(1, n + 1, size=lengths.size)
    return circular_block_indices(lengths, starts, n)


def stationary_resample(X: np.ndarray, block_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Stationary-bootstrap pseudo-sample with the same shape as ``X``."""
    if X.shape[0] < 2:
        raise BoundsError("segment must have at least 2 rows")
    return X[stationary_indices(X.shape[0], block_prob, rng)]


def permutation_resample(X: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Rows of ``X`` in uniformly random order; each row is kept intact."""
    if X.shape[0] < 2:
        raise BoundsError("segment must have at least 2 rows")
    return X[rng.permutation(X.shape[0])]


def empirical_quantile(samples: np.ndarray, alpha: float) -> float:
    """Lower empirical quantile: order statistic ``ceil(alpha * B)`` (1-based)."""
    s = np.sort(np.asarray(samples, dtype=float))
    # tolerance keeps e.g. 0.05 * 500 from rounding up to 26
    rank = max(1, math.ceil(alpha * s.size - 1e-9))
    return float(s[rank - 1])


@dataclass(frozen=True)
class NullDistribution:
    samples: np.ndarray
    alpha: float

    @property
    def c_alpha(self) -> float:
        return empirical_quantile(self.samples, self.alpha)

    def summary(self) -> dict:
        return {
            "c_alpha": self.c_alpha,
            "min": float(self.samples.min()),
            "median": float(np.median(self.samples)),
            "max": float(self.samples.max()),
            "n_resamples": int(self.samples.size),
        }


@dataclass(frozen=True)
class TestResult:
    position: int
    segment: Segment
    gamma_observed: float
    null: NullDistribution
    mean_block_length: float | None

    __test__ = False

    @property
    def c_alpha(self) -> float:
        return self.null.c_alpha

    @property
    def significant(self) -> bool:
        return self.gamma_observed < self.c_alpha


def null_distribution(
    Y: np.ndarray,
    segment: Segment,
    position: int,
    config: DetectionConfig,
    bootstrap: BootstrapConfig,
) -> NullDistribution:
    """Criterion at ``position`` recomputed on ``bootstrap.n_resamples`` pseudo-samples.

    A pseudo-sample whose criterion cannot be computed (constant column on
    one side, too few distinct embedding rows) is redrawn up to
    ``bootstrap.max_retries`` times.
    """
    X = segment.rows(Y)
    n = X.shape[0]
    delta = position - segment.start + 1
    block_prob = bootstrap.block_prob(n) if bootstrap.mode == "stationary" else None
    out = np.empty(bootstrap.n_resamples)
    for r in range(bootstrap.n_resamples):
        for attempt in range(bootstrap.max_retries + 1):
            rng = _rng.stream(bootstrap.seed, _rng.RESAMPLE, segment.start, segment.end, position, r, attempt)
            if block_prob is None:
                Xs = permutation_resample(X, rng)
            else:
                Xs = stationary_resample(X, block_prob, rng)
            try:
                out[r] = split_gamma(Xs, delta, config.k, rng, config.kmeans, config.absolute_weights)
                break
            except (DegenerateColumnError, DegenerateInputError, NumericalError):
                continue
        else:
            raise InferenceError(
                f"resample {r} at position {position} degenerate after {bootstrap.max_retries} retries"
            )
    return NullDistribution(out, bootstrap.alpha)


def test_change_point(
    Y: np.ndarray,
    segment: Segment,
    position: int,
    config: DetectionConfig,
    bootstrap: BootstrapConfig,
    gamma_observed: float | None = None,
) -> TestResult:
    """Resampling test of whether splitting ``segment`` after ``position`` is a change point.

    ``gamma_observed`` may be passed when already known from the sweep; it is
    recomputed otherwise (with the same random stream, hence the same value).
    """
    if not segment.start + 1 <= position <= segment.end - 2:
        raise BoundsError(f"position {position} is not a valid split of segment {segment}")
    if gamma_observed is None:
        gamma_observed = candidate_gamma(Y, segment, position, config)
    null = null_distribution(Y, segment, position, config, bootstrap)
    block = bootstrap.block_length(segment.length) if bootstrap.mode == "stationary" else None
    return TestResult(position, segment, float(gamma_observed), null, block)


test_change_point.__test__ = False
