"""Candidate sweep, outlier masking and recursive search-and-split.

For a segment of length ``n`` every split leaving at least ``n_min`` rows on
each side is scored with the criterion. Points whose criterion jumps away
from both neighbours are masked as outliers, the smallest remaining value is
the candidate, and a resampling test decides whether it is a change point.
Significant points split the segment and both halves are searched again.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import BootstrapConfig, DetectionConfig
from .criterion import candidate_gamma
from .data import Segment
from .errors import (
    ConfigError,
    ExhaustedError,
    NetChangeError,
    SegmentTooShortError,
)
from .inference import TestResult, test_change_point

log = logging.getLogger(__name__)

# detections this close to a segment's first or last admissible split are flagged
EDGE_WINDOW = 10


@dataclass(frozen=True)
class CandidateSeries:
    """Criterion values for every admissible split of one segment.

    ``positions`` are global 1-based indices of the last row on the left side.
    """

    segment: Segment
    positions: np.ndarray
    gammas: np.ndarray
    eta: np.ndarray
    outlier_mask: np.ndarray

    @property
    def m(self) -> int:
        return self.positions.size


def outlier_scores(gammas) -> np.ndarray:
    """Largest absolute jump of each value to its neighbours (one-sided at the ends)."""
    g = np.asarray(gammas, dtype=float)
    if g.size < 2:
        return np.zeros_like(g)
    d = np.abs(np.diff(g))
    eta = np.empty_like(g)
    eta[0] = d[0]
    eta[-1] = d[-1]
    eta[1:-1] = np.maximum(d[:-1], d[1:])
    return eta


def outlier_mask(eta, fraction: float = 0.05) -> np.ndarray:
    """Mask the ``ceil(fraction * m)`` largest scores; ties go to the lower index.

    With a single value nothing is masked.
    """
    eta = np.asarray(eta, dtype=float)
    m = eta.size
    mask = np.zeros(m, dtype=bool)
    if m < 2:
        if m == 1:
            log.warning("single candidate: outlier masking skipped")
        return mask
    n_out = math.ceil(fraction * m - 1e-9)
    order = np.lexsort((np.arange(m), -eta))
    mask[order[:n_out]] = True
    return mask


def detect_outliers(series: CandidateSeries, fraction: float = 0.05) -> CandidateSeries:
    """Recompute scores and outlier mask of ``series``."""
    eta = outlier_scores(series.gammas)
    return CandidateSeries(series.segment, series.positions, series.gammas, eta, outlier_mask(eta, fraction))


def best_candidate(series: CandidateSeries) -> int:
    """Unmasked position with the smallest criterion (earliest on ties)."""
    keep = ~series.outlier_mask
    if not keep.any():
        raise ExhaustedError(f"all candidates in segment {series.segment} are masked")
    g = np.where(keep, series.gammas, np.inf)
    return int(series.positions[int(np.argmin(g))])


def candidate_positions(segment: Segment, n_min: int) -> np.ndarray:
    first = segment.start + n_min - 1
    last = segment.end - n_min
    if n_min < 2 or last < first:
        raise SegmentTooShortError(f"segment {segment} shorter than 2 * n_min = {2 * n_min}")
    return np.arange(first, last + 1)


def sweep(Y: np.ndarray, segment: Segment, config: DetectionConfig) -> CandidateSeries:
    """Criterion at every admissible split of ``segment``, with outliers masked.

    Raises
    ------
    SegmentTooShortError
        ``segment`` is shorter than ``2 * n_min``.
    DegenerateColumnError
        A column is constant on one side of some split (``candidate`` names it).
    """
    positions = candidate_positions(segment, config.n_min)
    gammas = np.array([candidate_gamma(Y, segment, int(d), config) for d in positions])
    eta = outlier_scores(gammas)
    return CandidateSeries(segment, positions, gammas, eta, outlier_mask(eta, config.outlier_fraction))


@dataclass
class ChangePointReport:
    """Outcome of :func:`binary_segment`.

    ``tests`` holds every tested candidate (significant or not) in the order
    the recursion visited them; ``traces`` the criterion sweep of every
    analysed segment; ``failures`` segments abandoned because of degenerate
    data.
    """

    n_rows: int
    config: dict
    tests: list[TestResult] = field(default_factory=list)
    traces: list[CandidateSeries] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    @property
    def change_points(self) -> list[int]:
        return sorted(t.position for t in self.tests if t.significant)

    def segments(self) -> list[Segment]:
        """Partition of ``[1, T]`` induced by the significant change points."""
        bounds = [0, *self.change_points, self.n_rows]
        return [Segment(a + 1, b) for a, b in zip(bounds[:-1], bounds[1:])]

    def to_dict(self) -> dict:
        n_min = self.config["detection"]["n_min"]
        tests = []
        for t in sorted(self.tests, key=lambda t: t.position):
            near_edge = min(
                abs(t.position - (t.segment.start + n_min - 1)),
                abs(t.position - (t.segment.end - n_min)),
            ) <= EDGE_WINDOW
            tests.append(
                {
                    "position": t.position,
                    "gamma": t.gamma_observed,
                    "c_alpha": t.c_alpha,
                    "significant": t.significant,
                    "segment": [t.segment.start, t.segment.end],
                    "resamples": int(t.null.samples.size),
                    "mean_block_length": t.mean_block_length,
                    "null": t.null.summary(),
                    "near_edge": near_edge,
                }
            )
        return {
            "n_rows": self.n_rows,
            "change_points": self.change_points,
            "tests": tests,
            "failures": self.failures,
            "config": self.config,
        }


def binary_segment(
    Y: np.ndarray,
    config: DetectionConfig | None = None,
    bootstrap: BootstrapConfig | None = None,
) -> ChangePointReport:
    """Search-and-split change-point detection over the whole series.

    Each segment of length at least ``config.stop_length`` is swept, its
    best unmasked candidate is tested, and on significance both halves are
    searched recursively. A degenerate segment aborts only its own branch
    and is recorded in ``report.failures``.
    """
    config = config or DetectionConfig()
    bootstrap = bootstrap or BootstrapConfig()
    T = Y.shape[0]
    if T < config.stop_length:
        raise ConfigError(f"series length {T} is shorter than the minimum segment length {config.stop_length}")
    report = ChangePointReport(
        n_rows=T,
        config={"detection": config.to_dict(), "bootstrap": bootstrap.to_dict()},
    )
    pending = [Segment(1, T)]
    while pending:
        seg = pending.pop(0)
        if seg.length < config.stop_length:
            continue
        try:
            series = sweep(Y, seg, config)
            report.traces.append(series)
            delta = best_candidate(series)
            g_obs = float(series.gammas[series.positions == delta][0])
            result = test_change_point(Y, seg, delta, config, bootstrap, gamma_observed=g_obs)
        except NetChangeError as exc:
            log.warning("segment %s abandoned: %s", seg, exc)
            report.failures.append({"segment": [seg.start, seg.end], "error": type(exc).__name__, "message": str(exc)})
            continue
        report.tests.append(result)
        log.info(
            "segment %s: candidate %d gamma=%.4f c_alpha=%.4f %s",
            seg, delta, result.gamma_observed, result.c_alpha,
            "significant" if result.significant else "not significant",
        )
        if result.significant:
            pending.append(Segment(seg.start, delta))
            pending.append(Segment(delta + 1, seg.end))
    return report
