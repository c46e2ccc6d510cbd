"""Synthetic community-structure change scenarios and detection metrics.

Three scenarios with Gaussian rows, i.i.d. within each regime:

1. ``K_o = 2`` throughout; node labels reshuffled at ``T/2``.
2. Change points at ``T/4, T/2, 3T/4``; three communities, one merged into
   the other two, then labels reshuffled, then a third community split off.
3. Change points at ``T/3, 2T/3``; two communities, half of each moved to
   the other at every change.

Covariances have unit diagonal and 0.75 within communities. Between
communities the value is 0.20 (scenario 1) or ``0.20 ** |i - j|``
(scenarios 2 and 3).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _rng
from .config import BootstrapConfig, DetectionConfig
from .detection import binary_segment
from .errors import ConfigError, NumericalError

DEFAULT_SHAPES = {1: (400, 200), 2: (600, 400), 3: (800, 600)}
MATCH_WINDOW = 10


@dataclass(frozen=True)
class SimSetting:
    """One realised scenario: regime boundaries and the partition in force in each regime.

    ``partitions[r]`` holds 0-based community labels of the ``p`` nodes in
    regime ``r``; ``change_points`` are the last rows (1-based) of all but
    the final regime. ``positions[r]`` places each node on the index axis
    used by the decaying between-community term; a label shuffle permutes
    these positions together with the labels so every covariance stays a
    relabelled copy of a positive definite one. ``None`` means node order.
    """

    setting_id: int
    p: int
    T: int
    change_points: tuple[int, ...]
    partitions: tuple[np.ndarray, ...]
    within: float = 0.75
    between: float = 0.20
    decay: bool = False
    positions: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        if len(self.partitions) != len(self.change_points) + 1:
            raise ConfigError("need one partition per regime")
        for labels in self.partitions:
            if labels.shape != (self.p,):
                raise ConfigError("every partition must label all p nodes")
        if self.positions is not None and len(self.positions) != len(self.partitions):
            raise ConfigError("need one position vector per regime")
        cps = (0, *self.change_points, self.T)
        if any(b <= a for a, b in zip(cps[:-1], cps[1:])):
            raise ConfigError("change points must be strictly increasing inside (0, T)")

    @property
    def regimes(self) -> list[tuple[int, int]]:
        """1-based inclusive ``(start, end)`` row ranges of the regimes."""
        cps = (0, *self.change_points, self.T)
        return [(a + 1, b) for a, b in zip(cps[:-1], cps[1:])]

    def covariance(self, regime: int) -> np.ndarray:
        pos = None if self.positions is None else self.positions[regime]
        return community_covariance(self.partitions[regime], self.within, self.between, self.decay, pos)


def community_covariance(
    labels: np.ndarray,
    within: float = 0.75,
    between: float = 0.20,
    decay: bool = False,
    positions: np.ndarray | None = None,
) -> np.ndarray:
    """Unit-diagonal covariance with constant within-community and between-community entries.

    With ``decay=True`` the between-community entry for nodes ``i, j`` is
    ``between ** |pos_i - pos_j|``, positions defaulting to node indices.
    """
    labels = np.asarray(labels)
    p = labels.size
    if decay:
        idx = np.arange(p) if positions is None else np.asarray(positions)
        cross = between ** np.abs(idx[:, None] - idx[None, :]).astype(float)
    else:
        cross = np.full((p, p), between)
    S = np.where(labels[:, None] == labels[None, :], within, cross)
    np.fill_diagonal(S, 1.0)
    return S


def equal_partition(p: int, k: int) -> np.ndarray:
    """Contiguous communities of (near) equal size; the first ones absorb the remainder."""
    sizes = np.full(k, p // k)
    sizes[: p % k] += 1
    return np.repeat(np.arange(k), sizes)


def _merge_last(labels: np.ndarray) -> np.ndarray:
    # nodes of community 2 in index order: first half to 0, second half to 1
    out = labels.copy()
    members = np.flatnonzero(labels == 2)
    half = (members.size + 1) // 2
    out[members[:half]] = 0
    out[members[half:]] = 1
    return out


def _split_off_third(labels: np.ndarray) -> np.ndarray:
    # last third (by index) of communities 0 and 1 form community 2
    out = labels.copy()
    for c in (0, 1):
        members = np.flatnonzero(labels == c)
        n_move = members.size // 3
        if n_move:
            out[members[members.size - n_move :]] = 2
    return out


def _swap_halves(labels: np.ndarray) -> np.ndarray:
    # second half (by index) of each of the two communities changes sides
    out = labels.copy()
    for c in (0, 1):
        members = np.flatnonzero(labels == c)
        out[members[members.size - members.size // 2 :]] = 1 - c
    return out


def make_setting(setting_id: int, p: int | None = None, T: int | None = None, rng=None) -> SimSetting:
    """Draw the community schedule of scenario ``setting_id`` (1, 2 or 3)."""
    if setting_id not in DEFAULT_SHAPES:
        raise ConfigError(f"setting must be 1, 2 or 3, got {setting_id}")
    p0, T0 = DEFAULT_SHAPES[setting_id]
    p = p0 if p is None else int(p)
    T = T0 if T is None else int(T)
    rng = np.random.default_rng(rng)
    ident = np.arange(p)
    if setting_id == 1:
        if p < 4 or T < 4:
            raise ConfigError("setting 1 needs p >= 4 and T >= 4")
        first = equal_partition(p, 2)
        perm = rng.permutation(p)
        return SimSetting(1, p, T, (T // 2,), (first, first[perm]), positions=(ident, perm))
    if setting_id == 2:
        if p < 6 or T < 8:
            raise ConfigError("setting 2 needs p >= 6 and T >= 8")
        first = equal_partition(p, 3)
        merged = _merge_last(first)
        perm = rng.permutation(p)
        parts = (first, merged, merged[perm], _split_off_third(merged)[perm])
        return SimSetting(2, p, T, (T // 4, T // 2, 3 * T // 4), parts, decay=True, positions=(ident, ident, perm, perm))
    if p < 4 or T < 6:
        raise ConfigError("setting 3 needs p >= 4 and T >= 6")
    first = equal_partition(p, 2)
    second = _swap_halves(first)
    parts = (first, second, _swap_halves(second))
    return SimSetting(3, p, T, (T // 3, 2 * T // 3), parts, decay=True)


def generate(setting: SimSetting, rng=None) -> np.ndarray:
    """Draw a ``(T, p)`` series: rows i.i.d. ``N(0, Sigma_r)`` within regime ``r``."""
    rng = np.random.default_rng(rng)
    blocks = []
    for r, (a, b) in enumerate(setting.regimes):
        S = setting.covariance(r)
        try:
            chol = np.linalg.cholesky(S)
        except np.linalg.LinAlgError:
            raise NumericalError(f"covariance of regime {r + 1} is not positive definite") from None
        blocks.append(rng.standard_normal((b - a + 1, setting.p)) @ chol.T)
    Y = np.vstack(blocks)
    Y.setflags(write=False)
    return Y


@dataclass(frozen=True)
class RunMetrics:
    """Detection outcome of one repetition; ``matched[j]`` is the detection paired with truth ``j``."""

    detections: tuple[int, ...]
    matched: tuple[int | None, ...]
    false_positives: tuple[int, ...]
    modified_false_positives: tuple[int, ...]

    @property
    def tp(self) -> int:
        return sum(m is not None for m in self.matched)

    @property
    def fp(self) -> int:
        return len(self.false_positives)

    @property
    def mod_fp(self) -> int:
        return len(self.modified_false_positives)


def evaluate(detections, true_change_points, T: int, n_min: int, window: int = MATCH_WINDOW) -> RunMetrics:
    """Match detections to true change points.

    A detection within ``window`` of a true change point is a true positive.
    Pairs are matched nearest-first and each side is used at most once.
    Unmatched detections are false positives; those within ``window`` of
    ``n_min`` or ``T - n_min`` are dropped from the modified count.
    """
    dets = sorted(int(d) for d in detections)
    truths = [int(t) for t in true_change_points]
    pairs = sorted(
        (abs(d - t), j, i) for i, d in enumerate(dets) for j, t in enumerate(truths) if abs(d - t) <= window
    )
    matched: list[int | None] = [None] * len(truths)
    used = set()
    for _, j, i in pairs:
        if matched[j] is None and i not in used:
            matched[j] = dets[i]
            used.add(i)
    fps = tuple(d for i, d in enumerate(dets) if i not in used)
    edges = (n_min, T - n_min)
    mod = tuple(d for d in fps if min(abs(d - e) for e in edges) > window)
    return RunMetrics(tuple(dets), tuple(matched), fps, mod)


@dataclass(frozen=True)
class SimMetrics:
    """Aggregate over repetitions.

    ``tp_mean[j]``/``tp_sd[j]`` summarise the detections matched to truth
    ``j`` (``None`` when fewer than one/two matches exist). Frequencies are
    averages per repetition.
    """

    true_change_points: tuple[int, ...]
    n_reps: int
    tp_mean: tuple[float | None, ...]
    tp_sd: tuple[float | None, ...]
    tp_count: tuple[int, ...]
    tp_freq: float
    fp_freq: float
    mod_fp_freq: float

    @property
    def detection_rate(self) -> float:
        return self.tp_freq / len(self.true_change_points) if self.true_change_points else float("nan")

    def to_dict(self) -> dict:
        return {
            "true_change_points": list(self.true_change_points),
            "n_reps": self.n_reps,
            "tp_mean": list(self.tp_mean),
            "tp_sd": list(self.tp_sd),
            "tp_count": list(self.tp_count),
            "tp_freq": self.tp_freq,
            "fp_freq": self.fp_freq,
            "mod_fp_freq": self.mod_fp_freq,
            "detection_rate": self.detection_rate,
        }


def summarize(runs: list[RunMetrics], true_change_points) -> SimMetrics:
    truths = tuple(int(t) for t in true_change_points)
    means, sds, counts = [], [], []
    for j in range(len(truths)):
        hits = np.array([r.matched[j] for r in runs if r.matched[j] is not None], dtype=float)
        counts.append(int(hits.size))
        means.append(float(hits.mean()) if hits.size else None)
        sds.append(float(hits.std(ddof=1)) if hits.size > 1 else None)
    n = len(runs)
    return SimMetrics(
        true_change_points=truths,
        n_reps=n,
        tp_mean=tuple(means),
        tp_sd=tuple(sds),
        tp_count=tuple(counts),
        tp_freq=sum(r.tp for r in runs) / n if n else 0.0,
        fp_freq=sum(r.fp for r in runs) / n if n else 0.0,
        mod_fp_freq=sum(r.mod_fp for r in runs) / n if n else 0.0,
    )


def silverman_bandwidth(x) -> float:
    """Silverman's rule of thumb, ``0.9 * min(sd, IQR / 1.34) * n ** -0.2``.

    Falls back to ``sd`` alone when the IQR vanishes and to 1.0 when the
    sample has no spread at all.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    sd = float(x.std(ddof=1)) if n > 1 else 0.0
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34) if q75 > q25 else sd
    if spread <= 0:
        return 1.0
    return 0.9 * spread * n ** (-0.2)


@dataclass(frozen=True)
class DensityCurve:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float | None
    empty: bool = False

    @property
    def peak(self) -> float | None:
        return None if self.empty else float(self.grid[int(np.argmax(self.density))])


def density(detections, T: int, bandwidth: float | None = None, grid=None) -> DensityCurve:
    """Gaussian kernel density of detected change points over ``[1, T]``.

    The curve is renormalised so its trapezoid integral over the grid is 1.
    With no detections the curve is all zeros and flagged ``empty``.
    """
    grid = np.linspace(1, T, T) if grid is None else np.asarray(grid, dtype=float)
    x = np.asarray(list(detections), dtype=float)
    if x.size == 0:
        return DensityCurve(grid, np.zeros_like(grid), None, empty=True)
    h = silverman_bandwidth(x) if bandwidth is None else float(bandwidth)
    z = (grid[:, None] - x[None, :]) / h
    f = np.exp(-0.5 * z * z).sum(axis=1) / (x.size * h * math.sqrt(2 * math.pi))
    area = np.trapezoid(f, grid)
    if area > 0:
        f = f / area
    return DensityCurve(grid, f, h)


@dataclass
class SimulationResult:
    setting_id: int
    p: int
    T: int
    true_change_points: tuple[int, ...]
    runs: list[RunMetrics]
    significance: list[list[tuple[int, bool]]]
    metrics: SimMetrics
    kde: DensityCurve
    config: dict = field(default_factory=dict)


def _one_repetition(args):
    setting_id, p, T, rep, seed, detection, bootstrap = args
    setting = make_setting(setting_id, p, T, _rng.stream(seed, _rng.SIMULATION, rep, 0))
    Y = generate(setting, _rng.stream(seed, _rng.SIMULATION, rep, 1))
    rep_seed = int(np.random.SeedSequence(seed, spawn_key=(_rng.SIMULATION, rep, 2)).generate_state(1)[0])
    report = binary_segment(Y, replace(detection, seed=rep_seed), replace(bootstrap, seed=rep_seed))
    tested = [(t.position, t.significant) for t in sorted(report.tests, key=lambda t: t.position)]
    return setting.change_points, report.change_points, tested


def run_simulation(
    setting_id: int,
    detection: DetectionConfig | None = None,
    bootstrap: BootstrapConfig | None = None,
    reps: int = 100,
    p: int | None = None,
    T: int | None = None,
    seed: int = 0,
    n_jobs: int = 1,
    bandwidth: float | None = None,
) -> SimulationResult:
    """Generate, detect and evaluate ``reps`` independent repetitions.

    Repetition ``r`` draws from streams keyed by ``(seed, r)``, so results do
    not depend on ``n_jobs``.
    """
    detection = detection or DetectionConfig()
    bootstrap = bootstrap or BootstrapConfig()
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    probe = make_setting(setting_id, p, T, 0)
    if probe.T < detection.stop_length:
        raise ConfigError(f"T={probe.T} is shorter than the minimum segment length {detection.stop_length}")
    jobs = [(setting_id, probe.p, probe.T, r, seed, detection, bootstrap) for r in range(reps)]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=min(n_jobs, os.cpu_count() or 1)) as ex:
            outcomes = list(ex.map(_one_repetition, jobs))
    else:
        outcomes = [_one_repetition(j) for j in jobs]
    runs = [evaluate(found, truth, probe.T, detection.n_min) for truth, found, _ in outcomes]
    metrics = summarize(runs, probe.change_points)
    all_dets = [d for r in runs for d in r.detections]
    return SimulationResult(
        setting_id=setting_id,
        p=probe.p,
        T=probe.T,
        true_change_points=probe.change_points,
        runs=runs,
        significance=[tested for _, _, tested in outcomes],
        metrics=metrics,
        kde=density(all_dets, probe.T, bandwidth),
        config={
            "setting": setting_id,
            "p": probe.p,
            "T": probe.T,
            "reps": reps,
            "seed": seed,
            "detection": detection.to_dict(),
            "bootstrap": bootstrap.to_dict(),
        },
    )
