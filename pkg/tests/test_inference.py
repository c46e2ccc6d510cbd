import itertools
from collections import Counter

import numpy as np
import pytest

from netchange import (
    BootstrapConfig,
    BoundsError,
    ConfigError,
    DetectionConfig,
    NullDistribution,
    Segment,
    TestResult,
    empirical_quantile,
    permutation_resample,
    stationary_resample,
    test_change_point as run_test,
)
from netchange.inference import circular_block_indices, draw_block_lengths, stationary_indices

from conftest import setting_data


def test_hand_traced_wraparound():
    # lengths (3, 4) from starts (4, 2) on 5 rows: 4 5 1 | 2 3 4 5 -> first five
    idx = circular_block_indices([3, 4], [4, 2], 5)
    np.testing.assert_array_equal(idx + 1, [4, 5, 1, 2, 3])


def test_unit_block_prob_gives_unit_blocks():
    rng = np.random.default_rng(0)
    lengths = draw_block_lengths(50, 1.0, rng)
    assert lengths.size == 50 and np.all(lengths == 1)


def test_block_lengths_cover_exactly_once():
    rng = np.random.default_rng(1)
    for n in (2, 7, 100):
        lengths = draw_block_lengths(n, 0.3, rng)
        assert lengths.sum() >= n
        assert lengths[:-1].sum() < n


def test_mean_block_length_57():
    rng = np.random.default_rng(2)
    lengths = np.concatenate([draw_block_lengths(285, 1 / 57, rng) for _ in range(2000)])[:10_000]
    assert lengths.size == 10_000
    assert abs(lengths.mean() - 57) / 57 < 0.05


def test_resample_shape_and_membership():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((37, 4))
    rows = {tuple(r) for r in X}
    for _ in range(50):
        Xs = stationary_resample(X, 0.1, rng)
        assert Xs.shape == X.shape
        assert all(tuple(r) in rows for r in Xs)


def test_blocks_are_consecutive_modulo_n():
    idx = stationary_indices(20, 0.2, np.random.default_rng(4))
    steps = (np.diff(idx) % 20)
    # within a block the next row is the successor; jumps mark new blocks
    assert np.mean(steps == 1) > 0.5


def test_invalid_block_prob():
    with pytest.raises(ConfigError):
        draw_block_lengths(10, 0.0, np.random.default_rng(0))


def test_permutation_of_identical_rows():
    X = np.tile([1.0, 2.0, 3.0], (6, 1))
    np.testing.assert_array_equal(permutation_resample(X, np.random.default_rng(0)), X)


def test_permutation_preserves_column_sums():
    X = np.random.default_rng(5).standard_normal((30, 3))
    Xs = permutation_resample(X, np.random.default_rng(6))
    np.testing.assert_array_equal(np.sort(Xs, axis=0), np.sort(X, axis=0))
    np.testing.assert_allclose(Xs.sum(axis=0), X.sum(axis=0), rtol=0, atol=1e-12)


def test_permutations_uniform():
    X = np.array([[0.0], [1.0], [2.0]])
    rng = np.random.default_rng(7)
    counts = Counter(tuple(permutation_resample(X, rng)[:, 0]) for _ in range(10_000))
    assert set(counts) == set(itertools.permutations([0.0, 1.0, 2.0]))
    for c in counts.values():
        assert abs(c / 10_000 - 1 / 6) <= 0.02


def test_resample_needs_two_rows():
    with pytest.raises(BoundsError):
        stationary_resample(np.ones((1, 3)), 0.5, np.random.default_rng(0))


def test_quantile_order_statistic():
    s = np.arange(1.0, 501.0)
    assert empirical_quantile(s, 0.05) == 25.0
    assert empirical_quantile(np.arange(1.0, 1001.0), 0.05) == 50.0
    assert empirical_quantile(s[::-1], 0.001) == 1.0


def _result(observed, samples):
    null = NullDistribution(np.asarray(samples, dtype=float), 0.05)
    return TestResult(100, Segment(1, 200), observed, null, 40.0)


def test_below_all_samples_is_significant():
    assert _result(0.5, np.linspace(1, 2, 100)).significant


def test_above_all_samples_is_not_significant():
    assert not _result(3.0, np.linspace(1, 2, 100)).significant


def test_equal_to_quantile_is_not_significant():
    samples = np.linspace(1, 2, 100)
    r = _result(0.0, samples)
    assert not _result(r.c_alpha, samples).significant


def test_default_block_length():
    cfg = BootstrapConfig()
    assert cfg.block_length(285) == 57
    assert cfg.block_length(7) == 2
    assert BootstrapConfig(mean_block_length=10).block_prob(100) == 0.1


def test_block_length_longer_than_segment():
    with pytest.raises(ConfigError):
        BootstrapConfig(mean_block_length=500).block_length(100)


def test_planted_change_in_lower_tail():
    _, Y = setting_data(1, 30, 200, seed=1)
    res = run_test(Y, Segment(1, 200), 100, DetectionConfig(k=2, n_min=50), BootstrapConfig(n_resamples=200))
    assert res.gamma_observed < np.median(res.null.samples)
    assert res.null.samples.size == 200
    assert res.mean_block_length == 40


def test_permutation_mode_runs():
    _, Y = setting_data(1, 12, 120, seed=2)
    res = run_test(
        Y, Segment(1, 120), 60, DetectionConfig(k=2, n_min=30), BootstrapConfig(n_resamples=30, mode="permutation")
    )
    assert res.mean_block_length is None
    assert res.null.samples.size == 30


def test_same_seed_same_null():
    _, Y = setting_data(1, 12, 120, seed=3)
    args = (Y, Segment(1, 120), 60, DetectionConfig(k=2, n_min=30), BootstrapConfig(n_resamples=25, seed=9))
    np.testing.assert_array_equal(run_test(*args).null.samples, run_test(*args).null.samples)


def test_position_out_of_segment():
    Y = np.random.default_rng(0).standard_normal((50, 3))
    with pytest.raises(BoundsError):
        run_test(Y, Segment(1, 50), 49, DetectionConfig(k=2), BootstrapConfig(n_resamples=5))
