import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.stats import ortho_group

from netchange import evaluate, gamma, kmeans, laplacian, outlier_mask, outlier_scores
from netchange.inference import circular_block_indices, stationary_indices

finite = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def symmetric(draw, max_p=12):
    p = draw(st.integers(2, max_p))
    A = draw(arrays(float, (p, p), elements=finite))
    return (A + A.T) / 2


@st.composite
def expansion_pair(draw):
    p = draw(st.integers(2, 15))
    k = draw(st.integers(1, min(p, 5)))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return rng.standard_normal((p, k)), rng.standard_normal((p, k)), seed


@given(symmetric())
def test_laplacian_rows_sum_to_zero(A):
    L = laplacian(A)
    np.testing.assert_allclose(L.sum(axis=1), 0, atol=1e-10)
    np.testing.assert_array_equal(L, L.T)


@given(symmetric())
def test_absolute_laplacian_is_psd(A):
    assert np.linalg.eigvalsh(laplacian(A, absolute_weights=True)).min() > -1e-10


@given(expansion_pair())
def test_gamma_rotation_invariant(pair):
    UL, UR, seed = pair
    k = UL.shape[1]
    O = ortho_group.rvs(k, random_state=seed) if k > 1 else np.array([[-1.0]])
    assert abs(gamma(UL, UR @ O).gamma - gamma(UL, UR).gamma) <= 1e-10
    assert abs(gamma(UL @ O, UR).gamma - gamma(UL, UR).gamma) <= 1e-10


@given(expansion_pair())
def test_gamma_symmetric_and_bounded(pair):
    UL, UR, _ = pair
    g = gamma(UL, UR).gamma
    assert abs(g - gamma(UR, UL).gamma) <= 1e-10
    # nuclear norm of a product is at most the product of Frobenius norms
    assert g <= np.linalg.norm(UL) * np.linalg.norm(UR) + 1e-10


@given(arrays(float, st.integers(2, 200), elements=st.floats(0, 10, allow_nan=False)))
def test_mask_size_and_ordering(g):
    eta = outlier_scores(g)
    mask = outlier_mask(eta)
    assert mask.sum() == math.ceil(0.05 * g.size)
    assert eta[mask].min() >= eta[~mask].max()


@given(st.integers(2, 300), st.floats(0.01, 1.0), st.integers(0, 2**32 - 1))
def test_stationary_indices_in_range(n, q, seed):
    idx = stationary_indices(n, q, np.random.default_rng(seed))
    assert idx.shape == (n,)
    assert idx.min() >= 0 and idx.max() < n


@given(st.integers(1, 40), st.lists(st.tuples(st.integers(1, 10), st.integers(1, 40)), min_size=1, max_size=8))
def test_circular_blocks_match_naive(n, blocks):
    lengths = [b[0] for b in blocks]
    starts = [(b[1] - 1) % n + 1 for b in blocks]
    naive = []
    for length, s in zip(lengths, starts):
        for j in range(s, s + length):
            naive.append((j - 1) % n)
    np.testing.assert_array_equal(circular_block_indices(lengths, starts, n), naive[:n])


@settings(deadline=None)
@given(arrays(float, st.tuples(st.integers(3, 8), st.just(2)), elements=st.floats(-5, 5, allow_nan=False)),
       st.integers(0, 1000))
def test_kmeans_fixed_point(X, seed):
    k = min(2, np.unique(X, axis=0).shape[0])
    res = kmeans(X, k, rng=seed)
    assert res.labels.shape == (X.shape[0],)
    assert np.unique(res.labels).size == k
    for c in range(k):
        np.testing.assert_allclose(res.centroids[c], X[res.labels == c].mean(axis=0), atol=1e-9)


@given(st.lists(st.integers(1, 200), max_size=6, unique=True), st.lists(st.integers(20, 180), min_size=1, max_size=3, unique=True))
def test_evaluate_accounting(dets, truths):
    r = evaluate(dets, truths, 200, 50)
    assert r.tp + r.fp == len(dets)
    assert r.mod_fp <= r.fp
    for m, t in zip(r.matched, truths):
        assert m is None or abs(m - t) <= 10
