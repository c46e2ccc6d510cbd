"""From a multivariate series to communities of nodes.

A planted two-community series is drawn, its correlation matrix is used as a
signed weighted graph, and spectral clustering recovers the partition.

    python demos/01_community_structure.py
"""

import numpy as np

from netchange import correlation, embed, laplacian, spectral_clustering
from netchange.simulation import SimSetting, equal_partition, generate

rng = np.random.default_rng(1)

# 30 nodes in two communities, 150 time points, no change
planted = rng.permutation(equal_partition(30, 2))
Y = generate(SimSetting(0, 30, 150, (), (planted,)), rng)
print(f"series: {Y.shape[0]} time points x {Y.shape[1]} nodes")

R = correlation(Y)
same = np.equal.outer(planted, planted) & ~np.eye(30, dtype=bool)
print(f"mean correlation within communities {R[same].mean():.2f}, between {R[~np.equal.outer(planted, planted)].mean():.2f}")

# the Laplacian annihilates the constant vector, so the first eigenvalue is 0
L = laplacian(R)
emb = embed(L, 3)
print("three smallest Laplacian eigenvalues:", np.round(emb.eigenvalues, 3))

res = spectral_clustering(R, 2, rng=0)
agree = max(np.mean(res.labels == planted), np.mean(res.labels != planted))
print(f"spectral clustering with K=2 recovers {agree:.0%} of the planted labels")
print("community sizes:", np.bincount(res.labels).tolist())
