"""Comparing networks across series and segments.

Each segment is turned into a centroid expansion; the nuclear norm of the
product of two expansions measures how alike their community structures
are. A thresholded graph of one segment is exported for plotting.

    python demos/06_network_similarity.py
"""

import numpy as np

from netchange import Segment, community_graph, network_expansion, similarity_matrix, to_dot
from netchange.simulation import generate, make_setting

rng = np.random.default_rng(6)
setting = make_setting(3, p=30, T=300, rng=rng)
Y = generate(setting, rng)

# the three regimes, plus the first regime split in two
parts = {"A1": (1, 50), "A2": (51, 100), "B": (101, 200), "C": (201, 300)}
expansions = [network_expansion(Y[a - 1 : b], 2, rng) for a, b in parts.values()]
S = similarity_matrix(expansions)

names = list(parts)
print("      " + "  ".join(f"{n:>5}" for n in names))
for i, n in enumerate(names):
    print(f"{n:>5} " + "  ".join("     " if j < i else f"{S[i, j]:5.2f}" for j in range(len(names))))
print("\nA1 and A2 share a structure; B and C each moved half the nodes.")

g = community_graph(Y, Segment(1, 100), 2, threshold=0.4)
print(f"\ngraph of rows 1-100: {len(g['nodes'])} nodes, {len(g['edges'])} edges with |r| > 0.4")
print("\n".join(to_dot(g).splitlines()[:8]) + "\n  ...")
