"""Deterministic random streams keyed by integer tuples.

Each unit of work (a candidate split, a bootstrap resample, a simulation
repetition) draws from its own generator derived from the run seed and a
key, so results do not depend on evaluation order.
"""

from __future__ import annotations

import numpy as np

# Key prefixes separating the different consumers of randomness.
SWEEP = 0
RESAMPLE = 1
SIMULATION = 2
SIMILARITY = 3
GRAPH = 4


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))
