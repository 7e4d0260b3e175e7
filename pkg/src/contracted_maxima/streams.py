"""Reproducible random streams.

Every stochastic quantity is drawn from a Philox (counter-based) generator
keyed by ``(master_seed, *key)`` through :class:`numpy.random.SeedSequence`.
Two different keys give statistically independent streams, and the stream
for a given key never depends on how work is split across threads.
"""
from __future__ import annotations

import numpy as np

SEED_MAX = 2**64 - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
