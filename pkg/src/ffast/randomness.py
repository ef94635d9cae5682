"""Deterministic counter-based random number generation.

Every randomized operation in the package draws from its own Philox
generator keyed by (seed, stream).  Philox is counter-based, so results
do not depend on how many values other operations consumed, which keeps
Monte Carlo runs reproducible across worker counts.
"""
from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def generator(seed: int, stream: int) -> np.random.Generator:
    """Return a Philox generator keyed by (seed, stream).

    seed is any Python integer (reduced to 64 bits); stream separates
    independent uses of the same seed, e.g. support draws vs. noise.
    """
    key = np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
