"""Seeded random streams.

Every random draw in the package goes through a Philox generator keyed by
a :class:`numpy.random.SeedSequence`. Substreams are addressed by a tuple of
non-negative integers (trial index, stream tag, ...), so a trial's draws do
not depend on which other trials ran or in which order.
"""
from __future__ import annotations

import numpy as np

# stream tags used as the last spawn-key component
TOPOLOGY = 0
CHANNEL = 1
PRIORITY = 2


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for ``(seed, key...)``.

    ``make_rng(s)`` and ``make_rng(s, 3, 1)`` are independent streams.
    """
    if seed < 0 or any(k < 0 for k in key):
        raise ValueError("seed and substream key must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def as_rng(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise ValueError("an explicit rng or integer seed is required")
    return make_rng(int(rng))
