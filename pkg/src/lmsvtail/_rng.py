"""Seeded random streams.

All randomness goes through PCG64 generators built from a
``numpy.random.SeedSequence``.  A replication-level substream is identified by
``(master_seed, replication, stream)``; the stream ids in use are

* ``STREAM_GAUSS`` (0): the latent Gaussian sequence X,
* ``STREAM_NOISE`` (1): the heavy-tailed noise Z.

Two substreams with different key tuples are statistically independent, and a
substream does not depend on how many other substreams were drawn before it,
so replications can run in any order or in parallel.
"""
from __future__ import annotations

import numpy as np

STREAM_GAUSS = 0
STREAM_NOISE = 1


def substream(seed, *keys: int) -> np.random.Generator:
    """Return a generator for the substream ``(seed, *keys)``.

    ``seed`` may already be a ``Generator`` (returned unchanged) or a
    ``SeedSequence``.
    """
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("cannot derive keyed substreams from a Generator")
        return seed
    if isinstance(seed, np.random.SeedSequence):
        if keys:
            seq = np.random.SeedSequence(
                seed.entropy, spawn_key=tuple(seed.spawn_key) + tuple(int(k) for k in keys)
            )
        else:
            seq = seed
    else:
        seed = int(seed)
        if seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        seq = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(seq))
