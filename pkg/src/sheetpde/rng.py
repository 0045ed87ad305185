"""Deterministic random streams for reproducible parallel Monte Carlo.

Streams use numpy's Philox counter-based bit generator. The stream for
path k of a run seeded with ``seed`` is derived as

    Generator(Philox(SeedSequence(entropy=seed, spawn_key=(k,))))

so any path can be regenerated independently of every other, in any
order, on any worker. Path 0 is the stream used for single-sample calls.
"""

from __future__ import annotations

import numpy as np

__all__ = ["stream_for_path"]


def stream_for_path(seed: int, path_index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(path_index),))
    return np.random.Generator(np.random.Philox(ss))
