"""Counter-based stream derivation.

A stream is fixed by ``(seed, index)`` alone, so results never depend on
how work is split across threads.
"""

import numpy as np

DEFAULT_SEED = 20240517
BLOCK_SIZE = 4096


def path_stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def block_stream(seed: int, block: int, purpose: int = 1) -> np.random.Generator:
    """Stream for Monte Carlo block ``block``; ``purpose`` separates unrelated uses."""
    ss = np.random.SeedSequence(seed, spawn_key=(purpose, block))
    return np.random.Generator(np.random.PCG64(ss))


def blocks(total: int, size: int = BLOCK_SIZE):
    """``(block_index, count)`` pairs covering ``total`` items."""
    out = []
    start = 0
    b = 0
    while start < total:
        n = min(size, total - start)
        out.append((b, n))
        start += n
        b += 1
    return out
