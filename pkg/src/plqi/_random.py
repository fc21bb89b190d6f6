"""Seeded randomness keyed by (seed, stream, chunk).

Every random draw in plqi comes from a generator built here, so results depend
only on the seed and on index positions, never on call order across threads.
"""
import numpy as np

CHUNK = 4096

# stream tags keep unrelated consumers of one seed statistically independent
STREAMS = {
    "triangles": 1,
    "pairs": 2,
    "convexity": 3,
    "gap": 4,
    "directions": 5,
    "points": 6,
}


def rng_for(seed, stream, chunk=0):
    """Generator for chunk ``chunk`` of the named stream."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, STREAMS[stream], int(chunk)])


def chunked(total, chunk=CHUNK):
    """Yield ``(chunk_index, start, stop)`` covering ``range(total)``."""
    for idx, start in enumerate(range(0, total, chunk)):
        yield idx, start, min(start + chunk, total)
