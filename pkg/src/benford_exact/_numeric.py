"""Exact helpers on doubles shared by the distribution and digit modules."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DomainError

SEED_MAX = 2**64 - 1
SAMPLE_CHUNK = 1 << 16


def check_base(b) -> int:
    """Validate an integer base b >= 2 and return it as int."""
    if isinstance(b, (bool, np.bool_)) or not isinstance(b, (int, np.integer)):
        if isinstance(b, float) and b.is_integer():
            b = int(b)
        else:
            raise DomainError(f"base must be an integer >= 2, got {b!r}")
    b = int(b)
    if b < 2:
        raise DomainError(f"base must be an integer >= 2, got {b}")
    return b


def floor_log(x: float, b: int) -> tuple[int, float]:
    """Return (m, s) with x = b**m * s and 1 <= s < b, s correctly rounded.

    Uses exact rational arithmetic, so subnormal and huge inputs are fine.
    """
    m = math.floor(math.log(x) / math.log(b))
    exact = Fraction(x)
    while True:
        scaled = exact / Fraction(b) ** m
        if scaled < 1:
            m -= 1
        elif scaled >= b:
            m += 1
        else:
            return m, float(scaled)


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def chunk_rngs(n: int, seed: int):
    """Yield (size, generator) per fixed-size chunk.

    Each chunk's stream is derived from (seed, chunk index) alone, so the
    concatenated output does not depend on how chunks are scheduled.
    """
    for i, start in enumerate(range(0, n, SAMPLE_CHUNK)):
        size = min(SAMPLE_CHUNK, n - start)
        yield size, np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
