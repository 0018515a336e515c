"""Seeded, block-partitioned random streams.

Every Monte Carlo routine in the package draws its numbers through
:func:`block_generators`, so a fixed ``(seed, block_size)`` pair gives the
same output no matter how many workers consume the blocks.
"""
from __future__ import annotations

import os
from typing import Iterator

import numpy as np

BLOCK_SIZE = 2**16
DEFAULT_SEED = 20240611
SEED_ENV_VAR = "HEAVYSD_SEED"

_TWO52 = float(2**52)


def default_seed() -> int:
    """Seed used when none is given; ``$HEAVYSD_SEED`` overrides the constant."""
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    return int(raw)


def stream_seed(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))


def block_generators(seed: int, m: int, *key: int, block_size: int = BLOCK_SIZE
                     ) -> Iterator[tuple[np.random.Generator, int]]:
    """Yield ``(generator, rows)`` for consecutive blocks covering ``m`` rows.

    Block ``b`` of stream ``key`` is seeded from ``SeedSequence(seed,
    spawn_key=(*key, b))``; streams are statistically independent.
    """
    if m < 1:
        raise ValueError(f"sample size must be >= 1, got {m}")
    n_blocks = -(-m // block_size)
    for b in range(n_blocks):
        rows = min(block_size, m - b * block_size)
        yield np.random.default_rng(stream_seed(seed, *key, b)), rows


def open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    """Uniforms on the lattice (k + 1/2) / 2**52: strictly inside (0, 1), and
    ``1 - u`` is exact, so antithetic pairs stay on the same lattice."""
    k = rng.integers(0, 2**52, size=size, dtype=np.int64)
    return (k.astype(np.float64) + 0.5) / _TWO52
