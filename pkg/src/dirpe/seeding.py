"""Deterministic, splittable seeding helpers.

All randomness in the package flows through a named seed plus a tuple of
integer path components (dataset index, retry counter, ...).  The same
(seed, path) always yields the same generator, independent of worker
scheduling, which is what makes parallel dataset emission byte-stable.
"""

from __future__ import annotations

import os

import numpy as np

DEFAULT_SEED_ENV = "DIRPE_SEED"


def derive_seed(seed: int, *path: int) -> int:
    """Derive a stable 64-bit child seed from a root seed and a path."""
    ss = np.random.SeedSequence([int(seed), *[int(p) for p in path]])
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)


def rng_for(seed: int, *path: int) -> np.random.Generator:
    """Generator for a (seed, path) pair; same arguments, same stream."""
    if path:
        seed = derive_seed(seed, *path)
    return np.random.default_rng(int(seed))


def default_seed(explicit: int | None = None) -> int:
    """Resolve the seed: explicit value, DIRPE_SEED env var, else 0."""
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(DEFAULT_SEED_ENV)
    return int(env) if env else 0
