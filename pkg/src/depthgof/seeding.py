"""Deterministic seed derivation shared by all stochastic components.

A single master seed plus an integer derivation path (replicate index,
stream role, ...) maps to an independent generator.  Streams for distinct
paths are statistically independent and reproducible regardless of the
order in which they are created.
"""

from __future__ import annotations

import numpy as np

__all__ = ["derived_rng", "derived_seed_sequence"]


def derived_seed_sequence(master: int, *path: int) -> np.random.SeedSequence:
    """Seed sequence for ``master`` refined by an integer derivation path."""
    return np.random.SeedSequence(entropy=int(master), spawn_key=tuple(int(p) for p in path))


def derived_rng(master: int, *path: int) -> np.random.Generator:
    """Fresh generator for the stream identified by ``(master, *path)``."""
    return np.random.default_rng(derived_seed_sequence(master, *path))
