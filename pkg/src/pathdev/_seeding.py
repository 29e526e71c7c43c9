"""Deterministic derivation of independent random streams.

Every stochastic routine in the package takes a single integer seed and derives
per-sample (or per-Gram-entry) child streams with ``numpy.random.SeedSequence``
spawn keys.  Distinct key tuples yield statistically independent generators,
and the whole tree is reproducible from the root seed alone.
"""

from __future__ import annotations

import numpy as np

# Default root seed used by the command-line tool when neither --seed nor the
# PATHDEV_SEED environment variable is given.
DEFAULT_SEED = 1729


def seed_sequence(seed: int, *key: int) -> np.random.SeedSequence:
    """Return the child ``SeedSequence`` of ``seed`` at spawn key ``key``."""
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Return a ``numpy.random.Generator`` for the child stream at ``key``."""
    return np.random.default_rng(seed_sequence(seed, *key))
