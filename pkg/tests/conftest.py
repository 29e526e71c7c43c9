"""Shared test helpers: deterministic random path construction."""

from __future__ import annotations

import numpy as np
import pytest

from pathdev import PiecewiseLinearPath, one_variation


def random_path(
    rng: np.random.Generator,
    dim: int | None = None,
    max_segments: int = 5,
    target_variation: float | None = None,
) -> PiecewiseLinearPath:
    """A random piecewise-linear path with non-degenerate segments."""
    d = dim if dim is not None else int(rng.integers(1, 4))
    L = int(rng.integers(1, max_segments + 1))
    if L > 1:
        interior = np.sort(rng.uniform(0.05, 0.95, size=L - 1))
        knots = np.concatenate([[0.0], interior, [1.0]])
    else:
        knots = np.array([0.0, 1.0])
    increments = rng.normal(size=(L, d))
    # Regenerate any segment that came out numerically degenerate.
    while np.any(np.linalg.norm(increments, axis=1) < 1e-6):
        increments = rng.normal(size=(L, d))
    path = PiecewiseLinearPath(knots, increments)
    if target_variation is not None:
        scale = target_variation / one_variation(path)
        path = PiecewiseLinearPath(knots, increments * scale)
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(20260825)
