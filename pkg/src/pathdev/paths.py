"""Piecewise-linear paths and truncated path signatures.

A path is stored as strictly increasing knot times ``t_0 < ... < t_L`` and the
increments ``Δ_l = γ(t_l) - γ(t_{l-1})`` in ``R^d``.  Paths are always rebased
to start at the origin: the basepoint is dropped on construction and only the
increments matter.  Every quantity computed here (signatures, developments,
kernels) is invariant under reparameterization of the knot times.

The truncated signature of a piecewise-linear path is the Chen product of the
tensor exponentials of its increments,

    S(γ) = exp(Δ_1) ⊗ ... ⊗ exp(Δ_L)   truncated beyond the given depth,

where ``exp(v)`` has level-``n`` component ``v^{⊗n}/n!``.  Coefficients are
indexed by words: ``S^w`` is the iterated integral of the coordinates
``w_1, ..., w_n``.  For a straight line of increment ``v`` this reduces to
``S^w = v^{w_1}···v^{w_n}/n!``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InputError
from .words import Word, check_word, word_index


@dataclass(frozen=True)
class PiecewiseLinearPath:
    """A piecewise-linear path in ``R^d``, rebased to start at the origin.

    ``knots`` has shape ``(L + 1,)`` and is strictly increasing; ``increments``
    has shape ``(L, d)`` with no all-zero row.  ``L = 0`` (a constant path with
    a single knot) is allowed.
    """

    knots: np.ndarray
    increments: np.ndarray

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float)
        incs = np.asarray(self.increments, dtype=float)
        if knots.ndim != 1 or knots.size < 1:
            raise InputError("knots must be a 1-d array with at least one entry")
        if incs.ndim != 2:
            raise InputError("increments must be a 2-d array of shape (L, d)")
        if incs.shape[0] != knots.size - 1:
            raise InputError(
                f"{incs.shape[0]} increments do not match {knots.size} knots"
            )
        if incs.shape[0] and not np.all(np.diff(knots) > 0):
            raise InputError("knot times must be strictly increasing")
        if incs.shape[0] and np.any(np.all(incs == 0.0, axis=1)):
            raise InputError("increments must be non-zero (drop them on construction)")
        if not (np.all(np.isfinite(knots)) and np.all(np.isfinite(incs))):
            raise InputError("path data must be finite")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "increments", incs)

    @property
    def dim(self) -> int:
        return self.increments.shape[1]

    @property
    def num_segments(self) -> int:
        return self.increments.shape[0]

    @property
    def points(self) -> np.ndarray:
        """Knot positions ``(L + 1, d)`` starting at the origin."""
        out = np.zeros((self.num_segments + 1, self.dim))
        np.cumsum(self.increments, axis=0, out=out[1:])
        return out

    @property
    def durations(self) -> np.ndarray:
        return np.diff(self.knots)


def from_samples(times: Sequence[float], points: Sequence[Sequence[float]]) -> PiecewiseLinearPath:
    """Build a path from sampled positions.

    The basepoint is shifted to the origin and zero increments are dropped
    (their time span is merged into the following knot).  Raises on
    non-increasing times, inconsistent dimensions, or fewer than two samples.
    """
    try:
        t = np.asarray(times, dtype=float)
        p = np.asarray(points, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"samples are not rectangular numeric arrays: {exc}") from exc
    if t.ndim != 1:
        raise InputError("times must be a 1-d sequence")
    if t.size < 2:
        raise InputError(f"need at least 2 samples, got {t.size}")
    if p.ndim == 1:
        p = p[:, None]
    if p.ndim != 2 or p.shape[0] != t.size:
        raise InputError(
            f"points shape {p.shape} does not match {t.size} sample times"
        )
    if p.shape[1] < 1:
        raise InputError("points must have at least one coordinate")
    if np.any(np.diff(t) <= 0):
        raise InputError("sample times must be strictly increasing")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(p))):
        raise InputError("samples must be finite")

    incs = np.diff(p, axis=0)
    keep = ~np.all(incs == 0.0, axis=1)
    knots = np.concatenate(([t[0]], t[1:][keep]))
    return PiecewiseLinearPath(knots=knots, increments=incs[keep])


def constant_path(dim: int) -> PiecewiseLinearPath:
    """The constant path at the origin in ``R^dim`` (no increments)."""
    return PiecewiseLinearPath(knots=np.zeros(1), increments=np.zeros((0, dim)))


def line_path(increment: Sequence[float]) -> PiecewiseLinearPath:
    """The straight line from the origin to ``increment`` over ``[0, 1]``."""
    v = np.atleast_1d(np.asarray(increment, dtype=float))
    return PiecewiseLinearPath(knots=np.array([0.0, 1.0]), increments=v[None, :])


def concatenate(a: PiecewiseLinearPath, b: PiecewiseLinearPath) -> PiecewiseLinearPath:
    """The concatenation ``a ⋆ b``: increments of ``a`` followed by those of
    ``b``, with time reparameterized to ``[0, 1]`` preserving relative
    durations."""
    if a.dim != b.dim:
        raise InputError(f"cannot concatenate paths of dims {a.dim} and {b.dim}")
    incs = np.concatenate([a.increments, b.increments], axis=0)
    durs = np.concatenate([a.durations, b.durations])
    if durs.size == 0:
        return constant_path(a.dim)
    knots = np.concatenate(([0.0], np.cumsum(durs) / durs.sum()))
    knots[-1] = 1.0
    return PiecewiseLinearPath(knots=knots, increments=incs)


def reverse(a: PiecewiseLinearPath) -> PiecewiseLinearPath:
    """The time reversal of ``a`` on the same time interval."""
    knots = a.knots[0] + a.knots[-1] - a.knots[::-1]
    return PiecewiseLinearPath(knots=knots, increments=-a.increments[::-1])


def one_variation(a: PiecewiseLinearPath) -> float:
    """Length in the Euclidean norm: ``Σ_l ‖Δ_l‖_2``."""
    if a.num_segments == 0:
        return 0.0
    return float(np.linalg.norm(a.increments, axis=1).sum())


def l1_variation(a: PiecewiseLinearPath) -> float:
    """Length in the ℓ¹ norm: ``Σ_l ‖Δ_l‖_1``.  Dominates coordinate-wise
    variation, so ``Σ_{|w|=n} |S^w| <= l1_variation**n / n!``."""
    if a.num_segments == 0:
        return 0.0
    return float(np.abs(a.increments).sum())


@dataclass(frozen=True)
class TensorSeries:
    """A truncated tensor series: one flat coefficient array per level.

    ``levels[n]`` has length ``dim**n`` and holds the coefficients of all
    words of length ``n`` in row-major order (first letter most significant).
    The level-0 coefficient (empty word) of a signature is always 1.
    """

    dim: int
    depth: int
    levels: list[np.ndarray] = field(compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise InputError(f"tensor series dimension must be >= 1, got {self.dim}")
        if self.depth < 0:
            raise InputError(f"tensor series depth must be >= 0, got {self.depth}")
        if len(self.levels) != self.depth + 1:
            raise InputError(
                f"expected {self.depth + 1} levels, got {len(self.levels)}"
            )
        cleaned = []
        for n, lev in enumerate(self.levels):
            arr = np.asarray(lev, dtype=float).ravel()
            if arr.size != self.dim**n:
                raise InputError(
                    f"level {n} has {arr.size} entries, expected {self.dim**n}"
                )
            cleaned.append(arr)
        object.__setattr__(self, "levels", cleaned)

    def coefficient(self, w: Sequence[int]) -> float:
        """The coefficient of the word ``w`` (0.0 beyond the truncation depth)."""
        word = check_word(w, self.dim)
        if len(word) > self.depth:
            return 0.0
        return float(self.levels[len(word)][word_index(word, self.dim)])

    def coefficients(self) -> dict[Word, float]:
        """All coefficients as a word-keyed dict, in length-then-lex order."""
        from .words import all_words

        return {w: self.coefficient(w) for w in all_words(self.dim, self.depth)}


def unit_series(dim: int, depth: int) -> TensorSeries:
    """The multiplicative unit: 1 at the empty word, 0 elsewhere."""
    levels = [np.zeros(dim**n) for n in range(depth + 1)]
    levels[0][0] = 1.0
    return TensorSeries(dim=dim, depth=depth, levels=levels)


def tensor_exponential(v: Sequence[float], depth: int) -> TensorSeries:
    """``exp(v) = Σ_n v^{⊗n} / n!`` truncated at ``depth``."""
    vec = np.atleast_1d(np.asarray(v, dtype=float))
    levels = [np.ones(1)]
    for n in range(1, depth + 1):
        levels.append(np.kron(levels[-1], vec) / n)
    return TensorSeries(dim=vec.size, depth=depth, levels=levels)


def chen_product(a: TensorSeries, b: TensorSeries) -> TensorSeries:
    """Truncated tensor-algebra product; Chen's identity states
    ``S(a ⋆ b) = chen_product(S(a), S(b))``."""
    if a.dim != b.dim:
        raise InputError(f"cannot multiply series of dims {a.dim} and {b.dim}")
    depth = min(a.depth, b.depth)
    levels = []
    for n in range(depth + 1):
        acc = np.zeros(a.dim**n)
        for k in range(n + 1):
            acc += np.outer(a.levels[k], b.levels[n - k]).ravel()
        levels.append(acc)
    return TensorSeries(dim=a.dim, depth=depth, levels=levels)


def truncated_signature(a: PiecewiseLinearPath, depth: int) -> TensorSeries:
    """The signature of ``a`` truncated at ``depth``: the Chen product of the
    tensor exponentials of its increments."""
    if depth < 0:
        raise InputError(f"signature depth must be >= 0, got {depth}")
    sig = unit_series(a.dim, depth)
    for inc in a.increments:
        sig = chen_product(sig, tensor_exponential(inc, depth))
    return sig


def signature_coefficient(a: PiecewiseLinearPath, w: Sequence[int]) -> float:
    """The single signature coefficient ``S^w(a)``."""
    word = check_word(w, a.dim)
    return truncated_signature(a, len(word)).coefficient(word)


def signature_tail_bound(a: PiecewiseLinearPath, depth: int) -> float:
    """Upper bound on ``Σ_{|w| > depth} |S^w(a)|``: the factorial tail
    ``Σ_{n > depth} L1^n / n!`` with ``L1`` the ℓ¹ one-variation."""
    L1 = l1_variation(a)
    term = L1 ** (depth + 1) / math.factorial(depth + 1)
    total = 0.0
    n = depth + 1
    while term > total * 1e-18 + 1e-300 and n < depth + 400:
        total += term
        n += 1
        term *= L1 / n
    return total
