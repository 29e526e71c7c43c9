"""Noncommutative laws from Schwinger–Dyson equations, and their consequences.

A *law* here is the collection of mixed moments ``a_w = τ(X_{w_1}···X_{w_n})``
of a ``d``-tuple of self-adjoint noncommutative random variables, truncated at
a maximum word length.  The tuple is characterized by a potential

    V = (1/2) Σ_i X_i² + W,      W = Σ_j g_j · X_{v_j},

through the Schwinger–Dyson equations ``τ⊗τ(∂_i P) = τ(P · D_i V)`` for all
monomials ``P``, where ``∂_i`` is the free difference quotient and ``D_i`` the
cyclic derivative.  Written on moments this becomes the recursion

    a_{w·k} = Σ_{w = u·k·v} a_u a_v  −  Σ_j g_j · a_{w · D_k X_{v_j}} ,

which for ``W = 0`` is exactly the non-crossing pairing recursion of a free
semicircular family.  For ``W ≠ 0`` the right side references words longer
than ``w·k`` (by ``|v_j| − 2``), so the truncated system is closed by treating
coefficients beyond the maximum degree as zero and solved as a damped
fixed-point iteration started at the semicircular law.

Consequences implemented here:

* ``limiting_development`` — the large-``N`` limit of the expected unitary
  development ``E tr U_γ``:  ``⟨γ⟩ = Σ_w i^{|w|} a_w S^w(γ)``;
* ``loop_operator_series`` — for ``d = 1``, the exponential generating
  coefficients ``c_n = a_{1^n}/n!`` appearing in the master-loop identity
  ``V'(d/dt) Ŵ = Ŵ ⋆ Ŵ``;
* ``gue_integral_equation_solve`` — the two-parameter Volterra equation
  ``k(s,t) = 1 − ∬_{s≤u≤v≤t} k(s,u) k(u,v) ⟨dγ_u, dγ_v⟩`` satisfied by the
  limiting development of the path restricted to subintervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DivergenceError, InputError
from .io import parse_word_key, word_key
from .paths import PiecewiseLinearPath, l1_variation, truncated_signature
from .words import Word, check_word, word_index

# Iterates whose coefficients exceed this are declared divergent.
_DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class Potential:
    """``V = (1/2) Σ X_i² + Σ_j g_j X_{v_j}`` specified by coupling words."""

    dim: int
    couplings: tuple[tuple[Word, float], ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise InputError(f"potential dimension must be >= 1, got {self.dim}")
        pairs = self.couplings
        if isinstance(pairs, dict):
            pairs = tuple(pairs.items())
        cleaned = []
        for w, g in pairs:
            word = check_word(w, self.dim)
            if len(word) == 0:
                raise InputError("coupling words must be non-empty")
            cleaned.append((word, float(g)))
        object.__setattr__(self, "couplings", tuple(cleaned))

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "couplings": [{"word": list(w), "g": g} for w, g in self.couplings],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Potential":
        if not isinstance(data, dict) or "dim" not in data:
            raise InputError("potential JSON must be an object with a 'dim' field")
        raw = data.get("couplings", [])
        if not isinstance(raw, list):
            raise InputError("potential 'couplings' must be a list")
        couplings = []
        for item in raw:
            if not isinstance(item, dict) or "word" not in item or "g" not in item:
                raise InputError("each coupling needs 'word' and 'g' fields")
            couplings.append((tuple(item["word"]), float(item["g"])))
        return cls(dim=int(data["dim"]), couplings=tuple(couplings))


@dataclass(frozen=True)
class NCLaw:
    """Truncated mixed moments ``a_w`` of a ``d``-tuple, stored per level.

    ``levels[n]`` holds all words of length ``n`` in row-major order.  The
    empty-word coefficient is 1.  Coefficients beyond ``max_degree`` read as
    0.0 (the truncation convention of the solver).
    """

    dim: int
    max_degree: int
    levels: list[np.ndarray] = field(compare=False)
    tol: float = 0.0
    residual: float = 0.0

    def __post_init__(self):
        if len(self.levels) != self.max_degree + 1:
            raise InputError(
                f"expected {self.max_degree + 1} levels, got {len(self.levels)}"
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
        word = check_word(w, self.dim)
        if len(word) > self.max_degree:
            return 0.0
        return float(self.levels[len(word)][word_index(word, self.dim)])

    def coefficients(self) -> dict[Word, float]:
        from .words import all_words

        return {w: self.coefficient(w) for w in all_words(self.dim, self.max_degree)}

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "max_degree": self.max_degree,
            "tol": self.tol,
            "residual": self.residual,
            "coeffs": {word_key(w): v for w, v in self.coefficients().items()},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "NCLaw":
        try:
            dim = int(data["dim"])
            max_degree = int(data["max_degree"])
            coeffs = data["coeffs"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed law JSON: {exc}") from exc
        levels = [np.zeros(dim**n) for n in range(max_degree + 1)]
        for key, val in coeffs.items():
            w = parse_word_key(key)
            if len(w) <= max_degree:
                levels[len(w)][word_index(w, dim)] = float(val)
        return cls(
            dim=dim,
            max_degree=max_degree,
            levels=levels,
            tol=float(data.get("tol", 0.0)),
            residual=float(data.get("residual", 0.0)),
        )


def _extend_level(levels: list[np.ndarray], n: int, dim: int,
                  couplings: tuple[tuple[Word, float], ...],
                  max_degree: int) -> np.ndarray:
    """Level ``n + 1`` of the moment recursion evaluated on ``levels``.

    Target entries are ``a_{w·k}`` for ``|w| = n``: the pairing (quadratic)
    term sums ``a_u a_v`` over splits ``w = u·k·v``, and each coupling word
    ``v_j`` subtracts ``g_j a_{w·z}`` for every cyclic-derivative term ``z``
    of ``v_j`` at the letter ``k``.  Words beyond ``max_degree`` read as 0.
    """
    target = np.zeros((dim**n, dim))
    for i in range(n):
        left = levels[i]
        right = levels[n - 1 - i]
        block = np.outer(left, right)
        view = target.reshape(dim**i, dim, dim ** (n - 1 - i), dim)
        for k in range(dim):
            view[:, k, :, k] += block
    for v_word, g in couplings:
        for q, k in enumerate(v_word):
            z = v_word[q + 1 :] + v_word[:q]
            total = n + len(z)
            if total > max_degree:
                continue
            src = levels[total].reshape(dim**n, dim ** len(z))
            target[:, k - 1] -= g * src[:, word_index(z, dim)]
    return target.reshape(dim ** (n + 1))


@lru_cache(maxsize=None)
def _semicircular_levels(dim: int, max_degree: int) -> tuple[np.ndarray, ...]:
    levels = [np.ones(1)]
    for n in range(max_degree):
        levels.append(_extend_level(levels, n, dim, (), max_degree))
    return tuple(lev.copy() for lev in levels)


def semicircular_law(dim: int, max_degree: int) -> NCLaw:
    """The law of a free standard semicircular ``d``-tuple: ``a_w`` counts the
    non-crossing pairings of ``w`` whose pairs join equal letters."""
    if max_degree < 0:
        raise InputError(f"max_degree must be >= 0, got {max_degree}")
    levels = [lev.copy() for lev in _semicircular_levels(dim, max_degree)]
    return NCLaw(dim=dim, max_degree=max_degree, levels=levels, tol=0.0, residual=0.0)


def solve_schwinger_dyson(
    potential: Potential,
    max_degree: int,
    tol: float = 1e-10,
    max_iter: int = 1000,
    damping: float = 0.5,
) -> NCLaw:
    """Solve the truncated Schwinger–Dyson moment system for ``potential``.

    Damped fixed-point iteration (factor ``damping``) started at the
    semicircular law; coefficients beyond ``max_degree`` are treated as zero.
    Returns the law with the final sup-norm residual of the moment map.
    Raises :class:`ConvergenceError` after ``max_iter`` sweeps, or
    :class:`DivergenceError` (couplings outside the convergence ball) if the
    iteration blows up.
    """
    if max_degree < 0:
        raise InputError(f"max_degree must be >= 0, got {max_degree}")
    if not 0 < damping <= 1:
        raise InputError(f"damping must lie in (0, 1], got {damping}")
    dim = potential.dim
    levels = [lev.copy() for lev in _semicircular_levels(dim, max_degree)]
    residuals: list[float] = []
    for _ in range(max_iter):
        new = [np.ones(1)]
        for n in range(max_degree):
            new.append(_extend_level(levels, n, dim, potential.couplings, max_degree))
        residual = 0.0
        for n in range(1, max_degree + 1):
            residual = max(residual, float(np.max(np.abs(new[n] - levels[n]))))
        residuals.append(residual)
        if not math.isfinite(residual) or any(
            np.max(np.abs(lev)) > _DIVERGENCE_LIMIT for lev in new[1:] if lev.size
        ):
            raise DivergenceError(
                "Schwinger-Dyson iteration diverged: couplings outside the "
                "convergence ball",
                residuals,
            )
        if residual <= tol:
            return NCLaw(
                dim=dim,
                max_degree=max_degree,
                levels=levels,
                tol=tol,
                residual=residual,
            )
        for n in range(1, max_degree + 1):
            levels[n] = levels[n] + damping * (new[n] - levels[n])
    raise ConvergenceError(
        f"Schwinger-Dyson iteration did not reach tol={tol} in {max_iter} sweeps "
        f"(last residual {residuals[-1]:.3e})",
        residuals,
    )


def sd_residual(law: NCLaw, potential: Potential, w: Sequence[int], k: int) -> float:
    """Residual of one Schwinger–Dyson relation at the word ``w`` and letter
    ``k``: ``a_{w·k} − Σ_{w=u·k·v} a_u a_v + Σ_j g_j a_{w·D_k v_j}`` with
    out-of-range coefficients read as zero."""
    word = check_word(w, law.dim)
    if not 1 <= int(k) <= law.dim:
        raise InputError(f"letter {k} outside alphabet of size {law.dim}")
    k = int(k)
    value = law.coefficient(word + (k,))
    for pos, letter in enumerate(word):
        if letter == k:
            value -= law.coefficient(word[:pos]) * law.coefficient(word[pos + 1 :])
    for v_word, g in potential.couplings:
        for q, letter in enumerate(v_word):
            if letter == k:
                z = v_word[q + 1 :] + v_word[:q]
                value += g * law.coefficient(word + z)
    return float(value)


@dataclass(frozen=True)
class DevelopmentValue:
    """A truncated development value together with its truncation tail bound."""

    value: complex
    tail_bound: float

    def __complex__(self) -> complex:
        return complex(self.value)


def growth_radius(law: NCLaw) -> float:
    """A growth radius ``R`` with ``|a_w| <= R^{|w|}`` on the computed range:
    the maximum of 2 (exact for semicircular laws, whose coefficients are
    bounded by Catalan numbers <= 2^{|w|}) and ``max |a_w|^{1/|w|}``."""
    radius = 2.0
    for n in range(1, law.max_degree + 1):
        top = float(np.max(np.abs(law.levels[n]))) if law.levels[n].size else 0.0
        if top > 0:
            radius = max(radius, top ** (1.0 / n))
    return radius


def limiting_development(
    law: NCLaw, path: PiecewiseLinearPath, depth: int
) -> DevelopmentValue:
    """The limiting expected unitary development ``Σ_w i^{|w|} a_w S^w(γ)``
    truncated at word length ``depth``, with a factorial tail bound
    ``Σ_{n>depth} (R·L1)^n / n!`` (``R`` the law's growth radius, ``L1`` the
    path's ℓ¹ one-variation)."""
    if path.dim != law.dim:
        raise InputError(
            f"path dimension {path.dim} does not match law dimension {law.dim}"
        )
    if depth > law.max_degree:
        raise InputError(
            f"depth {depth} exceeds the law's max_degree {law.max_degree}"
        )
    sig = truncated_signature(path, depth)
    value = 0.0 + 0.0j
    for n in range(depth + 1):
        value += (1j**n) * float(np.dot(law.levels[n], sig.levels[n]))
    radius = growth_radius(law)
    x = radius * l1_variation(path)
    term = x ** (depth + 1) / math.factorial(depth + 1)
    tail = 0.0
    n = depth + 1
    while term > tail * 1e-18 + 1e-300 and n < depth + 500:
        tail += term
        n += 1
        term *= x / n
    return DevelopmentValue(value=value, tail_bound=tail)


def loop_operator_series(law: NCLaw, order: int) -> np.ndarray:
    """Coefficients ``c_n = a_{1^n}/n!`` (``n = 0..order``) of the exponential
    moment generating function of a one-letter law.  These satisfy the
    master-loop identity ``V'(d/dt) Ŵ = Ŵ ⋆ Ŵ`` (for the quadratic potential:
    the Catalan convolution).  Only defined for ``dim == 1``."""
    if law.dim != 1:
        raise InputError(f"loop operator series requires dim 1, got dim {law.dim}")
    if order > law.max_degree:
        raise InputError(f"order {order} exceeds max_degree {law.max_degree}")
    return np.array(
        [law.levels[n][0] / math.factorial(n) for n in range(order + 1)]
    )


@dataclass(frozen=True)
class IntegralEquationTable:
    """Discretized solution ``k(s, t)`` of the development integral equation
    on the grid ``grid``; ``table[i, j] = k(grid[i], grid[j])`` for ``i <= j``
    (mirrored below the diagonal).  ``terminal`` is ``k(0, T)``, the limiting
    development of the whole path."""

    grid: np.ndarray
    table: np.ndarray

    @property
    def terminal(self) -> float:
        return float(self.table[0, -1])


def gue_integral_equation_solve(
    path: PiecewiseLinearPath, resolution: float = 1.0 / 128.0
) -> IntegralEquationTable:
    """Solve ``k(s,t) = 1 − ∬_{s≤u≤v≤t} k(s,u) k(u,v) ⟨γ'(u), γ'(v)⟩ du dv``.

    The path's time is normalized to ``[0, 1]`` and each segment subdivided
    into cells no wider than ``resolution``.  Differentiating in ``t`` gives
    ``∂_t k(s,t) = −∫_s^t k(s,u) k(u,t) ⟨γ'(u), γ'(t)⟩ du``, which is marched
    cell by cell with trapezoidal quadrature in both variables (second order
    in the cell width); the single implicit occurrence of the new unknown is
    solved in closed form.  Boundary value ``k(s, s) = 1``.
    """
    if not 0 < resolution <= 1:
        raise InputError(f"resolution must lie in (0, 1], got {resolution}")
    if path.num_segments == 0:
        return IntegralEquationTable(grid=np.zeros(1), table=np.ones((1, 1)))

    total = path.knots[-1] - path.knots[0]
    nodes = [0.0]
    grads = []
    for dur, inc in zip(path.durations, path.increments):
        width = dur / total
        cells = max(1, math.ceil(width / resolution - 1e-12))
        start = nodes[-1]
        for c in range(1, cells + 1):
            nodes.append(start + width * c / cells)
        grads.extend([inc / width] * cells)
    grid = np.array(nodes)
    grid[-1] = 1.0
    grads = np.array(grads)
    G = len(grads)
    h = np.diff(grid)
    ip = grads @ grads.T  # ip[a, b] = <gamma'(cell a), gamma'(cell b)>

    K = np.eye(G + 1)
    for j in range(1, G + 1):
        gj = j - 1  # cell index of [grid[j-1], grid[j]]
        for i in range(j - 1, -1, -1):
            # J_prev = integral over u in [r_i, r_{j-1}] of k(r_i,u) k(u,r_{j-1})
            # <gamma'(u), gamma'(cell j)>, all known.
            if i < j - 1:
                v = K[i, i : j] * K[i : j, j - 1]
                w = h[i : j - 1] * ip[i : j - 1, gj]
                j_prev = 0.5 * np.dot(w, v[:-1] + v[1:])
            else:
                j_prev = 0.0
            # Same integral up to r_j; entries involving the unknown K[i, j]
            # contribute 0 here (K[i, j] is still 0) and are restored through
            # the closed-form coefficient below.
            v = K[i, i : j + 1] * K[i : j + 1, j]
            w = h[i:j] * ip[i:j, gj]
            j_lin = 0.5 * np.dot(w, v[:-1] + v[1:])
            coef = 0.5 * (h[i] * ip[i, gj] + h[j - 1] * ip[gj, gj])
            rhs = K[i, j - 1] - 0.5 * h[j - 1] * (j_prev + j_lin)
            K[i, j] = rhs / (1.0 + 0.5 * h[j - 1] * coef)
            K[j, i] = K[i, j]
    return IntegralEquationTable(grid=grid, table=K)
