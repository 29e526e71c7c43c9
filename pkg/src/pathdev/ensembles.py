"""Finite-``N`` matrix ensembles and Monte Carlo unitary path developments.

A GUE tuple is ``d`` independent Hermitian ``N × N`` matrices with
``E tr̄ A² = 1`` exactly (off-diagonal entries complex Gaussian of variance
``1/N``, diagonal real Gaussian of variance ``1/N``).  The unitary development
of a piecewise-linear path ``γ`` along a Hermitian tuple ``A`` is the ordered
product over segments

    U_γ(A) = exp(i Σ_ν Δ_1^ν A_ν) · exp(i Σ_ν Δ_2^ν A_ν) ··· ,

(first segment leftmost), which is multiplicative under concatenation:
``U_{γ⋆σ} = U_γ · U_σ``.  The Trotter-style truncation replaces each segment
factor by ``(I + i Σ_ν Δ^ν A_ν / K)^K``.

``classical_mc_estimate`` averages ``tr̄ U`` over independent tuple draws with
per-sample derived seeds.  For single-segment paths the normalized trace
``tr̄ (I + i c A / K)^K`` depends only on the eigenvalues of one GUE draw, so
the estimator samples those eigenvalues directly from the tridiagonal model
(diagonal ``N(0, 1/N)``, sub-diagonal ``b_k = sqrt(Gamma(N−k, 1)/N)``), whose
spectrum has exactly the GUE law, at ``O(N²)`` per draw instead of ``O(N³)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from ._seeding import DEFAULT_SEED, rng_for
from .errors import InputError
from .paths import PiecewiseLinearPath, concatenate, reverse


@dataclass(frozen=True)
class HermitianTuple:
    """A tuple of ``d`` Hermitian ``N × N`` matrices."""

    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(np.asarray(m, dtype=complex) for m in self.matrices)
        if not mats:
            raise InputError("a Hermitian tuple needs at least one matrix")
        N = mats[0].shape[0]
        for m in mats:
            if m.ndim != 2 or m.shape != (N, N):
                raise InputError("all matrices must be square of equal size")
            if not np.allclose(m, m.conj().T, atol=1e-12 * max(1.0, float(np.abs(m).max()))):
                raise InputError("matrices must be Hermitian")
        object.__setattr__(self, "matrices", mats)

    @property
    def N(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def dim(self) -> int:
        return len(self.matrices)


def _sample_gue_rng(N: int, d: int, rng: np.random.Generator) -> HermitianTuple:
    mats = []
    for _ in range(d):
        x = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / math.sqrt(2)
        mats.append((x + x.conj().T) / math.sqrt(2 * N))
    return HermitianTuple(matrices=tuple(mats))


def sample_gue(N: int, d: int, seed: int) -> HermitianTuple:
    """Draw ``d`` independent GUE matrices normalized to ``E tr̄ A² = 1``.

    For ``N = 1, d = 1`` this is a single real standard Gaussian.
    """
    if N < 1 or d < 1:
        raise InputError(f"need N >= 1 and d >= 1, got N={N}, d={d}")
    return _sample_gue_rng(N, d, rng_for(seed))


def _gue_eigenvalues_rng(N: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvalues of one GUE draw via the tridiagonal model (exact in law)."""
    diag = rng.standard_normal(N) / math.sqrt(N)
    if N == 1:
        return diag
    off = np.sqrt(rng.gamma(shape=np.arange(N - 1, 0, -1))) / math.sqrt(N)
    return eigvalsh_tridiagonal(diag, off, lapack_driver="sterf")


def _segment_hamiltonians(t: HermitianTuple, path: PiecewiseLinearPath) -> np.ndarray:
    if path.dim != t.dim:
        raise InputError(
            f"path dimension {path.dim} does not match tuple size {t.dim}"
        )
    stack = np.stack(t.matrices)  # (d, N, N)
    return np.einsum("ld,dij->lij", path.increments, stack)


def develop_exact(t: HermitianTuple, path: PiecewiseLinearPath) -> np.ndarray:
    """The unitary development: ordered product of ``exp(i Σ_ν Δ_l^ν A_ν)``
    with the first segment leftmost (so development is multiplicative under
    path concatenation).  Computed by Hermitian eigendecomposition."""
    U = np.eye(t.N, dtype=complex)
    for H in _segment_hamiltonians(t, path):
        w, V = np.linalg.eigh(H)
        U = U @ ((V * np.exp(1j * w)) @ V.conj().T)
    return U


def develop_truncated(t: HermitianTuple, path: PiecewiseLinearPath, K: int) -> np.ndarray:
    """Degree-``K`` truncated development: ordered product of
    ``(I + i H_l / K)^K`` per segment.  Approaches :func:`develop_exact` at
    rate ``O(1/K)``."""
    if K < 1:
        raise InputError(f"truncation order K must be >= 1, got {K}")
    U = np.eye(t.N, dtype=complex)
    for H in _segment_hamiltonians(t, path):
        B = np.eye(t.N, dtype=complex) + 1j * H / K
        U = U @ np.linalg.matrix_power(B, K)
    return U


@dataclass(frozen=True)
class DevelopmentResult:
    """Monte Carlo development estimate: sample mean of ``tr̄ U`` with the
    standard error of its real part."""

    value: complex
    stderr: float
    N: int
    M: int
    K: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "value_re": float(self.value.real),
            "value_im": float(self.value.imag),
            "stderr": float(self.stderr),
            "N": self.N,
            "M": self.M,
            "K": self.K,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DevelopmentResult":
        try:
            return cls(
                value=complex(float(data["value_re"]), float(data["value_im"])),
                stderr=float(data["stderr"]),
                N=int(data["N"]),
                M=int(data["M"]),
                K=int(data["K"]),
                seed=int(data["seed"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed Monte Carlo result JSON: {exc}") from exc


def classical_mc_estimate(
    path: PiecewiseLinearPath,
    N: int,
    M: int,
    K: int,
    seed: int = DEFAULT_SEED,
    force_dense: bool = False,
) -> DevelopmentResult:
    """Estimate ``E tr̄ U^K_γ(A)`` over ``M`` independent GUE tuple draws.

    Sample ``s`` uses the derived stream ``(seed, s)``, so results are
    deterministic given ``seed`` and independent across samples.  Paths with
    at most one segment use the tridiagonal eigenvalue sampler (identical in
    law, ``O(N²)``); multi-segment paths build dense tuples.  ``force_dense``
    forces the dense route.
    """
    if N < 1 or M < 1 or K < 1:
        raise InputError(f"need N, M, K >= 1, got N={N}, M={M}, K={K}")
    values = np.empty(M, dtype=complex)
    single = path.num_segments <= 1 and not force_dense
    if single and path.num_segments == 1:
        scale = float(np.linalg.norm(path.increments[0]))
    for s in range(M):
        rng = rng_for(seed, s)
        if single:
            if path.num_segments == 0:
                values[s] = 1.0
            else:
                lam = scale * _gue_eigenvalues_rng(N, rng)
                values[s] = np.mean((1.0 + 1j * lam / K) ** K)
        else:
            t = _sample_gue_rng(N, path.dim, rng)
            values[s] = np.trace(develop_truncated(t, path, K)) / N
    mean = complex(values.mean())
    stderr = float(values.real.std(ddof=1) / math.sqrt(M)) if M > 1 else 0.0
    return DevelopmentResult(value=mean, stderr=stderr, N=N, M=M, K=K, seed=seed)


def finite_n_kernel(
    s: PiecewiseLinearPath,
    t: PiecewiseLinearPath,
    N: int,
    M: int,
    K: int,
    seed: int = DEFAULT_SEED,
) -> DevelopmentResult:
    """The finite-``N`` development kernel ``E tr̄ U(s ⋆ reverse(t))``: the
    Monte Carlo development of ``s`` concatenated with ``t`` reversed."""
    return classical_mc_estimate(concatenate(s, reverse(t)), N=N, M=M, K=K, seed=seed)


def classical_sufficient_params(
    epsilon: float, delta: float, delta_gamma: float
) -> dict[str, int]:
    """Sufficient ``(N, M, K)`` for ``P(|estimate − ⟨γ⟩| > ε) < δ`` from the
    concentration analysis: ``M > (2/ε²) ln(2/δ)``, ``N > e^{2Δ}/ε²``,
    ``K > Δ e^{2Δ}/ε`` with ``Δ`` the path's one-variation.  Returned values
    are the smallest integers strictly above each threshold."""
    if not (0 < epsilon and 0 < delta < 1):
        raise InputError("need epsilon > 0 and 0 < delta < 1")
    if delta_gamma < 0:
        raise InputError("one-variation must be non-negative")
    grow = math.exp(2.0 * delta_gamma)
    return {
        "N": math.floor(grow / epsilon**2) + 1,
        "M": math.floor(2.0 / epsilon**2 * math.log(2.0 / delta)) + 1,
        "K": math.floor(delta_gamma * grow / epsilon) + 1,
    }


def mixed_moment_estimate(
    word: Sequence[int], N: int, M: int, seed: int = DEFAULT_SEED
) -> tuple[float, float]:
    """Monte Carlo estimate of ``E tr̄ (A_{w_1} ··· A_{w_k})`` over GUE tuples:
    (mean of the real part, standard error).  Converges to the semicircular
    moment as ``N → ∞`` at rate ``O(1/N²)``."""
    w = [int(x) for x in word]
    if not w or min(w) < 1:
        raise InputError("word must be a non-empty tuple of letters >= 1")
    d = max(w)
    vals = np.empty(M)
    for s in range(M):
        t = _sample_gue_rng(N, d, rng_for(seed, s))
        prod = t.matrices[w[0] - 1]
        for letter in w[1:]:
            prod = prod @ t.matrices[letter - 1]
        vals[s] = np.trace(prod).real / N
    stderr = float(vals.std(ddof=1) / math.sqrt(M)) if M > 1 else 0.0
    return float(vals.mean()), stderr
