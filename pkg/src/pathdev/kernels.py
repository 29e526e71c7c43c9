"""Signature kernels and development kernels, with a common Gram-matrix API.

Two deterministic signature kernels:

* ``signature_kernel_series`` — the truncated inner product of signatures
  ``k(s,t) = Σ_{|w| <= depth} S^w(s) S^w(t)`` with a factorial tail bound;
* ``signature_kernel_pde`` — the same kernel solved from its Goursat PDE
  ``∂_u∂_v k = ⟨s'(u), t'(v)⟩ k`` by a second-order implicit corner scheme.

Four development-kernel routes, all evaluating the expected unitary
development of ``s ⋆ reverse(t)`` (``k(γ, σ) = E tr̄ U_γ U_σ†``):

* ``gue-series`` — the large-``N`` limit via the semicircular law's word
  series ``Σ_w i^{|w|} a_w S^w``;
* ``gue-integral-eq`` — the same limit from its two-parameter integral
  equation;
* ``gue-classical-mc`` — Monte Carlo over finite-``N`` GUE tuples;
* ``gue-quantum`` — the simulated DQC1 shot estimator on random Pauli-string
  ensembles.

``gram_matrix`` evaluates any route on a labeled dataset; stochastic entries
use per-entry derived seeds (or one shared stream with ``shared_samples``).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ._seeding import DEFAULT_SEED, seed_sequence
from .ensembles import classical_mc_estimate, classical_sufficient_params
from .errors import InputError
from .nclaw import gue_integral_equation_solve, limiting_development, semicircular_law
from .paths import (
    PiecewiseLinearPath,
    concatenate,
    l1_variation,
    one_variation,
    reverse,
    truncated_signature,
)
from .quantum import qsigker_run

METHODS = (
    "signature-pde",
    "signature-series",
    "gue-series",
    "gue-integral-eq",
    "gue-classical-mc",
    "gue-quantum",
)

METHOD_ALIASES = {
    "quantum": "gue-quantum",
    "classical-mc": "gue-classical-mc",
    "integral-eq": "gue-integral-eq",
}


def resolve_method(name: str) -> str:
    method = METHOD_ALIASES.get(name, name)
    if method not in METHODS:
        raise InputError(
            f"unknown kernel method {name!r}; choose from {', '.join(METHODS)}"
        )
    return method


_CONFIG_DEFAULTS = {
    "depth": 12,
    "grid_step": 1.0 / 128.0,
    "matrix_n": 128,
    "mc_samples": 200,
    "trotter_k": 64,
    "n_qubits": 6,
    "pauli_m": 6,
    "shots": 2000,
}


@dataclass(frozen=True)
class KernelConfig:
    """Parameters for kernel evaluation; only the fields used by ``method``
    matter.  Unset fields (``None``) fall back to module defaults — except
    under ``epsilon``/``delta`` accuracy targets, where unset stochastic
    parameters are auto-derived from the sufficient-parameter formulas.
    ``seed`` feeds the stochastic routes; ``shared_samples`` makes every Gram
    entry reuse the same sample stream instead of per-entry derived
    streams."""

    method: str = "signature-series"
    depth: int | None = None
    grid_step: float | None = None
    matrix_n: int | None = None
    mc_samples: int | None = None
    trotter_k: int | None = None
    n_qubits: int | None = None
    pauli_m: int | None = None
    shots: int | None = None
    epsilon: float | None = None
    delta: float | None = None
    constant_C: float = 1.0
    seed: int = DEFAULT_SEED
    shared_samples: bool = False

    def __post_init__(self):
        object.__setattr__(self, "method", resolve_method(self.method))
        if (self.epsilon is None) != (self.delta is None):
            raise InputError("epsilon and delta must be given together")

    def get(self, name: str):
        """The field value, or the module default when unset."""
        value = getattr(self, name)
        return _CONFIG_DEFAULTS[name] if value is None else value


@dataclass(frozen=True)
class KernelValue:
    """A kernel evaluation: the value, a standard error when stochastic, a
    truncation tail bound when truncated, and route-specific details."""

    value: float
    stderr: float | None = None
    tail_bound: float | None = None
    details: dict = field(default_factory=dict)


def signature_kernel_series(
    s: PiecewiseLinearPath, t: PiecewiseLinearPath, depth: int = _CONFIG_DEFAULTS["depth"]
) -> float:
    """``Σ_{|w| <= depth} S^w(s) S^w(t)`` (use
    :func:`signature_kernel_tail_bound` for the discarded mass)."""
    if s.dim != t.dim:
        raise InputError(f"paths have different dimensions {s.dim} and {t.dim}")
    sig_s = truncated_signature(s, depth)
    sig_t = truncated_signature(t, depth)
    return float(
        math.fsum(
            float(np.dot(sig_s.levels[n], sig_t.levels[n])) for n in range(depth + 1)
        )
    )


def signature_kernel_tail_bound(
    s: PiecewiseLinearPath, t: PiecewiseLinearPath, depth: int
) -> float:
    """Bound on ``Σ_{|w| > depth} |S^w(s) S^w(t)|``: level ``n`` is at most
    ``min(L1(s)·E(t), L1(t)·E(s))^n / (n!)²`` with ``L1`` the ℓ¹ and ``E``
    the Euclidean one-variation."""
    x = min(
        l1_variation(s) * one_variation(t),
        l1_variation(t) * one_variation(s),
    )
    total = 0.0
    term = (x ** (depth + 1)) / math.factorial(depth + 1) ** 2
    n = depth + 1
    while term > total * 1e-18 + 1e-300 and n < depth + 400:
        total += term
        n += 1
        term *= (x / n) / n
    return total


def _cell_grid(path: PiecewiseLinearPath, resolution: float):
    """Cell decomposition of the normalized time axis: widths and the
    constant derivative on each cell."""
    if path.num_segments == 0:
        return np.zeros(0), np.zeros((0, path.dim))
    total = path.knots[-1] - path.knots[0]
    widths, grads = [], []
    for dur, inc in zip(path.durations, path.increments):
        width = dur / total
        cells = max(1, math.ceil(width / resolution - 1e-12))
        widths.extend([width / cells] * cells)
        grads.extend([inc / width] * cells)
    return np.array(widths), np.array(grads)


def signature_kernel_pde(
    s: PiecewiseLinearPath, t: PiecewiseLinearPath, resolution: float = 1.0 / 128.0
) -> float:
    """Solve ``∂_u∂_v k = ⟨s'(u), t'(v)⟩ k`` with ``k(0,·) = k(·,0) = 1`` on
    the normalized square and return the terminal corner value ``k(1,1)``.

    Per cell the mixed derivative is integrated with the four-corner average
    (implicit in the new corner), giving a second-order scheme in the cell
    width."""
    if s.dim != t.dim:
        raise InputError(f"paths have different dimensions {s.dim} and {t.dim}")
    if not 0 < resolution <= 1:
        raise InputError(f"resolution must lie in (0, 1], got {resolution}")
    hs, gs = _cell_grid(s, resolution)
    ht, gt = _cell_grid(t, resolution)
    A, B = len(hs), len(ht)
    if A == 0 or B == 0:
        return 1.0
    mass = (gs @ gt.T) * np.outer(hs, ht)  # full cell mass C·h·h'
    k = np.ones((A + 1, B + 1))
    for a in range(A):
        row = k[a]
        new = k[a + 1]
        for b in range(B):
            q = 0.25 * mass[a, b]
            new[b + 1] = (new[b] + row[b + 1] - row[b] + q * (row[b] + row[b + 1] + new[b])) / (1.0 - q)
    return float(k[A, B])


def _development_concat(s: PiecewiseLinearPath, t: PiecewiseLinearPath) -> PiecewiseLinearPath:
    if s.dim != t.dim:
        raise InputError(f"paths have different dimensions {s.dim} and {t.dim}")
    return concatenate(s, reverse(t))


def gue_kernel(
    s: PiecewiseLinearPath, t: PiecewiseLinearPath, cfg: KernelConfig
) -> KernelValue:
    """Evaluate the development kernel ``E tr̄ U_s U_t†`` by the route named
    in ``cfg.method`` (one of the ``gue-*`` methods)."""
    method = cfg.method
    if not method.startswith("gue-"):
        raise InputError(f"gue_kernel got non-development method {method!r}")
    path = _development_concat(s, t)
    if method == "gue-series":
        depth = cfg.get("depth")
        law = semicircular_law(path.dim, depth)
        dev = limiting_development(law, path, depth)
        return KernelValue(
            value=float(dev.value.real),
            tail_bound=dev.tail_bound,
            details={"value_im": float(dev.value.imag)},
        )
    if method == "gue-integral-eq":
        table = gue_integral_equation_solve(path, cfg.get("grid_step"))
        return KernelValue(value=table.terminal)
    if method == "gue-classical-mc":
        if cfg.epsilon is not None:
            auto = classical_sufficient_params(
                cfg.epsilon, cfg.delta, one_variation(path)
            )
            N = auto["N"] if cfg.matrix_n is None else cfg.matrix_n
            M = auto["M"] if cfg.mc_samples is None else cfg.mc_samples
            K = auto["K"] if cfg.trotter_k is None else cfg.trotter_k
        else:
            N, M, K = cfg.get("matrix_n"), cfg.get("mc_samples"), cfg.get("trotter_k")
        res = classical_mc_estimate(path, N=N, M=M, K=K, seed=cfg.seed)
        return KernelValue(
            value=float(res.value.real),
            stderr=res.stderr,
            details=res.to_json_dict(),
        )
    if cfg.epsilon is not None:
        m, n, k, shots = cfg.pauli_m, cfg.n_qubits, cfg.trotter_k, cfg.shots
    else:
        m, n = cfg.get("pauli_m"), cfg.get("n_qubits")
        k, shots = cfg.get("trotter_k"), cfg.get("shots")
    est = qsigker_run(
        path,
        m=m,
        n=n,
        trotter_k=k,
        shots=shots,
        seed=cfg.seed,
        epsilon=cfg.epsilon,
        delta=cfg.delta,
        constant_C=cfg.constant_C,
    )
    return KernelValue(
        value=est.value,
        stderr=est.stderr,
        details=est.to_json_dict(),
    )


def kernel_evaluate(
    s: PiecewiseLinearPath, t: PiecewiseLinearPath, cfg: KernelConfig
) -> KernelValue:
    """Evaluate any kernel method (signature or development) on a path pair."""
    if cfg.method == "signature-pde":
        return KernelValue(value=signature_kernel_pde(s, t, cfg.get("grid_step")))
    if cfg.method == "signature-series":
        depth = cfg.get("depth")
        return KernelValue(
            value=signature_kernel_series(s, t, depth),
            tail_bound=signature_kernel_tail_bound(s, t, depth),
        )
    return gue_kernel(s, t, cfg)


@dataclass(frozen=True)
class GramResult:
    """A labeled Gram matrix with optional per-entry standard errors and the
    minimum eigenvalue as a positive-semidefiniteness diagnostic (reported,
    not enforced)."""

    labels: tuple[str, ...]
    matrix: np.ndarray
    stderr: np.ndarray | None
    method: str
    seed: int

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def to_json_dict(self) -> dict:
        out = {
            "labels": list(self.labels),
            "matrix": [[float(v) for v in row] for row in self.matrix],
            "method": self.method,
            "seed": self.seed,
            "min_eigenvalue": self.min_eigenvalue,
        }
        if self.stderr is not None:
            out["stderr"] = [[float(v) for v in row] for row in self.stderr]
        return out

    def to_csv_text(self) -> str:
        from .io import matrix_to_csv_text

        return matrix_to_csv_text(list(self.labels), self.matrix)


def _entry_seed(root: int, i: int, j: int) -> int:
    return int(seed_sequence(root, i, j).generate_state(1)[0])


def gram_matrix(
    dataset: Sequence, cfg: KernelConfig, threads: int = 1
) -> GramResult:
    """Evaluate the kernel on every pair of a labeled dataset.

    ``dataset`` is a sequence of ``(label, path)`` pairs (or bare paths,
    labeled by position).  The upper triangle is computed and mirrored.
    Stochastic routes give entry ``(i, j)`` the derived seed ``(seed, i, j)``
    unless ``cfg.shared_samples`` is set, in which case every entry reuses
    the root stream."""
    items = []
    for k, item in enumerate(dataset):
        if isinstance(item, PiecewiseLinearPath):
            items.append((str(k), item))
        else:
            label, path = item
            items.append((str(label), path))
    if not items:
        raise InputError("gram matrix needs at least one path")
    labels = tuple(label for label, _ in items)
    paths = [path for _, path in items]
    size = len(paths)
    stochastic = cfg.method in ("gue-classical-mc", "gue-quantum")

    pairs = [(i, j) for i in range(size) for j in range(i, size)]

    def entry(pair):
        i, j = pair
        entry_cfg = cfg
        if stochastic and not cfg.shared_samples:
            entry_cfg = replace(cfg, seed=_entry_seed(cfg.seed, i, j))
        return kernel_evaluate(paths[i], paths[j], entry_cfg)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(entry, pairs))
    else:
        results = [entry(p) for p in pairs]

    matrix = np.zeros((size, size))
    err = np.zeros((size, size)) if stochastic else None
    for (i, j), kv in zip(pairs, results):
        matrix[i, j] = matrix[j, i] = kv.value
        if err is not None and kv.stderr is not None:
            err[i, j] = err[j, i] = kv.stderr
    return GramResult(
        labels=labels, matrix=matrix, stderr=err, method=cfg.method, seed=cfg.seed
    )
