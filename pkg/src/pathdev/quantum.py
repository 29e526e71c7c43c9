"""Trotterized Pauli-rotation circuits and the DQC1 trace estimator.

Circuit semantics: a :class:`Circuit` is a list of Pauli rotations
``P_s(θ) = exp(iθ σ_s)``, and *its unitary is the matrix product of the gate
unitaries in list order with the first gate leftmost*:

    U(c) = P_{s_1}(θ_1) · P_{s_2}(θ_2) ··· P_{s_G}(θ_G).

This matches the multiplicativity of unitary path developments (first path
segment leftmost), so the dense matrix of :func:`build_trotter_circuit`
converges to ``develop_exact`` of the dense operators as ``K → ∞``.  Applying
``U(c)`` to a ket therefore iterates the gate list right to left.

Statevector layout: basis index bit ``n-1-q`` is qubit ``q`` (qubit 0 = most
significant bit = leftmost Pauli letter), matching
:meth:`PauliString.to_dense`.  A rotation acts as a signed permutation pair:

    exp(iθ σ) ψ = cos θ · ψ + i sin θ · (σψ),
    (σψ)[t] = i^{e+y(s)} (−1)^{popcount(z & (t⊕x))} ψ[t⊕x],

with ``y(s)`` the number of Y letters; only bit operations of size ``2^n``
are performed.  The statevector simulator refuses more than 24 qubits.

DQC1 estimation: the one-clean-qubit circuit measures the top qubit of
``|+⟩⟨+| ⊗ I/2^n`` after a controlled-``U``, giving outcome 1 with
probability ``p₁ = (1 − Re tr̄ U)/2``.  The maximally mixed register is
unraveled exactly as a uniformly random basis state per shot, whose outcome
is a Bernoulli draw with probability ``(1 − Re ⟨x|U|x⟩)/2``; the estimator
``Q = 1 − 2·(ones/shots)`` then has mean ``Re tr̄ U``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._seeding import DEFAULT_SEED, rng_for
from .errors import InputError, ResourceCapError
from .paths import PiecewiseLinearPath, one_variation
from .pauli import PauliString, SparsePauliOperator, _sample_ensemble_rng

STATEVECTOR_CAP = 24
TRACE_CAP = 12
DENSITY_CAP = 6

try:  # pragma: no cover - exercised implicitly
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# gate tables and statevector evolution


@dataclass(frozen=True)
class _GateArrays:
    """Array form of a rotation sequence: per-string bitmasks and phase
    constants, plus per-gate string ids and angle cosines/sines, in
    application order (i.e. already reversed relative to circuit order)."""

    n: int
    xm: np.ndarray
    zm: np.ndarray
    const: np.ndarray
    sid: np.ndarray
    cos: np.ndarray
    sin: np.ndarray


def _string_tables(n: int, strings: Sequence[PauliString]):
    xm = np.array([s.x for s in strings], dtype=np.int64)
    zm = np.array([s.z for s in strings], dtype=np.int64)
    const = np.array(
        [s.phase_value * (1j ** ((s.x & s.z).bit_count() % 4)) for s in strings],
        dtype=complex,
    )
    return xm, zm, const


def _gate_arrays_from_circuit(c: "Circuit") -> _GateArrays:
    strings: list[PauliString] = []
    index: dict[tuple[int, int], int] = {}
    sids = np.empty(len(c.gates), dtype=np.int64)
    thetas = np.empty(len(c.gates))
    for g, (s, theta) in enumerate(c.gates):
        sign = s.hermitian_sign()
        if sign is None:
            raise InputError(f"rotation string {s} is not Hermitian (phase ±i)")
        key = (s.x, s.z)
        if key not in index:
            index[key] = len(strings)
            strings.append(PauliString(n=c.n, x=s.x, z=s.z))
        sids[g] = index[key]
        thetas[g] = sign * theta
    xm, zm, const = _string_tables(c.n, strings)
    # application order: last listed gate acts first on a ket
    sids = sids[::-1].copy()
    thetas = thetas[::-1].copy()
    return _GateArrays(
        n=c.n, xm=xm, zm=zm, const=const,
        sid=sids, cos=np.cos(thetas), sin=np.sin(thetas),
    )


if _HAVE_NUMBA:

    @_njit(cache=True, nogil=True)
    def _evolve_ket_jit(psi, buf, sid, xm, zm, const, cosv, sinv):  # pragma: no cover
        dim = psi.shape[0]
        cur = psi
        nxt = buf
        for g in range(sid.shape[0]):
            s = sid[g]
            x = xm[s]
            z = zm[s]
            c = cosv[g]
            f = 1j * sinv[g] * const[s]
            for t in range(dim):
                j = t ^ x
                v = z & j
                v = v - ((v >> 1) & 0x5555555555555555)
                v = (v & 0x3333333333333333) + ((v >> 2) & 0x3333333333333333)
                v = (v + (v >> 4)) & 0x0F0F0F0F0F0F0F0F
                pc = (v * 0x0101010101010101) >> 56
                if pc & 1:
                    nxt[t] = c * cur[t] - f * cur[j]
                else:
                    nxt[t] = c * cur[t] + f * cur[j]
            cur, nxt = nxt, cur
        return cur


def _evolve_ket_numpy(psi: np.ndarray, g: _GateArrays) -> np.ndarray:
    idx = np.arange(psi.shape[0], dtype=np.int64)
    cur = psi
    for k in range(g.sid.shape[0]):
        s = g.sid[k]
        j = idx ^ g.xm[s]
        sgn = 1.0 - 2.0 * (np.bitwise_count(g.zm[s] & j) & 1)
        cur = g.cos[k] * cur + (1j * g.sin[k] * g.const[s]) * (sgn * cur[j])
    return cur


def _evolve_ket(psi: np.ndarray, g: _GateArrays) -> np.ndarray:
    if _HAVE_NUMBA and g.sid.shape[0] > 0:
        out = _evolve_ket_jit(
            psi.astype(complex, copy=True),
            np.empty_like(psi, dtype=complex),
            g.sid, g.xm, g.zm, g.const, g.cos, g.sin,
        )
        return np.asarray(out)
    return _evolve_ket_numpy(psi.astype(complex, copy=True), g)


def _evolve_columns(mat: np.ndarray, g: _GateArrays) -> np.ndarray:
    """Evolve a ``(2^n, B)`` batch of kets through the gate sequence."""
    idx = np.arange(mat.shape[0], dtype=np.int64)
    cur = mat.astype(complex, copy=True)
    for k in range(g.sid.shape[0]):
        s = g.sid[k]
        j = idx ^ g.xm[s]
        sgn = (1.0 - 2.0 * (np.bitwise_count(g.zm[s] & j) & 1)).astype(complex)
        cur = g.cos[k] * cur + (1j * g.sin[k] * g.const[s]) * (sgn[:, None] * cur[j, :])
    return cur


# ---------------------------------------------------------------------------
# public statevector type and single-rotation action


@dataclass(frozen=True)
class Statevector:
    """``2^n`` complex amplitudes; basis index bit ``n-1-q`` is qubit ``q``."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        if self.n < 1 or self.n > STATEVECTOR_CAP:
            raise ResourceCapError(
                f"statevector supports 1..{STATEVECTOR_CAP} qubits, got {self.n}"
            )
        if amp.size != 1 << self.n:
            raise InputError(
                f"expected {1 << self.n} amplitudes for n={self.n}, got {amp.size}"
            )
        norm = float(np.linalg.norm(amp))
        if not math.isfinite(norm) or abs(norm - 1.0) > 1e-10:
            raise InputError(f"statevector norm {norm} is not 1")
        object.__setattr__(self, "amplitudes", amp)


def basis_state(n: int, index: int) -> Statevector:
    """The computational basis state ``|index⟩`` on ``n`` qubits."""
    if not 0 <= index < (1 << n):
        raise InputError(f"basis index {index} outside 0..{(1 << n) - 1}")
    amp = np.zeros(1 << n, dtype=complex)
    amp[index] = 1.0
    return Statevector(n=n, amplitudes=amp)


def apply_pauli_rotation(state: Statevector, s: PauliString, theta: float) -> Statevector:
    """Apply ``exp(iθ σ_s)`` to a statevector.

    ``σ_s`` must be Hermitian (phase ±1).  A Z rotation sends ``|0⟩`` to
    ``e^{iθ}|0⟩``; an X rotation mixes bit-flipped pairs of amplitudes.
    """
    if s.n != state.n:
        raise InputError(f"string on {s.n} qubits does not fit {state.n}-qubit state")
    sign = s.hermitian_sign()
    if sign is None:
        raise InputError(f"rotation string {s} is not Hermitian (phase ±i)")
    base = PauliString(n=s.n, x=s.x, z=s.z)
    xm, zm, const = _string_tables(s.n, [base])
    g = _GateArrays(
        n=s.n, xm=xm, zm=zm, const=const,
        sid=np.zeros(1, dtype=np.int64),
        cos=np.array([math.cos(sign * theta)]),
        sin=np.array([math.sin(sign * theta)]),
    )
    return Statevector(n=s.n, amplitudes=_evolve_ket_numpy(
        state.amplitudes.astype(complex, copy=True), g))


# ---------------------------------------------------------------------------
# circuits


@dataclass(frozen=True)
class Circuit:
    """A Pauli-rotation circuit; see the module docstring for the unitary
    convention (first listed gate leftmost in the matrix product)."""

    n: int
    gates: tuple[tuple[PauliString, float], ...]

    def __post_init__(self):
        for s, theta in self.gates:
            if s.n != self.n:
                raise InputError("gate string qubit count mismatch")
            if s.hermitian_sign() is None:
                raise InputError(f"gate string {s} is not Hermitian")
            if not math.isfinite(theta):
                raise InputError("gate angles must be finite")

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps({"s": str(s), "theta": float(theta)}) + "\n"
            for s, theta in self.gates
        )

    @classmethod
    def from_jsonl(cls, text: str) -> "Circuit":
        gates = []
        n = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"bad JSON on circuit line {lineno}: {exc}") from exc
            if not isinstance(rec, dict) or "s" not in rec or "theta" not in rec:
                raise InputError(f"circuit line {lineno} needs 's' and 'theta'")
            s = PauliString.parse(str(rec["s"]))
            if n is None:
                n = s.n
            gates.append((s, float(rec["theta"])))
        if n is None:
            raise InputError("circuit file contains no gates")
        return cls(n=n, gates=tuple(gates))


def build_trotter_circuit(
    path: PiecewiseLinearPath, ops: Sequence[SparsePauliOperator], K: int
) -> Circuit:
    """The order-``K`` Trotter circuit for the development of ``path`` along
    the operators ``ops``: for each segment ``l`` (in path order), ``K``
    repetitions of one rotation per operator term,

        angle(l, rep, ν, i) = Δ_l^ν · c_{ν,i} / K,

    gates ordered ``(l, rep, ν, i)``.  Zero-angle gates are kept, so the gate
    count is ``L · K · Σ_ν m_ν``."""
    if K < 1:
        raise InputError(f"Trotter order K must be >= 1, got {K}")
    if len(ops) != path.dim:
        raise InputError(
            f"path dimension {path.dim} needs {path.dim} operators, got {len(ops)}"
        )
    if not ops:
        raise InputError("need at least one operator")
    n = ops[0].n
    if any(op.n != n for op in ops):
        raise InputError("all operators must act on the same qubit count")
    gates = []
    for inc in path.increments:
        for _ in range(K):
            for nu, op in enumerate(ops):
                for c, s in op.terms:
                    gates.append((s, float(inc[nu]) * c / K))
    return Circuit(n=n, gates=tuple(gates))


def _trotter_gate_arrays(
    path: PiecewiseLinearPath, ops: Sequence[SparsePauliOperator], K: int
) -> _GateArrays:
    """Array form of :func:`build_trotter_circuit` without building gate
    objects (identical unitary; equality is covered by tests)."""
    n = ops[0].n
    strings = [s for op in ops for _, s in op.terms]
    base = np.array([c for op in ops for c, _ in op.terms])
    counts = [op.num_terms for op in ops]
    S = len(strings)
    xm, zm, const = _string_tables(n, strings)
    blocks = []
    for inc in path.increments:
        blk = np.repeat(inc, counts) * base / K
        blocks.append(np.tile(blk, K))
    thetas = np.concatenate(blocks) if blocks else np.zeros(0)
    sid = np.tile(np.arange(S, dtype=np.int64), path.num_segments * K)
    sid = sid[::-1].copy()
    thetas = thetas[::-1].copy()
    return _GateArrays(
        n=n, xm=xm, zm=zm, const=const,
        sid=sid, cos=np.cos(thetas), sin=np.sin(thetas),
    )


def circuit_unitary_dense(c: Circuit, cap: int = TRACE_CAP) -> np.ndarray:
    """The dense ``2^n × 2^n`` unitary of the circuit (first gate leftmost)."""
    if c.n > cap:
        raise ResourceCapError(f"dense unitary on {c.n} qubits exceeds cap {cap}")
    g = _gate_arrays_from_circuit(c)
    return _evolve_columns(np.eye(1 << c.n, dtype=complex), g)


def circuit_trace_exact(c: Circuit, cap: int = TRACE_CAP) -> complex:
    """Normalized trace ``tr̄ U(c) = 2^{-n} Σ_x ⟨x|U(c)|x⟩``, computed by a
    batched basis sweep (no dense unitary is stored for large batches)."""
    if c.n > cap:
        raise ResourceCapError(f"exact trace on {c.n} qubits exceeds cap {cap}")
    dim = 1 << c.n
    g = _gate_arrays_from_circuit(c)
    batch = max(1, min(dim, (1 << 22) // dim))
    total = 0.0 + 0.0j
    for start in range(0, dim, batch):
        cols = np.arange(start, min(start + batch, dim))
        mat = np.zeros((dim, cols.size), dtype=complex)
        mat[cols, np.arange(cols.size)] = 1.0
        out = _evolve_columns(mat, g)
        total += out[cols, np.arange(cols.size)].sum()
    return complex(total / dim)


def dqc1_probability(c: Circuit, cap: int = TRACE_CAP) -> float:
    """Probability of measuring 1 on the clean qubit of the DQC1 circuit for
    ``U(c)``: ``(1 − Re tr̄ U)/2``, clamped to ``[0, 1]``."""
    p = 0.5 * (1.0 - circuit_trace_exact(c, cap=cap).real)
    return min(1.0, max(0.0, p))


# ---------------------------------------------------------------------------
# estimators


@dataclass(frozen=True)
class EstimatorOutput:
    """DQC1 shot-estimator output: ``value = 1 − 2·ones_count/shots``
    estimates ``Re tr̄ U``.  ``epsilon``/``delta`` echo auto-derived accuracy
    targets when used."""

    value: float
    ones_count: int
    shots: int
    n: int
    m: int | None
    trotter_k: int | None
    seed: int
    epsilon: float | None = None
    delta: float | None = None

    def __post_init__(self):
        if self.shots < 1 or not 0 <= self.ones_count <= self.shots:
            raise InputError("need 0 <= ones_count <= shots with shots >= 1")
        expected = 1.0 - 2.0 * self.ones_count / self.shots
        if abs(self.value - expected) > 1e-12:
            raise InputError("value must equal 1 - 2 * ones_count / shots")

    @property
    def stderr(self) -> float:
        """Bernoulli standard error of ``value``: ``2·sqrt(p̂(1−p̂)/shots)``."""
        p = self.ones_count / self.shots
        return 2.0 * math.sqrt(p * (1.0 - p) / self.shots)

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "ones_count": self.ones_count,
            "shots": self.shots,
            "n": self.n,
            "m": self.m,
            "trotter_k": self.trotter_k,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "stderr": self.stderr,
        }


def quantum_sufficient_params(
    epsilon: float, delta: float, delta_gamma: float, constant_C: float = 1.0
) -> dict[str, int]:
    """Sufficient ``(n, m, K, M)`` for the DQC1 development estimator:
    ``M > (2/ε²) ln(2/δ)`` shots, ``n ≥ max(6C/ε, log₂(6C/ε))`` qubits,
    ``m = n`` strings, ``K > 3Δ_γ²m/ε`` Trotter steps.  ``constant_C`` scales
    the ensemble-approximation constant (a configuration choice)."""
    if not (0 < epsilon and 0 < delta < 1):
        raise InputError("need epsilon > 0 and 0 < delta < 1")
    if delta_gamma < 0 or constant_C <= 0:
        raise InputError("need one-variation >= 0 and constant_C > 0")
    base = 6.0 * constant_C / epsilon
    need = max(base, math.log2(base) if base > 0 else 0.0)
    # Guard the ceiling against float noise in the decimal inputs (e.g.
    # 6*0.1/0.1 evaluating to 6.000000000000001 must still give n = 6).
    n = max(1, math.ceil(need - 1e-9 * max(1.0, abs(need))))
    m = n
    return {
        "n": n,
        "m": m,
        "K": math.floor(3.0 * delta_gamma**2 * m / epsilon) + 1,
        "M": math.floor(2.0 / epsilon**2 * math.log(2.0 / delta)) + 1,
    }


def _clamped_p1(amp_diag: complex) -> float:
    return min(1.0, max(0.0, 0.5 * (1.0 - amp_diag.real)))


def dqc1_estimate(c: Circuit, shots: int, seed: int = DEFAULT_SEED) -> EstimatorOutput:
    """Run the DQC1 shot estimator on a fixed circuit: per shot a uniformly
    random basis state ``|x⟩`` and a Bernoulli outcome with probability
    ``(1 − Re ⟨x|U(c)|x⟩)/2``.  Deterministic given the seed."""
    if shots < 1:
        raise InputError(f"need shots >= 1, got {shots}")
    if c.n > STATEVECTOR_CAP:
        raise ResourceCapError(
            f"statevector supports at most {STATEVECTOR_CAP} qubits, got {c.n}"
        )
    dim = 1 << c.n
    g = _gate_arrays_from_circuit(c)
    rng = rng_for(seed)
    xs = rng.integers(0, dim, size=shots)
    us = rng.random(shots)
    p1 = {}
    for x in np.unique(xs):
        psi = np.zeros(dim, dtype=complex)
        psi[x] = 1.0
        p1[int(x)] = _clamped_p1(complex(_evolve_ket(psi, g)[x]))
    probs = np.array([p1[int(x)] for x in xs])
    ones = int((us < probs).sum())
    return EstimatorOutput(
        value=1.0 - 2.0 * ones / shots,
        ones_count=ones,
        shots=shots,
        n=c.n,
        m=None,
        trotter_k=None,
        seed=seed,
    )


def qsigker_run(
    path: PiecewiseLinearPath,
    m: int | None = None,
    n: int | None = None,
    trotter_k: int | None = None,
    shots: int | None = None,
    seed: int = DEFAULT_SEED,
    epsilon: float | None = None,
    delta: float | None = None,
    constant_C: float = 1.0,
    statevector_cap: int = STATEVECTOR_CAP,
) -> EstimatorOutput:
    """Estimate the limiting development ``⟨γ⟩`` of ``path`` by the simulated
    quantum pipeline: per shot, a fresh random string ensemble, the Trotter
    circuit of the path, a fresh random basis state, and one DQC1 Bernoulli
    outcome.  Returns ``Q = 1 − 2·ones/shots``.

    Either pass ``(m, n, trotter_k, shots)`` explicitly, or pass ``epsilon``
    and ``delta`` to fill unset parameters with the sufficient values of
    :func:`quantum_sufficient_params` (echoed on the output).
    """
    if epsilon is not None or delta is not None:
        if epsilon is None or delta is None:
            raise InputError("epsilon and delta must be given together")
        auto = quantum_sufficient_params(
            epsilon, delta, one_variation(path), constant_C
        )
        n = auto["n"] if n is None else n
        m = auto["m"] if m is None else m
        trotter_k = auto["K"] if trotter_k is None else trotter_k
        shots = auto["M"] if shots is None else shots
    if m is None or n is None or trotter_k is None or shots is None:
        raise InputError(
            "m, n, trotter_k, shots must all be set (directly or via epsilon/delta)"
        )
    if min(m, n, trotter_k, shots) < 1:
        raise InputError("m, n, trotter_k, shots must be >= 1")
    if n > statevector_cap:
        raise ResourceCapError(
            f"{n} qubits exceed the statevector cap {statevector_cap}"
        )
    dim = 1 << n
    ones = 0
    for j in range(shots):
        rng = rng_for(seed, j)
        ops = _sample_ensemble_rng(n, m, path.dim, rng)
        x0 = int(rng.integers(0, dim))
        if path.num_segments == 0:
            amp = 1.0 + 0.0j
        else:
            g = _trotter_gate_arrays(path, ops, trotter_k)
            psi = np.zeros(dim, dtype=complex)
            psi[x0] = 1.0
            amp = complex(_evolve_ket(psi, g)[x0])
        if rng.random() < _clamped_p1(amp):
            ones += 1
    return EstimatorOutput(
        value=1.0 - 2.0 * ones / shots,
        ones_count=ones,
        shots=shots,
        n=n,
        m=m,
        trotter_k=trotter_k,
        seed=seed,
        epsilon=epsilon,
        delta=delta,
    )


def quantum_path_signature(
    path: PiecewiseLinearPath,
    m: int,
    n: int,
    trotter_k: int,
    samples: int,
    seed: int = DEFAULT_SEED,
    cap: int = DENSITY_CAP,
) -> np.ndarray:
    """The ensemble-averaged development state
    ``ρ = E[U|0...0⟩⟨0...0|U†]`` over ``samples`` ensemble draws — a density
    matrix (trace 1, PSD) whose purity decreases as mixing accumulates.
    For a constant path ``ρ = |0...0⟩⟨0...0|`` exactly."""
    if n > cap:
        raise ResourceCapError(f"density matrix on {n} qubits exceeds cap {cap}")
    if min(m, n, trotter_k, samples) < 1:
        raise InputError("m, n, trotter_k, samples must be >= 1")
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=complex)
    for j in range(samples):
        rng = rng_for(seed, j)
        ops = _sample_ensemble_rng(n, m, path.dim, rng)
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
        if path.num_segments > 0:
            g = _trotter_gate_arrays(path, ops, trotter_k)
            psi = _evolve_ket(psi, g)
        rho += np.outer(psi, psi.conj())
    return rho / samples
