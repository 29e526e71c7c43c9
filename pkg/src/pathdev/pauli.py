"""Pauli strings, sparse Pauli-sum operators, and random string ensembles.

A Pauli string on ``n`` qubits is ``i^e · P_0 ⊗ P_1 ⊗ ... ⊗ P_{n-1}`` with
letters ``P_q ∈ {I, X, Y, Z}`` and a phase exponent ``e ∈ {0, 1, 2, 3}``.
Strings are encoded symplectically by two bitmasks: bit ``n-1-q`` of ``x``
(resp. ``z``) is set when letter ``q`` contains an X (resp. Z) component —
so ``X=(1,0)``, ``Z=(0,1)``, ``Y=(1,1)`` per qubit, and the *last* letter sits
in bit 0, matching the binary expansion of basis-state indices (qubit 0 is
the most significant bit).  Products are bitmask XORs with a phase computed
from popcounts; no ``2^n``-sized object is ever built except on explicit
request (:meth:`PauliString.to_dense`).

The random ensemble used for quantum development estimation is
``A = (1/√m) Σ_{i=1}^m r_i σ_{s_i}`` with uniform letters and Rademacher
signs ``r_i``; duplicate strings are merged (so ``tr̄ A² = Σ c_i² = 1``
exactly iff all ``m`` draws are distinct).  Closed-form word counts:

* ``count_even_words(m, p)`` — sequences of ``2p`` letters from ``m`` symbols
  where every symbol appears an even number of times:
  ``2^{-m} Σ_k C(m,k) (m-2k)^{2p}``;
* ``count_pair_words(m, p)`` — sequences using exactly ``p`` distinct symbols
  twice each: ``C(m,p) (2p)!/2^p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._seeding import rng_for
from .errors import InputError, ResourceCapError

_PHASE_CHARS = {0: "", 1: "i", 2: "-", 3: "-i"}
_PHASE_VALUES = {0: 1.0 + 0.0j, 1: 1.0j, 2: -1.0 + 0.0j, 3: -1.0j}
# Letter -> (x bit, z bit)
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
_LETTER_MATS = {"I": _I2, "X": _X2, "Y": _Y2, "Z": _Z2}


@dataclass(frozen=True)
class PauliString:
    """``i^phase ·`` (tensor product of Pauli letters), bitmask encoded."""

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"need at least one qubit, got n={self.n}")
        top = 1 << self.n
        if not (0 <= self.x < top and 0 <= self.z < top):
            raise InputError("bitmask outside qubit range")
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def from_letters(cls, letters: str, phase: int = 0) -> "PauliString":
        x = z = 0
        for ch in letters:
            try:
                xb, zb = _LETTER_BITS[ch]
            except KeyError:
                raise InputError(f"invalid Pauli letter {ch!r}") from None
            x = (x << 1) | xb
            z = (z << 1) | zb
        if not letters:
            raise InputError("empty Pauli string")
        return cls(n=len(letters), x=x, z=z, phase=phase)

    @classmethod
    def parse(cls, literal: str) -> "PauliString":
        """Parse the literal form: optional phase prefix ``""``, ``"i"``,
        ``"-"``, ``"-i"`` followed by letters, e.g. ``"-iXIZY"``."""
        s = literal.strip()
        phase = 0
        if s.startswith("-i"):
            phase, s = 3, s[2:]
        elif s.startswith("i"):
            phase, s = 1, s[1:]
        elif s.startswith("-"):
            phase, s = 2, s[1:]
        elif s.startswith("+"):
            s = s[1:]
        if not s:
            raise InputError(f"Pauli literal {literal!r} has no letters")
        return cls.from_letters(s, phase=phase)

    @property
    def letters(self) -> str:
        out = []
        for q in range(self.n):
            bit = self.n - 1 - q
            out.append(_BITS_LETTER[((self.x >> bit) & 1, (self.z >> bit) & 1)])
        return "".join(out)

    @property
    def phase_value(self) -> complex:
        return _PHASE_VALUES[self.phase]

    @property
    def is_identity_letters(self) -> bool:
        return self.x == 0 and self.z == 0

    def __str__(self) -> str:
        return _PHASE_CHARS[self.phase] + self.letters

    def hermitian_sign(self) -> int | None:
        """+1/−1 if the string is Hermitian (phase ±1), else ``None``."""
        if self.phase == 0:
            return 1
        if self.phase == 2:
            return -1
        return None

    def to_dense(self, cap: int = 12) -> np.ndarray:
        """Dense ``2^n × 2^n`` matrix (left letter = most significant qubit)."""
        if self.n > cap:
            raise ResourceCapError(
                f"dense Pauli string on {self.n} qubits exceeds cap {cap}"
            )
        out = np.array([[self.phase_value]])
        for ch in self.letters:
            out = np.kron(out, _LETTER_MATS[ch])
        return out


def _mul_phase_exponent(x1: int, z1: int, x2: int, z2: int) -> int:
    """Phase exponent increment of ``σ(x1,z1)·σ(x2,z2)`` in the ``i^{x·z}
    X^x Z^z`` normal form: ``pc(x1&z1)+pc(x2&z2)+2·pc(z1&x2)−pc(x3&z3)``."""
    x3, z3 = x1 ^ x2, z1 ^ z2
    return (
        (x1 & z1).bit_count()
        + (x2 & z2).bit_count()
        + 2 * (z1 & x2).bit_count()
        - (x3 & z3).bit_count()
    ) % 4


def string_mul(a: PauliString, b: PauliString) -> PauliString:
    """Product of two Pauli strings (exact phase bookkeeping, no matrices)."""
    if a.n != b.n:
        raise InputError(f"cannot multiply strings on {a.n} and {b.n} qubits")
    phase = (a.phase + b.phase + _mul_phase_exponent(a.x, a.z, b.x, b.z)) % 4
    return PauliString(n=a.n, x=a.x ^ b.x, z=a.z ^ b.z, phase=phase)


def pauli_mul(a: str, b: str) -> tuple[complex, str]:
    """Single-letter product: ``pauli_mul("X", "Y") == (1j, "Z")``."""
    prod = string_mul(PauliString.from_letters(a), PauliString.from_letters(b))
    return prod.phase_value, prod.letters


def string_trace(s: PauliString) -> complex:
    """Normalized trace ``tr̄ σ = 2^{-n} tr σ``: the phase value if every
    letter is ``I``, else 0."""
    return s.phase_value if s.is_identity_letters else 0.0 + 0.0j


@dataclass(frozen=True)
class SparsePauliOperator:
    """A real linear combination ``Σ_i c_i σ_{s_i}`` of phase-free strings."""

    n: int
    terms: tuple[tuple[float, PauliString], ...]

    def __post_init__(self):
        seen = set()
        for c, s in self.terms:
            if s.n != self.n:
                raise InputError("term qubit count mismatch")
            if s.phase != 0:
                raise InputError("operator terms must use phase-free strings")
            if (s.x, s.z) in seen:
                raise InputError("operator terms must have distinct strings")
            seen.add((s.x, s.z))

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def to_dense(self, cap: int = 12) -> np.ndarray:
        if self.n > cap:
            raise ResourceCapError(
                f"dense operator on {self.n} qubits exceeds cap {cap}"
            )
        out = np.zeros((2**self.n, 2**self.n), dtype=complex)
        for c, s in self.terms:
            out += c * s.to_dense(cap=cap)
        return out

    def to_json_list(self) -> list[dict]:
        return [{"c": float(c), "s": str(s)} for c, s in self.terms]

    @classmethod
    def from_json_list(cls, data: list[dict], n: int | None = None) -> "SparsePauliOperator":
        terms = []
        for item in data:
            if not isinstance(item, dict) or "c" not in item or "s" not in item:
                raise InputError("each operator term needs 'c' and 's' fields")
            s = PauliString.parse(str(item["s"]))
            sign = s.hermitian_sign()
            if sign is None:
                raise InputError(f"operator term {item['s']!r} has imaginary phase")
            terms.append((sign * float(item["c"]), PauliString(n=s.n, x=s.x, z=s.z)))
        if not terms:
            raise InputError("operator needs at least one term")
        qubits = n if n is not None else terms[0][1].n
        return cls(n=qubits, terms=tuple(terms))


def _sample_ensemble_rng(
    n: int, m: int, d: int, rng: np.random.Generator
) -> list[SparsePauliOperator]:
    ops = []
    for _ in range(d):
        codes = rng.integers(0, 4, size=(m, n))  # 0=I, 1=X, 2=Y, 3=Z
        signs = 1 - 2 * rng.integers(0, 2, size=m)
        place = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
        xm = ((codes == 1) | (codes == 2)) @ place
        zm = ((codes == 2) | (codes == 3)) @ place
        merged: dict[tuple[int, int], float] = {}
        order: list[tuple[int, int]] = []
        coeff = 1.0 / math.sqrt(m)
        for i in range(m):
            key = (int(xm[i]), int(zm[i]))
            if key not in merged:
                merged[key] = 0.0
                order.append(key)
            merged[key] += float(signs[i]) * coeff
        terms = tuple(
            (merged[key], PauliString(n=n, x=key[0], z=key[1]))
            for key in order
            if merged[key] != 0.0
        )
        ops.append(SparsePauliOperator(n=n, terms=terms))
    return ops


def sample_pauli_ensemble(n: int, m: int, d: int, seed: int) -> list[SparsePauliOperator]:
    """Draw ``d`` independent operators ``A_ν = (1/√m) Σ_i r_i σ_{s_i}`` with
    uniform letters per qubit per string and Rademacher signs; duplicate
    strings are merged (coefficients summed, exact cancellations dropped)."""
    if n < 1 or m < 1 or d < 1:
        raise InputError(f"need n, m, d >= 1, got n={n}, m={m}, d={d}")
    if n > 62:
        raise ResourceCapError(f"string bitmasks support at most 62 qubits, got {n}")
    return _sample_ensemble_rng(n, m, d, rng_for(seed))


def _terms_arrays(op: SparsePauliOperator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xs = np.array([s.x for _, s in op.terms], dtype=np.int64)
    zs = np.array([s.z for _, s in op.terms], dtype=np.int64)
    cs = np.array([c for c, _ in op.terms], dtype=complex)
    return xs, zs, cs


def _product_terms(
    a: tuple[np.ndarray, np.ndarray, np.ndarray],
    b: tuple[np.ndarray, np.ndarray, np.ndarray],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized term-by-term product of two Pauli-sum term lists, with
    duplicate output strings merged."""
    x1, z1, c1 = a
    x2, z2, c2 = b
    X1, X2 = x1[:, None], x2[None, :]
    Z1, Z2 = z1[:, None], z2[None, :]
    x3 = (X1 ^ X2).ravel()
    z3 = (Z1 ^ Z2).ravel()
    exps = (
        np.bitwise_count(X1 & Z1)
        + np.bitwise_count(X2 & Z2)
        + 2 * np.bitwise_count(Z1 & X2)
    ).ravel() - np.bitwise_count(x3 & z3)
    coeff = (c1[:, None] * c2[None, :]).ravel() * np.power(1j, exps % 4)
    keys = np.stack([x3, z3], axis=1)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    merged = np.zeros(len(uniq), dtype=complex)
    np.add.at(merged, inverse.ravel(), coeff)
    return uniq[:, 0], uniq[:, 1], merged


def operator_word_trace(ops: Sequence[SparsePauliOperator], word: Sequence[int]) -> complex:
    """``tr̄ (A_{w_1} ··· A_{w_k})`` evaluated purely in the string algebra:
    bitmask products with merged intermediate sums, never a ``2^n`` matrix."""
    w = [int(x) for x in word]
    if not w:
        return 1.0 + 0.0j
    if min(w) < 1 or max(w) > len(ops):
        raise InputError(f"word {word} does not index the {len(ops)} operators")
    acc = _terms_arrays(ops[w[0] - 1])
    for letter in w[1:]:
        acc = _product_terms(acc, _terms_arrays(ops[letter - 1]))
    xs, zs, cs = acc
    hit = (xs == 0) & (zs == 0)
    return complex(cs[hit].sum()) if hit.any() else 0.0 + 0.0j


def ensemble_moment_estimate(
    n: int, m: int, w: Sequence[int], samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo estimate of ``E tr̄ (A_{w_1} ··· A_{w_k})`` over the random
    string ensemble: (mean of the real part, standard error).

    Odd-length words return ``(0.0, 0.0)`` exactly: flipping the sign of any
    one string negates every odd product, so the expectation vanishes.
    """
    word = [int(x) for x in w]
    if not word or min(word) < 1:
        raise InputError("word must be a non-empty tuple of letters >= 1")
    if samples < 1:
        raise InputError(f"need samples >= 1, got {samples}")
    if len(word) % 2 == 1:
        return 0.0, 0.0
    d = max(word)
    vals = np.empty(samples)
    for s in range(samples):
        ops = _sample_ensemble_rng(n, m, d, rng_for(seed, s))
        vals[s] = operator_word_trace(ops, word).real
    stderr = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return float(vals.mean()), stderr


def count_even_words(m: int, p: int) -> int:
    """Number of length-``2p`` sequences over ``m`` symbols in which every
    symbol occurs an even number of times: ``2^{-m} Σ_k C(m,k) (m-2k)^{2p}``
    (exact integer arithmetic)."""
    if m < 1 or p < 0:
        raise InputError(f"need m >= 1 and p >= 0, got m={m}, p={p}")
    total = sum(math.comb(m, k) * (m - 2 * k) ** (2 * p) for k in range(m + 1))
    assert total % (1 << m) == 0
    return total >> m


def count_pair_words(m: int, p: int) -> int:
    """Number of length-``2p`` sequences over ``m`` symbols using exactly
    ``p`` distinct symbols, each exactly twice: ``C(m,p) · (2p)!/2^p``."""
    if m < 1 or p < 0:
        raise InputError(f"need m >= 1 and p >= 0, got m={m}, p={p}")
    if p > m:
        return 0
    return math.comb(m, p) * (math.factorial(2 * p) >> p)
