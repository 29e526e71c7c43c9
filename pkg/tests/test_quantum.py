"""Statevector simulation, Trotter circuits, DQC1 trace estimation."""

import numpy as np
import pytest

from pathdev import (
    Circuit,
    EstimatorOutput,
    HermitianTuple,
    InputError,
    PauliString,
    PiecewiseLinearPath,
    ResourceCapError,
    Statevector,
    apply_pauli_rotation,
    basis_state,
    build_trotter_circuit,
    circuit_trace_exact,
    circuit_unitary_dense,
    constant_path,
    develop_exact,
    dqc1_estimate,
    dqc1_probability,
    line_path,
    qsigker_run,
    quantum_path_signature,
    quantum_sufficient_params,
    sample_pauli_ensemble,
)
import pathdev.quantum as quantum_mod

from _oracles import J1_2, dense_circuit_unitary, dense_pauli, dense_rotation
from conftest import random_path


def random_hermitian_string(rng, n):
    dim = 1 << n
    x = int(rng.integers(0, dim))
    z = int(rng.integers(0, dim))
    s = PauliString(n=n, x=x, z=z, phase=0)
    if s.hermitian_sign() is None:
        s = PauliString(n=n, x=x, z=z, phase=1)
    if s.hermitian_sign() == -1:
        s = PauliString(n=n, x=x, z=z, phase=(s.phase + 2) % 4)
    return s


def random_circuit(rng, n, gates):
    return Circuit(
        n,
        tuple(
            (random_hermitian_string(rng, n), float(rng.normal()))
            for _ in range(gates)
        ),
    )


class TestStatevector:
    def test_norm_validation(self):
        with pytest.raises(InputError):
            Statevector(1, np.array([1.0, 1.0], dtype=complex))

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            basis_state(25, 0)

    def test_basis_state(self):
        s = basis_state(2, 2)
        np.testing.assert_allclose(s.amplitudes, [0, 0, 1, 0])


class TestPauliRotation:
    def test_against_expm(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 5))
            dim = 1 << n
            s = random_hermitian_string(rng, n)
            theta = float(rng.normal())
            v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            v /= np.linalg.norm(v)
            out = apply_pauli_rotation(Statevector(n, v.copy()), s, theta)
            sign = s.hermitian_sign()
            ref = dense_rotation(s.letters, sign * theta) @ v
            np.testing.assert_allclose(out.amplitudes, ref, atol=1e-12)

    def test_rejects_non_hermitian_string(self):
        s = PauliString.parse("iX")
        with pytest.raises(InputError):
            apply_pauli_rotation(basis_state(1, 0), s, 0.5)

    def test_angles_compose(self, rng):
        s = PauliString.parse("XZ")
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        state = Statevector(2, v.copy())
        once = apply_pauli_rotation(state, s, 0.8)
        twice = apply_pauli_rotation(apply_pauli_rotation(state, s, 0.3), s, 0.5)
        np.testing.assert_allclose(once.amplitudes, twice.amplitudes, atol=1e-12)

    def test_z_rotation_phases_basis_state(self):
        out = apply_pauli_rotation(basis_state(1, 0), PauliString.parse("Z"), 0.7)
        assert out.amplitudes[0] == pytest.approx(np.exp(1j * 0.7))

    def test_numba_and_numpy_paths_agree(self, rng):
        if not quantum_mod._HAVE_NUMBA:
            pytest.skip("numba not installed")
        n = 4
        c = random_circuit(rng, n, 12)
        arrays = quantum_mod._gate_arrays_from_circuit(c)
        v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        v /= np.linalg.norm(v)
        a = quantum_mod._evolve_ket_numpy(v.copy(), arrays)
        b = quantum_mod._evolve_ket_jit(
            v.copy(),
            np.empty_like(v),
            arrays.sid, arrays.xm, arrays.zm,
            arrays.const, arrays.cos, arrays.sin,
        )
        np.testing.assert_allclose(a, np.asarray(b), atol=1e-13)


class TestCircuit:
    def test_unitary_matches_expm_product(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 4))
            c = random_circuit(rng, n, int(rng.integers(1, 6)))
            ref = dense_circuit_unitary(
                n,
                [(g.letters, g.hermitian_sign(), theta) for g, theta in c.gates],
            )
            np.testing.assert_allclose(circuit_unitary_dense(c), ref, atol=1e-12)

    def test_first_gate_applies_leftmost(self):
        s1, s2 = PauliString.parse("XZ"), PauliString.parse("ZY")
        c = Circuit(2, ((s1, 0.3), (s2, -0.7)))
        ref = dense_rotation("XZ", 0.3) @ dense_rotation("ZY", -0.7)
        np.testing.assert_allclose(circuit_unitary_dense(c), ref, atol=1e-12)

    def test_trace_matches_dense(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 5))
            c = random_circuit(rng, n, 4)
            ref = np.trace(circuit_unitary_dense(c)) / (1 << n)
            assert circuit_trace_exact(c) == pytest.approx(ref, abs=1e-12)

    def test_jsonl_round_trip(self, rng):
        c = random_circuit(rng, 3, 5)
        text = c.to_jsonl()
        back = Circuit.from_jsonl(text)
        assert back.n == c.n
        assert len(back.gates) == len(c.gates)
        assert circuit_trace_exact(back) == pytest.approx(
            circuit_trace_exact(c), abs=1e-15
        )
        assert back.to_jsonl() == text

    def test_from_jsonl_rejects_garbage(self):
        with pytest.raises(InputError):
            Circuit.from_jsonl("")
        with pytest.raises(InputError):
            Circuit.from_jsonl('{"s": "XZ"}\n')
        with pytest.raises(InputError):
            Circuit.from_jsonl('{"s": "XZ", "theta": 0.1}\n{"s": "X", "theta": 0.2}\n')


class TestTrotterCircuit:
    def test_gate_count_and_angles(self):
        path = line_path(np.array([0.5]))
        ops = sample_pauli_ensemble(4, 4, 1, seed=3)
        K = 8
        c = build_trotter_circuit(path, ops, K)
        assert len(c.gates) == K * sum(op.num_terms for op in ops)
        coefs = {s: coef for coef, s in ops[0].terms}
        for gate, theta in c.gates[: ops[0].num_terms]:
            base = coefs[gate if gate in coefs else gate]
            assert theta == pytest.approx(0.5 * base / K)

    def test_converges_to_exact_development(self, rng):
        path = PiecewiseLinearPath(
            np.array([0.0, 0.5, 1.0]), np.array([[0.6, -0.3], [0.2, 0.5]])
        )
        ops = sample_pauli_ensemble(4, 4, 2, seed=11)
        dense = HermitianTuple(tuple(op.to_dense() for op in ops))
        exact = develop_exact(dense, path)
        errs = [
            np.linalg.norm(circuit_unitary_dense(build_trotter_circuit(path, ops, K)) - exact, 2)
            for K in (4, 8, 16, 32, 64)
        ]
        slope = np.polyfit(np.log([4, 8, 16, 32, 64]), np.log(errs), 1)[0]
        assert -1.2 <= slope <= -0.8

    def test_dimension_mismatch(self):
        ops = sample_pauli_ensemble(3, 3, 2, seed=0)
        with pytest.raises(InputError):
            build_trotter_circuit(line_path(np.array([1.0])), ops, 4)


class TestDqc1:
    def test_probability_vs_dense_trace(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 5))
            c = random_circuit(rng, n, 3)
            tr = np.trace(circuit_unitary_dense(c)) / (1 << n)
            assert dqc1_probability(c) == pytest.approx(
                0.5 * (1.0 - tr.real), abs=1e-12
            )

    def test_two_half_pi_z_rotations_give_minus_identity(self):
        z = PauliString.parse("ZI")
        c = Circuit(2, ((z, np.pi / 2), (z, np.pi / 2)))
        assert circuit_trace_exact(c) == pytest.approx(-1.0)
        assert dqc1_probability(c) == pytest.approx(1.0)

    def test_estimate_concentrates(self):
        c = Circuit(1, ((PauliString.parse("Z"), 0.37),))
        out = dqc1_estimate(c, shots=40_000, seed=5)
        assert abs(out.value - np.cos(0.37)) <= 4 * out.stderr
        assert out.value == 1.0 - 2.0 * out.ones_count / out.shots

    def test_estimate_deterministic(self):
        c = Circuit(1, ((PauliString.parse("Z"), 0.37),))
        a = dqc1_estimate(c, shots=500, seed=9)
        b = dqc1_estimate(c, shots=500, seed=9)
        assert (a.value, a.ones_count) == (b.value, b.ones_count)

    def test_identity_circuit_never_fires(self):
        c = Circuit(2, ())
        out = dqc1_estimate(c, shots=100, seed=1)
        assert out.ones_count == 0
        assert out.value == 1.0
        assert out.stderr == 0.0


class TestEstimatorOutput:
    def test_value_count_consistency_enforced(self):
        with pytest.raises(InputError):
            EstimatorOutput(
                value=0.5,
                ones_count=10,
                shots=100,
                n=2,
                m=2,
                trotter_k=4,
                seed=0,
                epsilon=None,
                delta=None,
            )

    def test_stderr_is_binomial_plug_in(self):
        out = EstimatorOutput(
            value=1.0 - 2.0 * 25 / 100,
            ones_count=25,
            shots=100,
            n=2,
            m=2,
            trotter_k=4,
            seed=0,
            epsilon=None,
            delta=None,
        )
        p = 0.25
        assert out.stderr == pytest.approx(2 * np.sqrt(p * (1 - p) / 100))
        assert out.to_json_dict()["stderr"] == out.stderr


class TestSufficientParams:
    def test_inequalities(self):
        eps, delta, dg, c = 0.1, 0.05, 1.0, 0.1
        out = quantum_sufficient_params(eps, delta, dg, constant_C=c)
        # Tolerate one-part-in-1e9 float noise in the bound itself
        # (6 * 0.1 / 0.1 evaluates to 6.000000000000001).
        assert out["n"] >= 6 * c / eps - 1e-9
        assert out["n"] >= np.log2(6 * c / eps) - 1e-9
        assert out["m"] == out["n"]
        assert out["K"] > 3 * dg**2 * out["m"] / eps
        assert out["M"] > (2 / eps**2) * np.log(2 / delta)

    def test_frozen_desk_scale_values(self):
        out = quantum_sufficient_params(0.1, 0.05, 1.0, constant_C=0.1)
        assert out == {"n": 6, "m": 6, "K": 181, "M": 738}

    def test_default_constant_gives_infeasible_width(self):
        # With the default constant the sufficient width is far past the
        # statevector cap; the calculator reports it and the runner refuses.
        out = quantum_sufficient_params(0.1, 0.05, 1.0)
        assert out["n"] == 60
        with pytest.raises(ResourceCapError):
            qsigker_run(line_path(np.array([1.0])), epsilon=0.1, delta=0.05, seed=0)


class TestQsigkerRun:
    def test_deterministic(self):
        p = line_path(np.array([1.0]))
        a = qsigker_run(p, m=4, n=4, trotter_k=8, shots=200, seed=3)
        b = qsigker_run(p, m=4, n=4, trotter_k=8, shots=200, seed=3)
        assert a.value == b.value and a.ones_count == b.ones_count

    def test_concentrates_on_limit(self):
        p = line_path(np.array([1.0]))
        out = qsigker_run(p, m=6, n=6, trotter_k=32, shots=4000, seed=9)
        # 4 sigma plus sparse-ensemble and Trotter bias allowance.
        assert abs(out.value - J1_2) <= 4 * out.stderr + 0.03

    def test_auto_parameters_recorded(self):
        p = line_path(np.array([1.0]))
        out = qsigker_run(p, epsilon=0.3, delta=0.2, constant_C=0.05, seed=1)
        ref = quantum_sufficient_params(0.3, 0.2, 1.0, constant_C=0.05)
        assert (out.n, out.m, out.trotter_k, out.shots) == (
            ref["n"],
            ref["m"],
            ref["K"],
            ref["M"],
        )
        assert out.epsilon == 0.3 and out.delta == 0.2

    def test_explicit_overrides_beat_auto(self):
        p = line_path(np.array([1.0]))
        out = qsigker_run(
            p, m=3, epsilon=0.3, delta=0.2, constant_C=0.05, seed=1
        )
        assert out.m == 3

    def test_constant_path_is_exact_unity(self):
        out = qsigker_run(constant_path(1), m=4, n=4, trotter_k=8, shots=50, seed=2)
        assert out.value == 1.0
        assert out.ones_count == 0

    def test_requires_full_parameters_or_targets(self):
        with pytest.raises(InputError):
            qsigker_run(line_path(np.array([1.0])), m=4, n=4, trotter_k=8)


class TestQuantumPathSignature:
    def test_density_matrix_properties(self):
        p = line_path(np.array([1.0]))
        rho = quantum_path_signature(p, m=4, n=3, trotter_k=8, samples=10, seed=2)
        assert rho.shape == (8, 8)
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(rho)[0] >= -1e-12

    def test_density_cap(self):
        with pytest.raises(ResourceCapError):
            quantum_path_signature(
                line_path(np.array([1.0])), m=4, n=7, trotter_k=4, samples=2, seed=0
            )
