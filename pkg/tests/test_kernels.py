"""Kernel routes: truncated-series and PDE signature kernels, the four
development-kernel routes, method resolution, and the Gram matrix API."""

import dataclasses
import math

import numpy as np
import pytest

from pathdev import (
    METHOD_ALIASES,
    METHODS,
    GramResult,
    InputError,
    KernelConfig,
    KernelValue,
    classical_sufficient_params,
    constant_path,
    gram_matrix,
    gue_kernel,
    kernel_evaluate,
    line_path,
    resolve_method,
    signature_kernel_pde,
    signature_kernel_series,
    signature_kernel_tail_bound,
    truncated_signature,
)

from _oracles import I0_2
from conftest import random_path


class TestMethodResolution:
    def test_canonical_names_resolve_to_themselves(self):
        assert len(METHODS) == 6
        for name in METHODS:
            assert resolve_method(name) == name

    def test_aliases(self):
        assert resolve_method("quantum") == "gue-quantum"
        assert resolve_method("classical-mc") == "gue-classical-mc"
        assert resolve_method("integral-eq") == "gue-integral-eq"
        for alias, target in METHOD_ALIASES.items():
            assert target in METHODS

    def test_unknown_method_rejected(self):
        with pytest.raises(InputError, match="unknown kernel method"):
            resolve_method("gue-oracle")


class TestKernelConfig:
    def test_defaults_fill_unset_fields(self):
        cfg = KernelConfig()
        assert cfg.method == "signature-series"
        assert cfg.get("depth") == 12
        assert cfg.get("grid_step") == pytest.approx(1 / 128)
        assert cfg.get("matrix_n") == 128
        assert cfg.get("mc_samples") == 200
        assert cfg.get("trotter_k") == 64
        assert cfg.get("n_qubits") == 6
        assert cfg.get("pauli_m") == 6
        assert cfg.get("shots") == 2000

    def test_explicit_value_wins_over_default(self):
        cfg = KernelConfig(depth=5, shots=17)
        assert cfg.get("depth") == 5
        assert cfg.get("shots") == 17

    def test_alias_resolved_at_construction(self):
        assert KernelConfig(method="quantum").method == "gue-quantum"

    def test_unknown_method_rejected(self):
        with pytest.raises(InputError, match="unknown kernel method"):
            KernelConfig(method="laplace")

    def test_epsilon_requires_delta(self):
        with pytest.raises(InputError, match="together"):
            KernelConfig(epsilon=0.1)
        with pytest.raises(InputError, match="together"):
            KernelConfig(delta=0.05)
        cfg = KernelConfig(epsilon=0.1, delta=0.05)
        assert cfg.epsilon == 0.1 and cfg.delta == 0.05


class TestSignatureKernelSeries:
    def test_unit_line_with_itself_sums_squared_factorials(self):
        # One-dimensional unit line: S at level n is 1/n!, so the kernel is
        # sum 1/(n!)^2, whose limit is the frozen Bessel constant.
        line = line_path([1.0])
        assert signature_kernel_series(line, line, depth=20) == pytest.approx(
            I0_2, abs=1e-15
        )

    def test_orthogonal_lines_share_only_the_empty_word(self):
        sx = line_path([1.0, 0.0])
        sy = line_path([0.0, 1.0])
        assert signature_kernel_series(sx, sy, depth=10) == 1.0

    def test_matches_explicit_level_dot_products(self, rng):
        s = random_path(rng, dim=2, max_segments=3)
        t = random_path(rng, dim=2, max_segments=4)
        depth = 6
        sig_s = truncated_signature(s, depth)
        sig_t = truncated_signature(t, depth)
        expected = sum(
            float(np.dot(sig_s.levels[n], sig_t.levels[n]))
            for n in range(depth + 1)
        )
        assert signature_kernel_series(s, t, depth) == pytest.approx(
            expected, rel=1e-14
        )

    def test_symmetry(self, rng):
        s = random_path(rng, dim=3, max_segments=4)
        t = random_path(rng, dim=3, max_segments=2)
        assert signature_kernel_series(s, t, 8) == signature_kernel_series(t, s, 8)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(InputError, match="dimension"):
            signature_kernel_series(line_path([1.0]), line_path([1.0, 0.0]), 4)

    def test_tail_bound_dominates_remainder_and_shrinks(self, rng):
        s = random_path(rng, dim=2, max_segments=3, target_variation=0.9)
        t = random_path(rng, dim=2, max_segments=3, target_variation=1.1)
        converged = signature_kernel_series(s, t, 24)
        bounds = []
        for depth in (2, 4, 6, 8):
            remainder = abs(converged - signature_kernel_series(s, t, depth))
            bound = signature_kernel_tail_bound(s, t, depth)
            assert remainder <= bound + 1e-15
            bounds.append(bound)
        assert bounds == sorted(bounds, reverse=True)
        assert bounds[-1] < 1e-6


class TestSignatureKernelPDE:
    def test_constant_factor_returns_one(self):
        assert signature_kernel_pde(constant_path(2), line_path([1.0, 0.0])) == 1.0

    def test_agrees_with_series_on_random_pairs(self, rng):
        # At these variations the depth-14 series tail is far below the
        # comparison tolerance.
        for _ in range(4):
            d = int(rng.integers(1, 4))
            s = random_path(rng, dim=d, max_segments=3, target_variation=0.8)
            t = random_path(rng, dim=d, max_segments=4, target_variation=1.0)
            series = signature_kernel_series(s, t, 14)
            pde = signature_kernel_pde(s, t, resolution=1 / 256)
            assert pde == pytest.approx(series, abs=2e-6)

    def test_second_order_in_the_grid(self, rng):
        # Dyadic knots make every segment width an exact multiple of the
        # resolutions below, so halving the resolution exactly halves the
        # cell width and the error should drop fourfold.
        from pathdev import PiecewiseLinearPath

        s = PiecewiseLinearPath(
            np.array([0.0, 0.25, 0.625, 1.0]), rng.normal(size=(3, 2)) * 0.4
        )
        t = PiecewiseLinearPath(
            np.array([0.0, 0.5, 1.0]), rng.normal(size=(2, 2)) * 0.4
        )
        truth = signature_kernel_series(s, t, 20)
        errs = [
            abs(signature_kernel_pde(s, t, resolution=h) - truth)
            for h in (1 / 16, 1 / 32, 1 / 64)
        ]
        assert errs[0] / errs[1] >= 3.0
        assert errs[1] / errs[2] >= 3.0

    def test_symmetry(self, rng):
        s = random_path(rng, dim=2, max_segments=3)
        t = random_path(rng, dim=2, max_segments=4)
        a = signature_kernel_pde(s, t, 1 / 64)
        b = signature_kernel_pde(t, s, 1 / 64)
        assert a == pytest.approx(b, abs=1e-12)

    def test_resolution_validation(self):
        line = line_path([1.0])
        with pytest.raises(InputError, match="resolution"):
            signature_kernel_pde(line, line, resolution=0.0)
        with pytest.raises(InputError, match="resolution"):
            signature_kernel_pde(line, line, resolution=1.5)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(InputError, match="dimension"):
            signature_kernel_pde(line_path([1.0]), line_path([1.0, 0.0]))


class TestGueKernelDeterministicRoutes:
    def test_identical_paths_develop_to_unity(self, rng):
        # s concatenated with its reversal has the unit signature, so the
        # limiting development of the pair is exactly 1.
        s = random_path(rng, dim=2, max_segments=3, target_variation=0.9)
        out = gue_kernel(s, s, KernelConfig(method="gue-series", depth=12))
        assert out.value == pytest.approx(1.0, abs=1e-10)
        assert abs(out.details["value_im"]) < 1e-12

    def test_series_route_reports_tail_bound(self, rng):
        s = random_path(rng, dim=2, max_segments=2, target_variation=0.6)
        t = random_path(rng, dim=2, max_segments=2, target_variation=0.7)
        out = gue_kernel(s, t, KernelConfig(method="gue-series", depth=16))
        assert out.stderr is None
        assert out.tail_bound is not None and out.tail_bound < 1e-5

    def test_series_and_integral_equation_agree(self, rng):
        for _ in range(3):
            s = random_path(rng, dim=2, max_segments=2, target_variation=0.6)
            t = random_path(rng, dim=2, max_segments=2, target_variation=0.6)
            series = gue_kernel(s, t, KernelConfig(method="gue-series", depth=16))
            integral = gue_kernel(
                s, t, KernelConfig(method="gue-integral-eq", grid_step=1 / 256)
            )
            assert integral.value == pytest.approx(series.value, abs=1e-4)
            assert integral.stderr is None and integral.tail_bound is None

    def test_rejects_signature_methods(self, rng):
        s = random_path(rng, dim=2)
        with pytest.raises(InputError, match="non-development"):
            gue_kernel(s, s, KernelConfig(method="signature-series"))


class TestGueKernelStochasticRoutes:
    def test_classical_mc_is_seed_deterministic(self, rng):
        s = random_path(rng, dim=2, max_segments=2, target_variation=0.6)
        t = random_path(rng, dim=2, max_segments=2, target_variation=0.6)
        cfg = KernelConfig(
            method="gue-classical-mc", matrix_n=16, mc_samples=24, trotter_k=8, seed=5
        )
        a = gue_kernel(s, t, cfg)
        b = gue_kernel(s, t, cfg)
        c = gue_kernel(s, t, dataclasses.replace(cfg, seed=6))
        assert a.value == b.value and a.stderr == b.stderr
        assert a.value != c.value
        assert a.stderr > 0

    def test_classical_mc_details_record_parameters(self, rng):
        s = random_path(rng, dim=2, max_segments=2, target_variation=0.5)
        cfg = KernelConfig(
            method="gue-classical-mc", matrix_n=16, mc_samples=8, trotter_k=4, seed=3
        )
        out = gue_kernel(s, s, cfg)
        assert out.details["N"] == 16
        assert out.details["M"] == 8
        assert out.details["K"] == 4
        assert out.details["seed"] == 3
        assert out.details["value_re"] == out.value

    def test_classical_mc_accuracy_targets_fill_unset_parameters(self, rng):
        s = line_path([0.3, 0.2])
        t = line_path([0.1, 0.25])
        eps, delta = 0.45, 0.4
        cfg = KernelConfig(
            method="gue-classical-mc", epsilon=eps, delta=delta, trotter_k=6, seed=9
        )
        out = gue_kernel(s, t, cfg)
        from pathdev import concatenate, one_variation, reverse

        dg = one_variation(concatenate(s, reverse(t)))
        auto = classical_sufficient_params(eps, delta, dg)
        assert out.details["N"] == auto["N"]
        assert out.details["M"] == auto["M"]
        assert out.details["K"] == 6  # explicit override beats the target

    def test_quantum_details_record_parameters(self, rng):
        s = line_path([0.3, 0.1])
        cfg = KernelConfig(
            method="gue-quantum",
            n_qubits=4,
            pauli_m=3,
            trotter_k=4,
            shots=200,
            seed=11,
        )
        out = gue_kernel(s, s, cfg)
        assert out.details["n"] == 4
        assert out.details["m"] == 3
        assert out.details["trotter_k"] == 4
        assert out.details["shots"] == 200
        assert out.stderr == out.details["stderr"]

    def test_quantum_route_is_seed_deterministic(self, rng):
        s = random_path(rng, dim=2, max_segments=2, target_variation=0.5)
        cfg = KernelConfig(
            method="gue-quantum", n_qubits=4, pauli_m=3, trotter_k=4, shots=150, seed=7
        )
        assert gue_kernel(s, s, cfg).value == gue_kernel(s, s, cfg).value

    def test_stochastic_routes_near_series_value(self, rng):
        # Same small pair through all four development routes; the stochastic
        # ones must land within a few combined standard errors plus the known
        # finite-size bias allowances.
        s = random_path(rng, dim=2, max_segments=2, target_variation=0.5)
        t = random_path(rng, dim=2, max_segments=2, target_variation=0.5)
        series = gue_kernel(s, t, KernelConfig(method="gue-series", depth=16))
        mc = gue_kernel(
            s,
            t,
            KernelConfig(
                method="gue-classical-mc",
                matrix_n=64,
                mc_samples=200,
                trotter_k=32,
                seed=1,
            ),
        )
        assert abs(mc.value - series.value) <= 4 * mc.stderr + 0.02
        q = gue_kernel(
            s,
            t,
            KernelConfig(
                method="gue-quantum",
                n_qubits=8,
                pauli_m=8,
                trotter_k=24,
                shots=3000,
                seed=1,
            ),
        )
        assert abs(q.value - series.value) <= 4 * q.stderr + 0.045


class TestKernelEvaluateDispatch:
    def test_each_method_returns_expected_uncertainty_fields(self, rng):
        s = random_path(rng, dim=2, max_segments=2, target_variation=0.5)
        t = random_path(rng, dim=2, max_segments=2, target_variation=0.5)
        small = dict(
            depth=8,
            grid_step=1 / 64,
            matrix_n=8,
            mc_samples=8,
            trotter_k=4,
            n_qubits=3,
            pauli_m=2,
            shots=100,
        )
        expect_stderr = {
            "signature-series": False,
            "signature-pde": False,
            "gue-series": False,
            "gue-integral-eq": False,
            "gue-classical-mc": True,
            "gue-quantum": True,
        }
        expect_tail = {"signature-series", "gue-series"}
        for method in METHODS:
            out = kernel_evaluate(s, t, KernelConfig(method=method, **small))
            assert isinstance(out, KernelValue)
            assert math.isfinite(out.value)
            assert (out.stderr is not None) == expect_stderr[method], method
            assert (out.tail_bound is not None) == (method in expect_tail), method

    def test_series_dispatch_matches_direct_call(self, rng):
        s = random_path(rng, dim=2)
        t = random_path(rng, dim=2)
        out = kernel_evaluate(s, t, KernelConfig(method="signature-series", depth=7))
        assert out.value == signature_kernel_series(s, t, 7)
        assert out.tail_bound == signature_kernel_tail_bound(s, t, 7)

    def test_pde_dispatch_respects_grid_step(self, rng):
        s = random_path(rng, dim=2)
        t = random_path(rng, dim=2)
        out = kernel_evaluate(s, t, KernelConfig(method="signature-pde", grid_step=1 / 32))
        assert out.value == signature_kernel_pde(s, t, 1 / 32)


class TestGramMatrix:
    def _dataset(self, rng, count=3, dim=2):
        return [
            (f"p{k}", random_path(rng, dim=dim, max_segments=3, target_variation=0.8))
            for k in range(count)
        ]

    def test_labels_symmetry_and_diagonal(self, rng):
        data = self._dataset(rng)
        res = gram_matrix(data, KernelConfig(method="signature-series", depth=8))
        assert res.labels == ("p0", "p1", "p2")
        assert res.method == "signature-series"
        np.testing.assert_array_equal(res.matrix, res.matrix.T)
        for k, (_, path) in enumerate(data):
            assert res.matrix[k, k] == signature_kernel_series(path, path, 8)
        assert res.stderr is None

    def test_bare_paths_get_positional_labels(self, rng):
        paths = [random_path(rng, dim=2) for _ in range(2)]
        res = gram_matrix(paths, KernelConfig(method="signature-series", depth=6))
        assert res.labels == ("0", "1")

    def test_truncated_signature_gram_is_positive_semidefinite(self, rng):
        data = self._dataset(rng, count=4)
        res = gram_matrix(data, KernelConfig(method="signature-series", depth=8))
        assert res.min_eigenvalue >= -1e-10
        assert res.min_eigenvalue == pytest.approx(
            float(np.linalg.eigvalsh(res.matrix)[0])
        )

    def test_threaded_evaluation_is_bit_identical(self, rng):
        data = self._dataset(rng)
        cfg = KernelConfig(
            method="gue-classical-mc", matrix_n=8, mc_samples=8, trotter_k=4, seed=2
        )
        a = gram_matrix(data, cfg, threads=1)
        b = gram_matrix(data, cfg, threads=3)
        np.testing.assert_array_equal(a.matrix, b.matrix)
        np.testing.assert_array_equal(a.stderr, b.stderr)

    def test_per_entry_seeds_differ_but_shared_samples_reuses_one_stream(self, rng):
        path = random_path(rng, dim=2, max_segments=2, target_variation=0.6)
        data = [("a", path), ("b", path)]
        cfg = KernelConfig(
            method="gue-classical-mc", matrix_n=8, mc_samples=16, trotter_k=4, seed=4
        )
        per_entry = gram_matrix(data, cfg)
        # Same path pair at every entry, but derived seeds differ by index.
        vals = {
            per_entry.matrix[0, 0],
            per_entry.matrix[0, 1],
            per_entry.matrix[1, 1],
        }
        assert len(vals) == 3
        shared = gram_matrix(data, dataclasses.replace(cfg, shared_samples=True))
        assert shared.matrix[0, 0] == shared.matrix[0, 1] == shared.matrix[1, 1]

    def test_stochastic_gram_reports_stderr_matrix(self, rng):
        data = self._dataset(rng, count=2)
        cfg = KernelConfig(
            method="gue-classical-mc", matrix_n=8, mc_samples=8, trotter_k=4, seed=3
        )
        res = gram_matrix(data, cfg)
        assert res.stderr is not None and res.stderr.shape == (2, 2)
        np.testing.assert_array_equal(res.stderr, res.stderr.T)
        assert np.all(res.stderr > 0)

    def test_json_dict_round_trip_fields(self, rng):
        data = self._dataset(rng, count=2)
        res = gram_matrix(data, KernelConfig(method="signature-series", depth=6))
        out = res.to_json_dict()
        assert set(out) == {"labels", "matrix", "method", "seed", "min_eigenvalue"}
        assert out["labels"] == ["p0", "p1"]
        np.testing.assert_allclose(np.array(out["matrix"]), res.matrix)
        stoch = gram_matrix(
            data,
            KernelConfig(
                method="gue-classical-mc", matrix_n=8, mc_samples=8, trotter_k=4
            ),
        )
        assert "stderr" in stoch.to_json_dict()

    def test_csv_text_parses_back(self, rng):
        data = self._dataset(rng, count=2)
        res = gram_matrix(data, KernelConfig(method="signature-series", depth=6))
        lines = res.to_csv_text().strip().splitlines()
        assert lines[0] == "id,p0,p1"
        row0 = lines[1].split(",")
        assert row0[0] == "p0"
        assert float(row0[1]) == pytest.approx(res.matrix[0, 0])

    def test_empty_dataset_rejected(self):
        with pytest.raises(InputError, match="at least one"):
            gram_matrix([], KernelConfig())

    def test_result_is_frozen_dataclass(self, rng):
        res = gram_matrix(
            [random_path(rng, dim=1)], KernelConfig(method="signature-series", depth=4)
        )
        assert isinstance(res, GramResult)
        with pytest.raises(dataclasses.FrozenInstanceError):
            res.method = "other"
