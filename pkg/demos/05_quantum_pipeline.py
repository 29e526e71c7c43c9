"""The simulated quantum estimator end to end: Trotterize a path development
into Pauli rotations, estimate the normalized trace with the one-clean-qubit
(DQC1) circuit, and compare shots against the exact simulation and the
deterministic limit.

Run:  python3 demos/05_quantum_pipeline.py
"""

import numpy as np

from pathdev import (
    Circuit,
    PiecewiseLinearPath,
    build_trotter_circuit,
    circuit_trace_exact,
    dqc1_estimate,
    dqc1_probability,
    limiting_development,
    line_path,
    qsigker_run,
    quantum_sufficient_params,
    sample_pauli_ensemble,
    semicircular_law,
)


def main():
    path = PiecewiseLinearPath(
        knots=np.array([0.0, 0.5, 1.0]),
        increments=np.array([[0.5, -0.3], [0.2, 0.4]]),
    )
    n, m, K = 6, 6, 32

    # Trotterization: each segment becomes K sweeps of one rotation per
    # ensemble string, with angles increment * coefficient / K.
    ops = sample_pauli_ensemble(n=n, m=m, d=path.dim, seed=21)
    circuit = build_trotter_circuit(path, ops, K)
    print("Trotter circuit: n=%d qubits, %d gates (= %d segments x K=%d x %d strings)"
          % (n, circuit.gate_count, path.num_segments, K,
             sum(len(op.terms) for op in ops)))

    # The DQC1 readout: the probability of reading 1 on the clean qubit is
    # (1 - Re tr-bar U)/2, so shots of that qubit estimate the trace.
    p1 = dqc1_probability(circuit)
    trace = circuit_trace_exact(circuit)
    print("  exact normalized trace  = %+.6f %+.6fi" % (trace.real, trace.imag))
    print("  exact P(read 1)         = %.6f = (1 - Re tr)/2" % p1)
    for shots in (200, 2000, 20000):
        est = dqc1_estimate(circuit, shots=shots, seed=4)
        print("  %6d shots: trace estimate %+.4f +/- %.4f" %
              (shots, est.value, est.stderr))

    # Round trip through the JSONL circuit format.
    replay = Circuit.from_jsonl(circuit.to_jsonl())
    print("  JSONL round trip preserves the circuit:",
          dqc1_probability(replay) == p1)

    # The full estimator on the unit line, whose limiting value is 0.57672...
    line = line_path([1.0])
    limit = limiting_development(semicircular_law(1, 20), line, 20).value.real
    out = qsigker_run(line, m=8, n=8, trotter_k=32, shots=4000, seed=2)
    print("\nUnit line: limit %.6f, one run at (n=8, m=8, K=32, 4000 shots): "
          "%.4f +/- %.4f" % (limit, out.value, out.stderr))

    # Sufficient parameters for a target accuracy/confidence; the widths stay
    # modest only when the ensemble constant is small.
    suff = quantum_sufficient_params(0.1, 0.05, 2.0, constant_C=0.1)
    print("\nSufficient parameters for epsilon=0.1, delta=0.05, "
          "one-variation 2.0, C=0.1:")
    print("  n=%(n)d qubits, m=%(m)d strings, K=%(K)d Trotter steps, "
          "M=%(M)d shots" % suff)


if __name__ == "__main__":
    main()
