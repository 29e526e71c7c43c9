"""Path signatures, randomized unitary path developments, and their kernels.

The package has seven layers:

* :mod:`pathdev.words` — words, free/cyclic derivatives, non-crossing
  pairings, semicircular moments;
* :mod:`pathdev.paths` — piecewise-linear paths and truncated signatures;
* :mod:`pathdev.nclaw` — Schwinger–Dyson moment solving, limiting
  developments, the master-loop series, and the development integral
  equation;
* :mod:`pathdev.ensembles` — GUE tuples, exact/truncated unitary
  developments, Monte Carlo development estimates;
* :mod:`pathdev.pauli` — Pauli-string algebra, random string ensembles,
  parity word counting;
* :mod:`pathdev.quantum` — Trotter circuits, statevector simulation, the
  DQC1 trace estimator;
* :mod:`pathdev.kernels` — signature/development kernels and Gram matrices.

The ``pathdev`` command-line tool (:mod:`pathdev.cli`) exposes the same
operations on CSV/JSONL files.
"""

from ._seeding import DEFAULT_SEED, rng_for
from .errors import (
    ConvergenceError,
    DivergenceError,
    InputError,
    PathdevError,
    ResourceCapError,
)
from .words import (
    Word,
    WordPair,
    Pairing,
    all_words,
    catalan,
    check_word,
    cyclic_derivative,
    free_difference_quotient,
    noncrossing_pairings,
    semicircular_moment,
    word_index,
)
from .paths import (
    PiecewiseLinearPath,
    TensorSeries,
    chen_product,
    concatenate,
    constant_path,
    from_samples,
    l1_variation,
    line_path,
    one_variation,
    reverse,
    signature_coefficient,
    signature_tail_bound,
    tensor_exponential,
    truncated_signature,
    unit_series,
)
from .nclaw import (
    DevelopmentValue,
    IntegralEquationTable,
    NCLaw,
    Potential,
    growth_radius,
    gue_integral_equation_solve,
    limiting_development,
    loop_operator_series,
    sd_residual,
    semicircular_law,
    solve_schwinger_dyson,
)
from .ensembles import (
    DevelopmentResult,
    HermitianTuple,
    classical_mc_estimate,
    classical_sufficient_params,
    develop_exact,
    develop_truncated,
    finite_n_kernel,
    mixed_moment_estimate,
    sample_gue,
)
from .pauli import (
    PauliString,
    SparsePauliOperator,
    count_even_words,
    count_pair_words,
    ensemble_moment_estimate,
    operator_word_trace,
    pauli_mul,
    sample_pauli_ensemble,
    string_mul,
    string_trace,
)
from .quantum import (
    Circuit,
    EstimatorOutput,
    Statevector,
    apply_pauli_rotation,
    basis_state,
    build_trotter_circuit,
    circuit_trace_exact,
    circuit_unitary_dense,
    dqc1_estimate,
    dqc1_probability,
    qsigker_run,
    quantum_path_signature,
    quantum_sufficient_params,
)
from .kernels import (
    GramResult,
    KernelConfig,
    KernelValue,
    METHOD_ALIASES,
    METHODS,
    gram_matrix,
    gue_kernel,
    kernel_evaluate,
    resolve_method,
    signature_kernel_pde,
    signature_kernel_series,
    signature_kernel_tail_bound,
)
from .io import (
    matrix_to_csv_text,
    parse_word_key,
    path_to_csv_text,
    read_dataset_jsonl,
    read_path_csv,
    word_key,
    write_dataset_jsonl,
    write_path_csv,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SEED",
    "METHOD_ALIASES",
    "check_word",
    "growth_radius",
    "resolve_method",
    "word_index",
    "rng_for",
    "PathdevError",
    "InputError",
    "ConvergenceError",
    "DivergenceError",
    "ResourceCapError",
    "Word",
    "WordPair",
    "Pairing",
    "all_words",
    "catalan",
    "cyclic_derivative",
    "free_difference_quotient",
    "noncrossing_pairings",
    "semicircular_moment",
    "PiecewiseLinearPath",
    "TensorSeries",
    "chen_product",
    "concatenate",
    "constant_path",
    "from_samples",
    "l1_variation",
    "line_path",
    "one_variation",
    "reverse",
    "signature_coefficient",
    "signature_tail_bound",
    "tensor_exponential",
    "truncated_signature",
    "unit_series",
    "DevelopmentValue",
    "IntegralEquationTable",
    "NCLaw",
    "Potential",
    "gue_integral_equation_solve",
    "limiting_development",
    "loop_operator_series",
    "sd_residual",
    "semicircular_law",
    "solve_schwinger_dyson",
    "DevelopmentResult",
    "HermitianTuple",
    "classical_mc_estimate",
    "classical_sufficient_params",
    "develop_exact",
    "develop_truncated",
    "finite_n_kernel",
    "mixed_moment_estimate",
    "sample_gue",
    "PauliString",
    "SparsePauliOperator",
    "count_even_words",
    "count_pair_words",
    "ensemble_moment_estimate",
    "operator_word_trace",
    "pauli_mul",
    "sample_pauli_ensemble",
    "string_mul",
    "string_trace",
    "Circuit",
    "EstimatorOutput",
    "Statevector",
    "apply_pauli_rotation",
    "basis_state",
    "build_trotter_circuit",
    "circuit_trace_exact",
    "circuit_unitary_dense",
    "dqc1_estimate",
    "dqc1_probability",
    "qsigker_run",
    "quantum_path_signature",
    "quantum_sufficient_params",
    "GramResult",
    "KernelConfig",
    "KernelValue",
    "METHODS",
    "gram_matrix",
    "gue_kernel",
    "kernel_evaluate",
    "signature_kernel_pde",
    "signature_kernel_series",
    "signature_kernel_tail_bound",
    "matrix_to_csv_text",
    "parse_word_key",
    "path_to_csv_text",
    "read_dataset_jsonl",
    "read_path_csv",
    "word_key",
    "write_dataset_jsonl",
    "write_path_csv",
]
