"""Command-line interface.

Subcommands::

    sig       truncated signature coefficients of a path CSV
    kernel    kernel value for a path pair, or a Gram matrix for a dataset
    sd-law    solve the Schwinger-Dyson moment system for a potential
    counts    closed-form parity word counts W(m, p) and N(m, p)
    mc        classical Monte Carlo development estimate of a path
    qsim      simulated quantum (DQC1) development estimate of a path

Exit codes: 0 success, 2 invalid input, 3 solver non-convergence,
4 resource cap exceeded.  Output is deterministic for a fixed seed; the seed
defaults to the PATHDEV_SEED environment variable, then to 1729.  The thread
count for Gram matrices defaults to PATHDEV_THREADS, then to the machine's
CPU count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ._seeding import DEFAULT_SEED, rng_for
from .errors import ConvergenceError, InputError, ResourceCapError
from .io import dumps, read_dataset_jsonl, read_path_csv
from .kernels import METHOD_ALIASES, METHODS, KernelConfig, gram_matrix, kernel_evaluate
from .nclaw import Potential, solve_schwinger_dyson
from .paths import one_variation, truncated_signature
from .pauli import _sample_ensemble_rng, count_even_words, count_pair_words
from .quantum import (
    Circuit,
    build_trotter_circuit,
    dqc1_estimate,
    dqc1_probability,
    qsigker_run,
)
from .ensembles import classical_mc_estimate, classical_sufficient_params
from .words import all_words


def _default_seed() -> int:
    env = os.environ.get("PATHDEV_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"PATHDEV_SEED={env!r} is not an integer") from None
    return DEFAULT_SEED


def _default_threads() -> int:
    env = os.environ.get("PATHDEV_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"PATHDEV_THREADS={env!r} is not an integer") from None
    return os.cpu_count() or 1


def _emit(text: str, output: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output:
        with open(output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _add_output_flags(p: argparse.ArgumentParser, formats=("json",)) -> None:
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    p.add_argument(
        "--format", choices=formats, default=formats[0], help="output format"
    )


def _add_kernel_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--depth", type=int, help="series truncation depth")
    p.add_argument("--grid-h", type=float, dest="grid_h", help="PDE/grid resolution")
    p.add_argument("--matrix-n", type=int, dest="matrix_n", help="GUE matrix size N")
    p.add_argument("--mc-samples", type=int, dest="mc_samples", help="Monte Carlo samples M")
    p.add_argument("--trotter-k", type=int, dest="trotter_k", help="Trotter steps K")
    p.add_argument("--n-qubits", type=int, dest="n_qubits", help="qubit count n")
    p.add_argument("--pauli-m", type=int, dest="pauli_m", help="strings per operator m")
    p.add_argument("--shots", type=int, help="DQC1 shot count M")
    p.add_argument("--epsilon", type=float, help="accuracy target (with --delta)")
    p.add_argument("--delta", type=float, help="failure probability target")
    p.add_argument(
        "--constant-C", type=float, dest="constant_C", default=1.0,
        help="ensemble approximation constant C (default 1)",
    )
    p.add_argument("--seed", type=int, help="root seed (default: PATHDEV_SEED or 1729)")


def _kernel_config(args, method: str) -> KernelConfig:
    return KernelConfig(
        method=method,
        depth=args.depth,
        grid_step=args.grid_h,
        matrix_n=args.matrix_n,
        mc_samples=args.mc_samples,
        trotter_k=args.trotter_k,
        n_qubits=args.n_qubits,
        pauli_m=args.pauli_m,
        shots=args.shots,
        epsilon=args.epsilon,
        delta=args.delta,
        constant_C=args.constant_C,
        seed=args.seed if args.seed is not None else _default_seed(),
        shared_samples=getattr(args, "shared_samples", False),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathdev",
        description="Path signatures, unitary path developments, and their kernels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sig = sub.add_parser("sig", help="truncated signature of a path CSV")
    p_sig.add_argument("path", help="path CSV with header t,x1,...,xd")
    p_sig.add_argument("--depth", type=int, default=4, help="truncation depth")
    _add_output_flags(p_sig)

    p_kernel = sub.add_parser("kernel", help="kernel values and Gram matrices")
    ksub = p_kernel.add_subparsers(dest="kernel_command", required=True)
    alias_of = {}
    for alias, target in METHOD_ALIASES.items():
        alias_of.setdefault(target, []).append(alias)
    for method in METHODS:
        kp = ksub.add_parser(
            method,
            aliases=alias_of.get(method, []),
            help=f"evaluate the {method} kernel on a path pair",
        )
        kp.add_argument("path_a", help="first path CSV")
        kp.add_argument("path_b", help="second path CSV")
        _add_kernel_flags(kp)
        _add_output_flags(kp)
        kp.set_defaults(kernel_command=method)
    gp = ksub.add_parser("gram", help="Gram matrix over a JSONL dataset")
    gp.add_argument("dataset", help="dataset JSONL with id/t/x records")
    gp.add_argument(
        "--method", required=True,
        choices=list(METHODS) + sorted(METHOD_ALIASES),
        help="kernel method",
    )
    gp.add_argument("--threads", type=int, help="worker threads (default: machine)")
    gp.add_argument(
        "--shared-samples", action="store_true", dest="shared_samples",
        help="reuse one sample stream for every entry (stochastic methods)",
    )
    _add_kernel_flags(gp)
    _add_output_flags(gp, formats=("csv", "json"))

    p_law = sub.add_parser("sd-law", help="solve the Schwinger-Dyson moment system")
    p_law.add_argument("--potential", help="potential JSON file {dim, couplings}")
    p_law.add_argument("--dim", type=int, help="alphabet size (default: from potential, else 1)")
    p_law.add_argument("--max-degree", type=int, default=8, dest="max_degree")
    p_law.add_argument("--tol", type=float, default=1e-10)
    p_law.add_argument("--max-iter", type=int, default=1000, dest="max_iter")
    p_law.add_argument("--damping", type=float, default=0.5)
    _add_output_flags(p_law)

    p_counts = sub.add_parser("counts", help="parity word counts W(m,p) and N(m,p)")
    p_counts.add_argument("--m", type=int, required=True, help="alphabet size")
    p_counts.add_argument("--p", type=int, required=True, help="half word length")
    _add_output_flags(p_counts)

    p_mc = sub.add_parser("mc", help="classical Monte Carlo development estimate")
    p_mc.add_argument("path", help="path CSV")
    p_mc.add_argument("--matrix-n", type=int, dest="matrix_n", help="GUE matrix size N")
    p_mc.add_argument("--mc-samples", type=int, dest="mc_samples", help="sample count M")
    p_mc.add_argument("--trotter-k", type=int, dest="trotter_k", help="truncation order K")
    p_mc.add_argument("--epsilon", type=float, help="accuracy target (with --delta)")
    p_mc.add_argument("--delta", type=float, help="failure probability target")
    p_mc.add_argument("--seed", type=int, help="root seed")
    _add_output_flags(p_mc)

    p_q = sub.add_parser("qsim", help="simulated quantum (DQC1) development estimate")
    p_q.add_argument("path", nargs="?", help="path CSV (omit with --import-circuit)")
    p_q.add_argument("--n-qubits", type=int, dest="n_qubits", help="qubit count n")
    p_q.add_argument("--pauli-m", type=int, dest="pauli_m", help="strings per operator m")
    p_q.add_argument("--trotter-k", type=int, dest="trotter_k", help="Trotter steps K")
    p_q.add_argument("--shots", type=int, help="DQC1 shot count M")
    p_q.add_argument("--epsilon", type=float, help="accuracy target (with --delta)")
    p_q.add_argument("--delta", type=float, help="failure probability target")
    p_q.add_argument(
        "--constant-C", type=float, dest="constant_C", default=1.0,
        help="ensemble approximation constant C (default 1)",
    )
    p_q.add_argument("--seed", type=int, help="root seed")
    p_q.add_argument(
        "--export-circuit", dest="export_circuit", metavar="FILE",
        help="write the shot-0 Trotter circuit as JSONL",
    )
    p_q.add_argument(
        "--import-circuit", dest="import_circuit", metavar="FILE",
        help="replay a circuit JSONL instead of building one",
    )
    _add_output_flags(p_q)

    return parser


def _cmd_sig(args) -> int:
    path = read_path_csv(args.path)
    sig = truncated_signature(path, args.depth)
    terms = [
        {"word": list(w), "value": sig.coefficient(w)}
        for w in all_words(path.dim, args.depth)
    ]
    _emit(dumps({"dim": path.dim, "depth": args.depth, "terms": terms}), args.output)
    return 0


def _cmd_kernel_pair(args) -> int:
    cfg = _kernel_config(args, args.kernel_command)
    a = read_path_csv(args.path_a)
    b = read_path_csv(args.path_b)
    kv = kernel_evaluate(a, b, cfg)
    out = {"method": cfg.method, "value": kv.value}
    if kv.stderr is not None:
        out["stderr"] = kv.stderr
    if kv.tail_bound is not None:
        out["tail_bound"] = kv.tail_bound
    if kv.details:
        out["params"] = kv.details
    _emit(dumps(out), args.output)
    return 0


def _cmd_kernel_gram(args) -> int:
    cfg = _kernel_config(args, args.method)
    dataset = read_dataset_jsonl(args.dataset)
    threads = args.threads if args.threads is not None else _default_threads()
    result = gram_matrix(dataset, cfg, threads=threads)
    if args.format == "csv":
        _emit(result.to_csv_text(), args.output)
    else:
        _emit(dumps(result.to_json_dict()), args.output)
    return 0


def _cmd_sd_law(args) -> int:
    if args.potential:
        with open(args.potential) as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise InputError(f"bad potential JSON: {exc}") from exc
        potential = Potential.from_json_dict(data)
        if args.dim is not None and args.dim != potential.dim:
            raise InputError(
                f"--dim {args.dim} conflicts with potential dim {potential.dim}"
            )
    else:
        potential = Potential(dim=args.dim if args.dim is not None else 1)
    law = solve_schwinger_dyson(
        potential,
        max_degree=args.max_degree,
        tol=args.tol,
        max_iter=args.max_iter,
        damping=args.damping,
    )
    _emit(dumps(law.to_json_dict()), args.output)
    return 0


def _cmd_counts(args) -> int:
    _emit(
        dumps({"W": count_even_words(args.m, args.p), "N": count_pair_words(args.m, args.p)}),
        args.output,
    )
    return 0


def _cmd_mc(args) -> int:
    path = read_path_csv(args.path)
    seed = args.seed if args.seed is not None else _default_seed()
    N, M, K = args.matrix_n, args.mc_samples, args.trotter_k
    if args.epsilon is not None or args.delta is not None:
        if args.epsilon is None or args.delta is None:
            raise InputError("--epsilon and --delta must be given together")
        suff = classical_sufficient_params(args.epsilon, args.delta, one_variation(path))
        print(
            "sufficient params for epsilon=%g delta=%g: N=%d M=%d K=%d"
            % (args.epsilon, args.delta, suff["N"], suff["M"], suff["K"]),
            file=sys.stderr,
        )
        N = suff["N"] if N is None else N
        M = suff["M"] if M is None else M
        K = suff["K"] if K is None else K
    N = 128 if N is None else N
    M = 200 if M is None else M
    K = 64 if K is None else K
    res = classical_mc_estimate(path, N=N, M=M, K=K, seed=seed)
    _emit(dumps(res.to_json_dict()), args.output)
    return 0


def _cmd_qsim(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.import_circuit:
        if args.path is not None:
            raise InputError("give either a path CSV or --import-circuit, not both")
        with open(args.import_circuit) as f:
            circuit = Circuit.from_jsonl(f.read())
        if args.shots is not None:
            est = dqc1_estimate(circuit, shots=args.shots, seed=seed)
            _emit(dumps(est.to_json_dict()), args.output)
        else:
            p = dqc1_probability(circuit)
            _emit(
                dumps(
                    {
                        "n": circuit.n,
                        "gates": circuit.gate_count,
                        "dqc1_probability": p,
                        "trace_re": 1.0 - 2.0 * p,
                    }
                ),
                args.output,
            )
        return 0

    if args.path is None:
        raise InputError("a path CSV is required unless --import-circuit is given")
    path = read_path_csv(args.path)
    n = 6 if args.n_qubits is None else args.n_qubits
    m = 6 if args.pauli_m is None else args.pauli_m
    K = 16 if args.trotter_k is None else args.trotter_k
    summary: dict = {}
    if args.export_circuit:
        ops = _sample_ensemble_rng(n, m, path.dim, rng_for(seed, 0))
        circuit = build_trotter_circuit(path, ops, K)
        with open(args.export_circuit, "w") as f:
            f.write(circuit.to_jsonl())
        summary.update(
            {"circuit": args.export_circuit, "gates": circuit.gate_count, "n": n}
        )
    if args.shots is not None or args.epsilon is not None:
        est = qsigker_run(
            path,
            m=args.pauli_m,
            n=args.n_qubits,
            trotter_k=args.trotter_k,
            shots=args.shots,
            seed=seed,
            epsilon=args.epsilon,
            delta=args.delta,
            constant_C=args.constant_C,
        ) if args.epsilon is not None else qsigker_run(
            path, m=m, n=n, trotter_k=K, shots=args.shots, seed=seed
        )
        summary.update(est.to_json_dict())
    if not summary:
        raise InputError("nothing to do: give --shots, --epsilon, or --export-circuit")
    _emit(dumps(summary), args.output)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "sig":
            return _cmd_sig(args)
        if args.command == "kernel":
            if args.kernel_command == "gram":
                return _cmd_kernel_gram(args)
            return _cmd_kernel_pair(args)
        if args.command == "sd-law":
            return _cmd_sd_law(args)
        if args.command == "counts":
            return _cmd_counts(args)
        if args.command == "mc":
            return _cmd_mc(args)
        if args.command == "qsim":
            return _cmd_qsim(args)
        raise InputError(f"unknown command {args.command!r}")
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.residuals:
            tail = exc.residuals[-10:]
            print(
                "residual trace (last %d): %s"
                % (len(tail), ", ".join("%.3e" % r for r in tail)),
                file=sys.stderr,
            )
        return 3
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
