"""``qweak`` command line: sample, compare and bench.

Exit codes: 0 success, 1 I/O failure, 2 usage or parse error, 3 memory-out
refusal of the dense backend, 4 a compare gate failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import ddsampler, densesim, stats
from .circuit import Circuit, run
from .config import DEFAULT_DENSE_LIMIT, dense_limit
from .ddcore import UniqueTable, node_count
from .errors import ConfigurationError, DistributionError, MemoryOutError
from .generators import from_spec
from .qasm import QasmError, load

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_MEMORY = 3
EXIT_COMPARE = 4

COMPARE_MAX_QUBITS = 10
AMPLITUDE_TOL = 1e-10
TVD_TOL = 0.005


def tvd_tolerance(support: int, shots: int) -> float:
    """TVD gate for ``shots`` samples over ``support`` outcomes.

    Sampling noise alone gives an expected TVD near ``sqrt(support / shots) / 2``,
    so a flat 0.005 would reject correct samplers on wide distributions.  The
    gate is 0.005 or the ``3 sqrt(K / shots)`` convergence bound, whichever is
    larger.
    """
    return max(TVD_TOL, 3.0 * math.sqrt(support / shots))


@dataclass
class RunReport:
    circuit: str
    qubits: int
    backend: str
    size: int | None  # None = memory out
    precompute_s: float
    sampling_s: float
    shots: int
    histogram: dict[str, int] | None = None

    def line(self) -> str:
        size = "MO" if self.size is None else str(self.size)
        if self.size is None:
            return f"{self.circuit:<16} {self.qubits:>6} {self.backend:<7} {size:>12} {'-':>10} {'-':>10}"
        return (
            f"{self.circuit:<16} {self.qubits:>6} {self.backend:<7} {size:>12}"
            f" {self.precompute_s:>10.3f} {self.sampling_s:>10.3f}"
        )


BENCH_HEADER = f"{'name':<16} {'qubits':>6} {'backend':<7} {'size':>12} {'t_pre[s]':>10} {'t_smp[s]':>10}"


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--shots", type=_pos_int, default=1_000_000)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument(
        "--dense-limit",
        type=_nonneg_int,
        default=None,
        help=f"largest qubit count the vector backend accepts (default {DEFAULT_DENSE_LIMIT}, "
        "or $QWEAK_DENSE_LIMIT)",
    )
    p.add_argument("--threads", type=_pos_int, default=1, help="worker streams for the sampling phase")


def _source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--circuit", metavar="PATH", help="OpenQASM 2.0 file")
    src.add_argument("--gen", metavar="SPEC", help="generator spec, e.g. qft:16, ghz:8, grover:10:1, random:8:20:3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qweak", description="Weak simulation of quantum circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="simulate a circuit and draw measurement samples")
    _source(p)
    p.add_argument("--backend", choices=("vector", "dd"), default="dd")
    p.add_argument("--format", choices=("lines", "histogram"), default="histogram")
    p.add_argument("--output", metavar="PATH", default=None)
    _common(p)

    p = sub.add_parser("compare", help="check the DD backend against the dense oracle")
    _source(p)
    _common(p)

    p = sub.add_parser("bench", help="size and timing table over several circuits")
    p.add_argument("--gen", action="append", default=[], metavar="SPEC")
    p.add_argument("--circuit", action="append", default=[], metavar="PATH")
    p.add_argument("--backends", default="vector,dd", help="comma-separated subset of vector,dd")
    _common(p)
    return parser


def _load_circuit(args) -> Circuit:
    if args.circuit is not None:
        return load(args.circuit)
    return from_spec(args.gen)


def simulate(circuit: Circuit, backend: str, limit: int | None):
    """Strong simulation; returns ``(state, size, seconds)``."""
    start = time.perf_counter()
    if backend == "vector":
        state = run(circuit, "vector", limit=limit)
        size = state.size
    else:
        state = run(circuit, "dd", table=UniqueTable())
        size = node_count(state)
    return state, size, time.perf_counter() - start


def _histogram(state, backend: str, shots: int, seed: int, workers: int, limit: int | None) -> dict[str, int]:
    if backend == "vector":
        return dict(densesim.sample_bitstrings(state, shots, seed, limit=limit, workers=workers))
    return dict(ddsampler.sample_many(state, shots, seed, workers=workers))


def _lines(state, backend: str, shots: int, seed: int, workers: int) -> list[str]:
    if backend == "vector":
        n = state.num_qubits
        return [densesim.format_index(int(i), n) for i in densesim.draw_indices(state, shots, seed, workers=workers)]
    return ddsampler.bits_to_strings(ddsampler.sample_shots(state, shots, seed, workers=workers))


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_sample(args) -> int:
    circuit = _load_circuit(args)
    limit = dense_limit(args.dense_limit)
    state, size, t_pre = simulate(circuit, args.backend, limit)
    start = time.perf_counter()
    if args.format == "histogram":
        counts = _histogram(state, args.backend, args.shots, args.seed, args.threads, limit)
        t_smp = time.perf_counter() - start
        doc = {
            "circuit": circuit.name,
            "qubits": circuit.num_qubits,
            "shots": args.shots,
            "counts": dict(sorted(counts.items())),
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        shots = _lines(state, args.backend, args.shots, args.seed, args.threads)
        t_smp = time.perf_counter() - start
        text = "\n".join(shots) + "\n"
    _emit(text, args.output)
    report = RunReport(circuit.name, circuit.num_qubits, args.backend, size, t_pre, t_smp, args.shots)
    # timings vary run to run, so the report stays off stdout
    print(
        f"{report.circuit}: qubits={report.qubits} backend={report.backend} size={report.size} "
        f"precompute={report.precompute_s:.3f}s sampling={report.sampling_s:.3f}s shots={report.shots}",
        file=sys.stderr,
    )
    return EXIT_OK


def _gate(name: str, value: float, ok: bool, rows: list[str], failed: list[str]) -> None:
    rows.append(f"{name:<26} {value:.6e} {'PASS' if ok else 'FAIL'}")
    if not ok:
        failed.append(name)


def _chi_gate(name: str, hist: dict[str, int], exact: np.ndarray, rows: list[str], failed: list[str]) -> None:
    try:
        statistic, dof = stats.chi_squared(hist, exact)
    except stats.DegenerateDistributionError:
        ok = stats.chi_squared_passes(hist, exact)
        rows.append(f"{name:<26} {'degenerate':>12} {'PASS' if ok else 'FAIL'}")
        if not ok:
            failed.append(name)
        return
    threshold = stats.chi2_threshold(dof)
    ok = statistic <= threshold
    rows.append(f"{name:<26} {statistic:.6e} {'PASS' if ok else 'FAIL'} (dof {dof}, limit {threshold:.3f})")
    if not ok:
        failed.append(name)


def cmd_compare(args) -> int:
    circuit = _load_circuit(args)
    n = circuit.num_qubits
    if n > COMPARE_MAX_QUBITS:
        raise ConfigurationError(f"compare needs at most {COMPARE_MAX_QUBITS} qubits, circuit has {n}")
    limit = dense_limit(args.dense_limit)
    dense = run(circuit, "vector", limit=limit)
    dd = run(circuit, "dd", table=UniqueTable())
    exact = densesim.probabilities(dense)
    exact = exact / exact.sum()
    rows = [f"circuit {circuit.name} qubits {n} shots {args.shots} seed {args.seed}"]
    failed: list[str] = []

    amp_dev = float(np.max(np.abs(dd.to_dense() - dense.amplitudes)))
    _gate("max_amplitude_deviation", amp_dev, amp_dev < AMPLITUDE_TOL, rows, failed)
    prob_dev = float(np.max(np.abs(ddsampler.exact_distribution(dd) - exact)))
    _gate("max_probability_deviation", prob_dev, prob_dev < AMPLITUDE_TOL, rows, failed)

    hist_vec = _histogram(dense, "vector", args.shots, args.seed, args.threads, limit)
    hist_dd = _histogram(dd, "dd", args.shots, args.seed, args.threads, limit)
    exact_map = {densesim.format_index(i, n): float(p) for i, p in enumerate(exact) if p > 0}
    emp_vec = stats.empirical(hist_vec)
    emp_dd = stats.empirical(hist_dd)
    tol = tvd_tolerance(len(exact_map), args.shots)
    rows.append(f"{'tvd_limit':<26} {tol:.6e}")
    for name, p, q in (
        ("tvd_vector_exact", emp_vec, exact_map),
        ("tvd_dd_exact", emp_dd, exact_map),
        ("tvd_dd_vector", emp_dd, emp_vec),
    ):
        d = stats.tvd(p, q)
        _gate(name, d, d < tol, rows, failed)
    _chi_gate("chi2_vector", hist_vec, exact, rows, failed)
    _chi_gate("chi2_dd", hist_dd, exact, rows, failed)

    sys.stdout.write("\n".join(rows) + "\n")
    if failed:
        print(f"compare failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_COMPARE
    return EXIT_OK


def cmd_bench(args) -> int:
    backends = [b.strip() for b in args.backends.split(",") if b.strip()]
    for b in backends:
        if b not in ("vector", "dd"):
            raise ConfigurationError(f"unknown backend {b!r}; choose from vector, dd")
    circuits = [from_spec(spec) for spec in args.gen] + [load(path) for path in args.circuit]
    limit = dense_limit(args.dense_limit)
    print(BENCH_HEADER, flush=True)
    for circuit in circuits:
        for backend in backends:
            try:
                state, size, t_pre = simulate(circuit, backend, limit)
            except MemoryOutError:
                report = RunReport(circuit.name, circuit.num_qubits, backend, None, 0.0, 0.0, args.shots)
            else:
                start = time.perf_counter()
                _histogram(state, backend, args.shots, args.seed, args.threads, limit)
                t_smp = time.perf_counter() - start
                report = RunReport(circuit.name, circuit.num_qubits, backend, size, t_pre, t_smp, args.shots)
                del state
            print(report.line(), flush=True)
    return EXIT_OK


_COMMANDS = {"sample": cmd_sample, "compare": cmd_compare, "bench": cmd_bench}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MemoryOutError as exc:
        print(f"qweak: {exc}", file=sys.stderr)
        return EXIT_MEMORY
    except (QasmError, ConfigurationError, DistributionError) as exc:
        print(f"qweak: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qweak: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
