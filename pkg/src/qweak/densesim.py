"""Weak simulation on an explicit amplitude array.

Probabilities are turned into a cumulative (prefix) table once; each shot is
then a binary search for the first prefix entry exceeding a uniform draw.
A linear scan over the same rule is kept as a reference.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .config import dense_limit
from .errors import ConfigurationError, DistributionError, MemoryOutError
from .rng import run_streams

__all__ = [
    "DenseState",
    "PrefixTable",
    "format_index",
    "prefix_sum",
    "probabilities",
    "sample_bitstrings",
    "sample_indices",
    "sample_index",
    "sample_index_linear",
]

SUM_TOL = 1e-6


@dataclass(frozen=True)
class DenseState:
    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        if self.amplitudes.size != 1 << self.num_qubits:
            raise ConfigurationError(
                f"{self.amplitudes.size} amplitudes do not match {self.num_qubits} qubits"
            )

    @classmethod
    def from_vector(cls, vector) -> DenseState:
        amps = np.asarray(vector, dtype=complex).ravel()
        n = amps.size.bit_length() - 1
        if amps.size < 2 or amps.size != 1 << n:
            raise ConfigurationError(f"vector length {amps.size} is not a power of two >= 2")
        return cls(amps, n)

    @property
    def size(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class PrefixTable:
    r: np.ndarray

    def __len__(self) -> int:
        return self.r.size


def probabilities(state: DenseState | np.ndarray) -> np.ndarray:
    amps = state.amplitudes if isinstance(state, DenseState) else np.asarray(state, dtype=complex)
    return amps.real**2 + amps.imag**2


def _check_distribution(probs: np.ndarray) -> None:
    if probs.ndim != 1 or probs.size == 0:
        raise DistributionError("expected a non-empty 1-d probability vector")
    if np.any(probs < 0):
        raise DistributionError("negative probability")
    total = float(probs.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise DistributionError(f"probabilities sum to {total!r}, not 1")


def _last_support(probs: np.ndarray) -> int:
    return int(np.flatnonzero(probs > 0)[-1])


def prefix_sum(probs) -> PrefixTable:
    """Cumulative table r_i = p_0 + ... + p_i.

    Entries from the last nonzero probability onward are pinned to exactly 1
    so every draw in [0, 1) lands on an index with p_i > 0.  Rounding can push
    the running sum a few ulps above 1 earlier on; capping at 1 keeps the
    table non-decreasing without changing any draw's outcome.
    """
    p = np.asarray(probs, dtype=float)
    _check_distribution(p)
    r = np.minimum(np.cumsum(p), 1.0)
    r[_last_support(p) :] = 1.0
    return PrefixTable(r)


def _check_u(u: float) -> None:
    if not 0.0 <= u < 1.0:
        raise ConfigurationError(f"uniform draw must lie in [0, 1), got {u!r}")


def sample_index(prefix: PrefixTable, u: float) -> int:
    """Smallest i with r_i > u, by binary search."""
    _check_u(u)
    r = prefix.r
    lo, hi = 0, r.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if r[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return lo


def sample_index_linear(probs, u: float) -> int:
    """Same rule as :func:`sample_index`, by a running sum over ``probs``."""
    _check_u(u)
    p = np.asarray(probs, dtype=float)
    _check_distribution(p)
    last = _last_support(p)
    running = 0.0
    for i, pi in enumerate(p[:last].tolist()):
        running += pi
        if running > u:
            return i
    return last


def sample_indices(prefix: PrefixTable, draws: np.ndarray) -> np.ndarray:
    """Vectorized :func:`sample_index` for an array of draws."""
    return np.searchsorted(prefix.r, draws, side="right")


def format_index(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b")


def sample_bitstrings(
    state: DenseState,
    shots: int,
    seed: int = 0,
    *,
    limit: int | None = None,
    workers: int = 1,
) -> Counter:
    """Histogram of ``shots`` measured bitstrings (leftmost char = q_{n-1})."""
    if shots < 1:
        raise ConfigurationError("shots must be >= 1")
    cap = dense_limit(limit)
    if state.num_qubits > cap:
        raise MemoryOutError(state.num_qubits, cap)
    indices = draw_indices(state, shots, seed, workers=workers)
    values, counts = np.unique(indices, return_counts=True)
    n = state.num_qubits
    return Counter({format_index(int(v), n): int(c) for v, c in zip(values, counts)})


def draw_indices(state: DenseState, shots: int, seed: int = 0, *, workers: int = 1) -> np.ndarray:
    """Sampled basis-state indices in draw order."""
    prefix = prefix_sum(probabilities(state))
    chunks = run_streams(lambda rng, count: sample_indices(prefix, rng.random(count)), seed, shots, workers)
    return np.concatenate(chunks)
