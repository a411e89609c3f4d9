"""Measurement sampling directly on a decision-diagram state.

Each shot is one root-to-terminal walk.  At a node the walk takes the
1-successor with probability ``|w_high|^2 d(high) / d(node)``, where ``d`` is
the downstream probability (total squared-amplitude mass below a node).  The
diagram is only read, so any number of shots can be drawn from one state.

Upstream probabilities ``u`` (mass of all root-to-node prefixes) are only
needed for unconditional quantities: edge masses and single-qubit marginals.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .ddcore import Node, QuantumStateDD, iter_nodes
from .densesim import format_index
from .errors import ConfigurationError
from .rng import merge_counts, run_streams

__all__ = [
    "ProbabilityAnnotations",
    "SamplingTable",
    "annotate",
    "branch_probabilities",
    "downstream",
    "edge_mass",
    "exact_distribution",
    "qubit_marginal",
    "sample_many",
    "sample_one",
    "state_probability",
    "upstream",
]


def _mag2(w: complex) -> float:
    return w.real * w.real + w.imag * w.imag


def downstream(state: QuantumStateDD) -> dict[int, float]:
    """``d`` for every reachable node, keyed by node uid (terminal uid 0 -> 1)."""
    d: dict[int, float] = {0: 1.0}

    def visit(node: Node) -> float:
        hit = d.get(node.uid)
        if hit is not None:
            return hit
        total = 0.0
        for edge in (node.low, node.high):
            if edge.weight != 0:
                total += _mag2(edge.weight) * visit(edge.node)
        d[node.uid] = total
        return total

    if state.root.weight != 0:
        visit(state.root.node)
    return d


def _nodes_by_level(state: QuantumStateDD) -> list[Node]:
    return sorted(iter_nodes(state), key=lambda node: -node.level)


def upstream(state: QuantumStateDD, down: dict[int, float] | None = None) -> dict[int, float]:
    """``u`` for every reachable node, processed level by level from the root.

    The terminal entry (uid 0) collects the total mass.  ``down`` is accepted
    for symmetry with :func:`edge_mass` and not used.
    """
    u: dict[int, float] = {}
    root = state.root
    if root.weight == 0:
        return {0: 0.0}
    u[root.node.uid] = _mag2(root.weight)
    u[0] = 0.0
    for node in _nodes_by_level(state):
        mass = u.get(node.uid, 0.0)
        for edge in (node.low, node.high):
            if edge.weight != 0:
                uid = edge.node.uid
                u[uid] = u.get(uid, 0.0) + mass * _mag2(edge.weight)
    return u


@dataclass
class ProbabilityAnnotations:
    downstream: dict[int, float]
    upstream: dict[int, float] | None = None


def annotate(state: QuantumStateDD, *, with_upstream: bool = False) -> ProbabilityAnnotations:
    down = downstream(state)
    return ProbabilityAnnotations(down, upstream(state, down) if with_upstream else None)


def _ensure_upstream(state: QuantumStateDD, ann: ProbabilityAnnotations) -> dict[int, float]:
    if ann.upstream is None:
        ann.upstream = upstream(state, ann.downstream)
    return ann.upstream


def edge_mass(state: QuantumStateDD, ann: ProbabilityAnnotations) -> dict[tuple[int, int], float]:
    """Unconditional probability that a shot traverses each edge.

    Keys are ``(node uid, side)`` with side 0 = low, 1 = high.
    """
    up = _ensure_upstream(state, ann)
    down = ann.downstream
    out: dict[tuple[int, int], float] = {}
    for node in iter_nodes(state):
        for side, edge in enumerate((node.low, node.high)):
            if edge.weight == 0:
                out[node.uid, side] = 0.0
            else:
                out[node.uid, side] = up[node.uid] * _mag2(edge.weight) * down[edge.node.uid]
    return out


def branch_probabilities(node: Node, down: dict[int, float]) -> tuple[float, float]:
    """Conditional (p_low, p_high) of the next step of a walk at ``node``."""
    d = down[node.uid]
    assert d > 0, "stored nodes always carry mass"
    if node.low.weight == 0:
        return 0.0, 1.0
    if node.high.weight == 0:
        return 1.0, 0.0
    p_low = _mag2(node.low.weight) * down[node.low.node.uid] / d
    p_high = _mag2(node.high.weight) * down[node.high.node.uid] / d
    return p_low, p_high


def sample_one(state: QuantumStateDD, down: dict[int, float], rng: np.random.Generator) -> str:
    """One shot as a bitstring, leftmost character = q_{n-1}."""
    bits = []
    edge = state.root
    for _ in range(state.num_qubits):
        node = edge.node
        p_low, _ = branch_probabilities(node, down)
        if rng.random() < p_low:
            bits.append("0")
            edge = node.low
        else:
            bits.append("1")
            edge = node.high
    return "".join(bits)


@dataclass
class SamplingTable:
    """Flat arrays of branch probabilities for vectorized walks.

    Node ``i`` goes low with probability ``p_low[i]`` to ``low[i]``; the
    terminal has index ``len(p_low) - 1``.
    """

    num_qubits: int
    root: int
    p_low: np.ndarray
    low: np.ndarray
    high: np.ndarray
    uids: list[int] = field(default_factory=list)

    @classmethod
    def compile(cls, state: QuantumStateDD, down: dict[int, float] | None = None) -> SamplingTable:
        if state.root.weight == 0:
            raise ConfigurationError("cannot sample from the zero vector")
        down = down if down is not None else downstream(state)
        nodes = list(iter_nodes(state))
        index = {node.uid: i for i, node in enumerate(nodes)}
        terminal = len(nodes)
        index[0] = terminal
        size = terminal + 1
        p_low = np.ones(size)
        low = np.full(size, terminal, dtype=np.int64)
        high = np.full(size, terminal, dtype=np.int64)
        for i, node in enumerate(nodes):
            p_low[i] = branch_probabilities(node, down)[0]
            low[i] = index[node.low.node.uid]
            high[i] = index[node.high.node.uid]
        return cls(state.num_qubits, index[state.root.node.uid], p_low, low, high, [n.uid for n in nodes])

    def walk(self, rng: np.random.Generator, shots: int) -> np.ndarray:
        """Draw ``shots`` paths; returns a (shots, n) uint8 bit matrix, column 0 = q_{n-1}."""
        n = self.num_qubits
        bits = np.empty((shots, n), dtype=np.uint8)
        cur = np.full(shots, self.root, dtype=np.int64)
        for col in range(n):
            go_high = rng.random(shots) >= self.p_low[cur]
            bits[:, col] = go_high
            cur = np.where(go_high, self.high[cur], self.low[cur])
        return bits


def bits_to_strings(bits: np.ndarray) -> list[str]:
    n = bits.shape[1]
    if n <= 63:
        weights = np.left_shift(np.uint64(1), np.arange(n - 1, -1, -1, dtype=np.uint64))
        values = bits.astype(np.uint64) @ weights
        return [format_index(int(v), n) for v in values.tolist()]
    chars = np.frombuffer(b"01", dtype=np.uint8)[bits]
    return [row.tobytes().decode() for row in chars]


def _histogram(bits: np.ndarray) -> dict[str, int]:
    n = bits.shape[1]
    if n <= 63:
        weights = np.left_shift(np.uint64(1), np.arange(n - 1, -1, -1, dtype=np.uint64))
        values, counts = np.unique(bits.astype(np.uint64) @ weights, return_counts=True)
        return {format_index(int(v), n): int(c) for v, c in zip(values.tolist(), counts.tolist())}
    rows, counts = np.unique(bits, axis=0, return_counts=True)
    return dict(zip(bits_to_strings(rows), counts.tolist()))


def sample_shots(state: QuantumStateDD, shots: int, seed: int = 0, *, workers: int = 1) -> np.ndarray:
    """Bit matrix of ``shots`` samples in draw order."""
    if shots < 1:
        raise ConfigurationError("shots must be >= 1")
    table = SamplingTable.compile(state)
    return np.concatenate(run_streams(table.walk, seed, shots, workers))


def sample_many(state: QuantumStateDD, shots: int, seed: int = 0, *, workers: int = 1) -> Counter:
    """Histogram of ``shots`` samples; deterministic in (seed, workers)."""
    if shots < 1:
        raise ConfigurationError("shots must be >= 1")
    table = SamplingTable.compile(state)
    parts = run_streams(lambda rng, count: _histogram(table.walk(rng, count)), seed, shots, workers)
    return Counter(merge_counts(parts))


def state_probability(state: QuantumStateDD, bitstring: str, down: dict[int, float] | None = None) -> float:
    """Probability of measuring ``bitstring``: product of branch probabilities on its path."""
    n = state.num_qubits
    if len(bitstring) != n or any(b not in "01" for b in bitstring):
        raise ConfigurationError(f"expected a bitstring of length {n}, got {bitstring!r}")
    root = state.root
    if root.weight == 0:
        return 0.0
    down = down if down is not None else downstream(state)
    prob = _mag2(root.weight) * down[root.node.uid]
    edge = root
    for bit in bitstring:
        node = edge.node
        p_low, p_high = branch_probabilities(node, down)
        if bit == "0":
            prob *= p_low
            edge = node.low
        else:
            prob *= p_high
            edge = node.high
        if prob == 0.0:
            return 0.0
    return prob


def qubit_marginal(state: QuantumStateDD, qubit: int, ann: ProbabilityAnnotations | None = None) -> float:
    """P(q_k = 1) from upstream and downstream mass at level k."""
    if not 0 <= qubit < state.num_qubits:
        raise ConfigurationError(f"qubit {qubit} out of range for {state.num_qubits} qubits")
    ann = ann if ann is not None else annotate(state)
    up = _ensure_upstream(state, ann)
    down = ann.downstream
    total = 0.0
    for node in iter_nodes(state):
        if node.level == qubit and node.high.weight != 0:
            total += up[node.uid] * _mag2(node.high.weight) * down[node.high.node.uid]
    return min(max(total, 0.0), 1.0)


def exact_distribution(state: QuantumStateDD) -> np.ndarray:
    """All 2^n outcome probabilities via :func:`state_probability` (small n only)."""
    n = state.num_qubits
    if n > 20:
        raise ConfigurationError("exact distribution is only enumerated for n <= 20")
    down = downstream(state)
    return np.array([state_probability(state, format_index(i, n), down) for i in range(1 << n)])
