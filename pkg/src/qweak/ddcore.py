"""Edge-weighted decision diagrams for quantum state vectors.

A state over qubits q_{n-1} ... q_0 is a rooted DAG.  Every nonterminal node
sits at a level k (qubit q_k) and has a 0-successor edge (``low``) and a
1-successor edge (``high``).  An amplitude is the product of the edge weights
on the path selected by the bits of its index, most significant bit first.

Nodes are kept normalized: ``|w_low|^2 + |w_high|^2 == 1`` and the first
nonzero outgoing weight is real and positive.  The factor pulled out during
normalization moves to the incoming edge.  With the phase convention, two
sub-vectors that differ only by a scalar share one node.

All-zero sub-vectors are a weight-0 edge straight to the terminal (a "zero
stub").  Nonzero edges never skip a level.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from typing import NamedTuple

import numpy as np

from .config import DEFAULT_ATOL, DEFAULT_EPS, MAX_NODE_TOL, dense_limit
from .errors import ConfigurationError, MemoryOutError, ZeroNodeError

__all__ = [
    "Edge",
    "Node",
    "QuantumStateDD",
    "TERMINAL",
    "UniqueTable",
    "ZERO_EDGE",
    "approx_equal",
    "basis_state",
    "compact",
    "default_table",
    "from_dense",
    "get_amplitude",
    "iter_nodes",
    "node_count",
    "normalize_pair",
    "reach",
    "to_dense",
]


def approx_equal(a: complex, b: complex, eps: float = DEFAULT_EPS) -> bool:
    """Tolerance equality: both component differences below ``eps``."""
    return abs(a.real - b.real) < eps and abs(a.imag - b.imag) < eps


def _is_zero(w: complex, eps: float) -> bool:
    return abs(w.real) < eps and abs(w.imag) < eps


class Node:
    __slots__ = ("level", "low", "high", "uid")

    def __init__(self, level: int, low: Edge | None, high: Edge | None, uid: int):
        self.level = level
        self.low = low
        self.high = high
        self.uid = uid

    @property
    def is_terminal(self) -> bool:
        return self.level < 0

    def __repr__(self) -> str:
        if self.level < 0:
            return "Node(terminal)"
        return f"Node(q{self.level}, #{self.uid})"


class Edge(NamedTuple):
    weight: complex
    node: Node

    @property
    def is_zero(self) -> bool:
        return self.weight == 0


TERMINAL = Node(-1, None, None, 0)
ZERO_EDGE = Edge(0j, TERMINAL)
ONE_EDGE = Edge(1 + 0j, TERMINAL)


def normalize_pair(
    raw_low: complex, raw_high: complex, eps: float = DEFAULT_EPS
) -> tuple[complex, complex, complex]:
    """Split a weight pair into unit-norm, phase-fixed weights and a factor.

    Returns ``(stored_low, stored_high, factor)`` with
    ``factor * stored_x == raw_x``.  Raises :class:`ZeroNodeError` when both
    inputs vanish within ``eps``.
    """
    low_zero = _is_zero(raw_low, eps)
    high_zero = _is_zero(raw_high, eps)
    if low_zero and high_zero:
        raise ZeroNodeError("both weights are zero; use a zero stub")
    if high_zero:
        return 1 + 0j, 0j, complex(raw_low)
    if low_zero:
        return 0j, 1 + 0j, complex(raw_high)
    mag_low = abs(raw_low)
    norm = math.hypot(mag_low, abs(raw_high))
    factor = raw_low / mag_low * norm
    stored_low = complex(mag_low / norm, 0.0)
    stored_high = raw_high / factor
    if _is_zero(stored_high, eps):
        return 1 + 0j, 0j, complex(raw_low)
    return stored_low, stored_high, factor


class UniqueTable:
    """Hash-consed node store.

    Weights are snapped to canonical representatives (one per ``eps``-sized
    cell, with a neighbour check) so that tolerance-equal keys hash
    identically.  ``gc_threshold`` is the node count above which
    :meth:`maybe_collect` sweeps unreachable nodes.
    """

    def __init__(
        self,
        eps: float = DEFAULT_EPS,
        gc_threshold: int = 1_000_000,
        atol: float = DEFAULT_ATOL,
    ):
        self.eps = eps
        self.atol = atol
        self.gc_threshold = gc_threshold
        self._nodes: dict[tuple, Node] = {}
        self._grid: dict[tuple, list[Node]] = {}
        self._reals: dict[int, float] = {}
        self._next_uid = 1
        self.compute_cache: dict = {}
        self.collections = 0

    def __len__(self) -> int:
        return len(self._nodes)

    def canonical_real(self, x: float) -> float:
        eps = self.eps
        if -eps < x < eps:
            return 0.0
        scaled = x / eps
        cell = math.floor(scaled)
        reals = self._reals
        rep = reals.get(cell)
        if rep is not None:
            return rep
        neighbour = cell + 1 if scaled - cell >= 0.5 else cell - 1
        rep = reals.get(neighbour)
        if rep is not None and abs(rep - x) < eps:
            return rep
        reals[cell] = x
        return x

    def canonical(self, w: complex) -> complex:
        return complex(self.canonical_real(w.real), self.canonical_real(w.imag))

    def make_node(self, level: int, low: Edge, high: Edge, scale: float | None = None) -> Edge:
        """Return an edge to the canonical node for ``(level, low, high)``.

        ``scale`` is an upper bound on the magnitude of the paths that will
        reach the returned edge.  When given, an existing node with the same
        children whose weights differ by at most ``atol / (scale * |factor|)``
        is reused: the amplitudes then move by at most ``atol``.  Without it
        only ``eps``-equal weights are merged.
        """
        eps = self.eps
        lw = low.weight
        hw = high.weight
        low_zero = -eps < lw.real < eps and -eps < lw.imag < eps
        high_zero = -eps < hw.real < eps and -eps < hw.imag < eps
        if low_zero and high_zero:
            return ZERO_EDGE
        if level < 0:
            raise ConfigurationError(f"node level must be >= 0, got {level}")
        if (not low_zero and low.node.level != level - 1) or (
            not high_zero and high.node.level != level - 1
        ):
            raise ConfigurationError(
                f"children of a level-{level} node must sit at level {level - 1}"
            )
        if low_zero:
            factor = hw
            sl = 0j
            sh = 1 + 0j
        elif high_zero:
            factor = lw
            sl = 1 + 0j
            sh = 0j
        else:
            sl, sh, factor = normalize_pair(lw, hw, eps)
            sl = complex(self.canonical_real(sl.real), 0.0)
            sh = self.canonical(sh)
        low_node = TERMINAL if sl == 0 else low.node
        high_node = TERMINAL if sh == 0 else high.node
        key = (level, low_node.uid, sl, high_node.uid, sh)
        node = self._nodes.get(key)
        if node is not None:
            return Edge(factor, node)
        split = sl != 0 and sh != 0
        if split and scale is not None:
            size = scale * abs(factor)
            tol = min(self.atol / size, MAX_NODE_TOL) if size > 0 else MAX_NODE_TOL
            if tol > eps:
                node = self._near(level, low_node.uid, high_node.uid, sl, sh, tol)
                if node is not None:
                    return Edge(factor, node)
        node = Node(
            level,
            Edge(sl, low_node) if sl != 0 else ZERO_EDGE,
            Edge(sh, high_node) if sh != 0 else ZERO_EDGE,
            self._next_uid,
        )
        self._next_uid += 1
        self._nodes[key] = node
        if split:
            self._grid.setdefault(self._cell(node), []).append(node)
        return Edge(factor, node)

    @staticmethod
    def _cell(node: Node) -> tuple:
        # low weight is implied by the high weight, so cells index the latter
        sh = node.high.weight
        return (
            node.level,
            node.low.node.uid,
            node.high.node.uid,
            math.floor(sh.real / MAX_NODE_TOL),
            math.floor(sh.imag / MAX_NODE_TOL),
        )

    def _near(self, level: int, lo: int, hi: int, sl: complex, sh: complex, tol: float) -> Node | None:
        cx = math.floor(sh.real / MAX_NODE_TOL)
        cy = math.floor(sh.imag / MAX_NODE_TOL)
        best = None
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for cand in self._grid.get((level, lo, hi, cx + dx, cy + dy), ()):
                    if abs(cand.high.weight - sh) <= tol and abs(cand.low.weight - sl) <= tol:
                        if best is None or cand.uid < best.uid:
                            best = cand
        return best

    def nodes(self) -> Iterator[Node]:
        return iter(self._nodes.values())

    def collect(self, roots: Sequence[Edge]) -> int:
        """Mark from ``roots``, drop every other node, clear caches.

        Returns the number of nodes removed.
        """
        live: set[int] = set()
        stack = [e.node for e in roots]
        while stack:
            node = stack.pop()
            if node.level < 0 or node.uid in live:
                continue
            live.add(node.uid)
            stack.append(node.low.node)
            stack.append(node.high.node)
        before = len(self._nodes)
        self._nodes = {k: v for k, v in self._nodes.items() if v.uid in live}
        self._grid = {}
        for node in self._nodes.values():
            if node.low.weight != 0 and node.high.weight != 0:
                self._grid.setdefault(self._cell(node), []).append(node)
        self._reals = {}
        for node in self._nodes.values():
            for w in (node.low.weight, node.high.weight):
                for x in (w.real, w.imag):
                    if x != 0.0:
                        self._reals.setdefault(math.floor(x / self.eps), x)
        self.compute_cache.clear()
        self.collections += 1
        return before - len(self._nodes)

    def maybe_collect(self, roots: Sequence[Edge]) -> int:
        if len(self._nodes) > self.gc_threshold:
            return self.collect(roots)
        return 0


_DEFAULT_TABLE: UniqueTable | None = None


def default_table() -> UniqueTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = UniqueTable()
    return _DEFAULT_TABLE


class QuantumStateDD:
    """Root edge plus qubit count; immutable once built."""

    __slots__ = ("root", "num_qubits", "table")

    def __init__(self, root: Edge, num_qubits: int, table: UniqueTable | None = None):
        if num_qubits < 1:
            raise ConfigurationError("a state needs at least one qubit")
        if root.weight != 0 and root.node.level != num_qubits - 1:
            raise ConfigurationError(
                f"root node level {root.node.level} does not match {num_qubits} qubits"
            )
        self.root = root
        self.num_qubits = num_qubits
        self.table = table if table is not None else default_table()

    def __repr__(self) -> str:
        return (
            f"QuantumStateDD(n={self.num_qubits}, nodes={node_count(self)}, "
            f"root_weight={self.root.weight:.6g})"
        )

    def amplitude(self, index: int) -> complex:
        return get_amplitude(self, index)

    def to_dense(self, limit: int | None = None) -> np.ndarray:
        return to_dense(self, limit)

    def node_count(self) -> int:
        return node_count(self)


def basis_state(n: int, bits: str, table: UniqueTable | None = None) -> QuantumStateDD:
    """Computational basis state ``|bits>``; ``bits[0]`` is q_{n-1}."""
    if n < 1:
        raise ConfigurationError("n must be >= 1")
    if len(bits) != n or any(b not in "01" for b in bits):
        raise ConfigurationError(f"expected a bitstring of length {n}, got {bits!r}")
    table = table if table is not None else default_table()
    edge = ONE_EDGE
    for level, bit in enumerate(reversed(bits)):
        if bit == "0":
            edge = table.make_node(level, edge, ZERO_EDGE)
        else:
            edge = table.make_node(level, ZERO_EDGE, edge)
    return QuantumStateDD(edge, n, table)


def get_amplitude(state: QuantumStateDD, index: int) -> complex:
    n = state.num_qubits
    if not 0 <= index < (1 << n):
        raise ConfigurationError(f"index {index} out of range for {n} qubits")
    edge = state.root
    value = edge.weight
    for level in range(n - 1, -1, -1):
        if value == 0:
            return 0j
        node = edge.node
        edge = node.high if (index >> level) & 1 else node.low
        value *= edge.weight
    return value


def from_dense(vector, table: UniqueTable | None = None) -> QuantumStateDD:
    """Build the canonical diagram for an explicit amplitude vector."""
    table = table if table is not None else default_table()
    vec = np.asarray(vector, dtype=complex).ravel()
    size = vec.size
    if size < 2 or size & (size - 1):
        raise ConfigurationError(f"vector length {size} is not a power of two >= 2")
    if not np.all(np.isfinite(vec)):
        raise ConfigurationError("vector contains non-finite amplitudes")
    n = size.bit_length() - 1
    eps = table.eps
    edges = [
        ZERO_EDGE if _is_zero(v, eps) else Edge(complex(v), TERMINAL)
        for v in vec.tolist()
    ]
    for level in range(n):
        edges = [
            table.make_node(level, edges[i], edges[i + 1]) for i in range(0, len(edges), 2)
        ]
    (root,) = edges
    if root.weight == 0:
        raise ConfigurationError("cannot represent the all-zero vector")
    return QuantumStateDD(root, n, table)


def to_dense(state: QuantumStateDD, limit: int | None = None) -> np.ndarray:
    """Expand to a complex128 array, index 0 = |0...0>, msb = q_{n-1}."""
    n = state.num_qubits
    cap = dense_limit(limit)
    if n > cap:
        raise MemoryOutError(n, cap)
    cache: dict[int, np.ndarray] = {}

    def expand(node: Node) -> np.ndarray:
        if node.level < 0:
            return np.ones(1, dtype=complex)
        hit = cache.get(node.uid)
        if hit is not None:
            return hit
        half = 1 << node.level
        out = np.zeros(2 * half, dtype=complex)
        for offset, edge in ((0, node.low), (half, node.high)):
            if edge.weight != 0:
                out[offset : offset + half] = edge.weight * expand(edge.node)
        cache[node.uid] = out
        return out

    root = state.root
    if root.weight == 0:
        return np.zeros(1 << n, dtype=complex)
    return root.weight * expand(root.node)


def iter_nodes(state: QuantumStateDD) -> Iterator[Node]:
    """Distinct nonterminal nodes reachable from the root, parents first."""
    seen: set[int] = set()
    stack = [state.root.node] if state.root.weight != 0 else []
    while stack:
        node = stack.pop()
        if node.level < 0 or node.uid in seen:
            continue
        seen.add(node.uid)
        yield node
        if node.high.weight != 0:
            stack.append(node.high.node)
        if node.low.weight != 0:
            stack.append(node.low.node)


def node_count(state: QuantumStateDD) -> int:
    """Number of distinct nonterminal nodes (the terminal is not counted)."""
    return sum(1 for _ in iter_nodes(state))


def reach(state: QuantumStateDD) -> dict[int, float]:
    """Largest magnitude of any root path into each node, keyed by uid."""
    root = state.root
    if root.weight == 0:
        return {}
    out: dict[int, float] = {root.node.uid: abs(root.weight)}
    for node in sorted(iter_nodes(state), key=lambda node: -node.level):
        s = out[node.uid]
        for edge in (node.low, node.high):
            if edge.weight != 0:
                m = s * abs(edge.weight)
                if m > out.get(edge.node.uid, 0.0):
                    out[edge.node.uid] = m
    return out


def compact(state: QuantumStateDD, atol: float | None = None) -> QuantumStateDD:
    """Merge nodes that agree once their absolute contribution is accounted for.

    A node reached by paths of magnitude at most ``s`` can have its weights
    moved by ``atol / s`` while changing no amplitude by more than ``atol``.
    Nodes deep inside tiny-magnitude sub-vectors carry rounding noise that is
    large relative to their own unit norm; this pass folds them back onto the
    node they are numerically equal to.  ``atol`` defaults to the table atol.
    """
    table = state.table
    atol = table.atol if atol is None else atol
    root = state.root
    if root.weight == 0:
        return state
    nodes = list(iter_nodes(state))
    paths = reach(state)
    rebuilt: dict[int, Edge] = {0: ONE_EDGE}
    seen: dict[tuple, list[Node]] = {}
    # bottom-up; within a level the representative that noisier copies fold
    # onto is the node with the largest reach (coarse buckets), then the
    # oldest, which came from the shortest chain of arithmetic
    def order(node: Node):
        r = paths[node.uid]
        bucket = math.floor(math.log2(r) / 4) if r > 0 else -(10**9)
        return node.level, -bucket, node.uid

    nodes.sort(key=order)
    for node in nodes:
        tol = min(atol / paths[node.uid], MAX_NODE_TOL) if paths[node.uid] > 0 else MAX_NODE_TOL
        low, high = (
            ZERO_EDGE if e.weight == 0 else Edge(e.weight * rebuilt[e.node.uid].weight, rebuilt[e.node.uid].node)
            for e in (node.low, node.high)
        )
        try:
            sl, sh, factor = normalize_pair(low.weight, high.weight, table.eps)
        except ZeroNodeError:
            rebuilt[node.uid] = ZERO_EDGE
            continue
        key = (node.level, low.node.uid if sl != 0 else 0, high.node.uid if sh != 0 else 0)
        match = None
        for cand in seen.get(key, ()):
            if abs(cand.low.weight - sl) <= tol and abs(cand.high.weight - sh) <= tol:
                match = cand
                break
        if match is None:
            edge = table.make_node(node.level, low, high)
            match = edge.node
            factor = edge.weight
            seen.setdefault(key, []).append(match)
        rebuilt[node.uid] = Edge(factor, match)
    top = rebuilt[root.node.uid]
    return QuantumStateDD(Edge(root.weight * top.weight, top.node), state.num_qubits, table)
