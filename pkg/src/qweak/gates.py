"""Single-qubit gates with positive controls, applied to dense or DD states."""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .ddcore import TERMINAL, ZERO_EDGE, Edge, QuantumStateDD, reach
from .errors import ConfigurationError

__all__ = [
    "BUILTIN_GATES",
    "GateMatrix",
    "GateOp",
    "apply_dd",
    "apply_dense",
    "apply_dense_inplace",
    "builtin_gate",
    "is_unitary",
]


class GateMatrix(NamedTuple):
    u00: complex
    u01: complex
    u10: complex
    u11: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.u00, self.u01], [self.u10, self.u11]], dtype=complex)


_SQ2 = 1 / math.sqrt(2)

_FIXED = {
    "i": GateMatrix(1, 0, 0, 1),
    "x": GateMatrix(0, 1, 1, 0),
    "y": GateMatrix(0, -1j, 1j, 0),
    "z": GateMatrix(1, 0, 0, -1),
    "h": GateMatrix(_SQ2, _SQ2, _SQ2, -_SQ2),
    "s": GateMatrix(1, 0, 0, 1j),
    "sdg": GateMatrix(1, 0, 0, -1j),
    "t": GateMatrix(1, 0, 0, cmath.exp(1j * math.pi / 4)),
    "tdg": GateMatrix(1, 0, 0, cmath.exp(-1j * math.pi / 4)),
}


def _rx(theta: float) -> GateMatrix:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return GateMatrix(c, -1j * s, -1j * s, c)


def _ry(theta: float) -> GateMatrix:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return GateMatrix(c, -s, s, c)


def _rz(theta: float) -> GateMatrix:
    return GateMatrix(cmath.exp(-0.5j * theta), 0, 0, cmath.exp(0.5j * theta))


def _p(theta: float) -> GateMatrix:
    return GateMatrix(1, 0, 0, cmath.exp(1j * theta))


_PARAMETRIC = {"rx": _rx, "ry": _ry, "rz": _rz, "p": _p}

BUILTIN_GATES = frozenset(_FIXED) | frozenset(_PARAMETRIC)


def builtin_gate(name: str, params: Iterable[float] = ()) -> GateMatrix:
    """Matrix of a named gate.  Rotations use the half-angle convention."""
    params = list(params)
    key = name.lower()
    if key in _FIXED:
        if params:
            raise ConfigurationError(f"gate {name!r} takes no parameters, got {len(params)}")
        return GateMatrix(*(complex(v) for v in _FIXED[key]))
    if key in _PARAMETRIC:
        if len(params) != 1:
            raise ConfigurationError(f"gate {name!r} takes one angle, got {len(params)}")
        return GateMatrix(*(complex(v) for v in _PARAMETRIC[key](float(params[0]))))
    raise ConfigurationError(f"unknown gate {name!r}")


def is_unitary(m: GateMatrix, tol: float = 1e-10) -> bool:
    u = m.as_array()
    return float(np.max(np.abs(u.conj().T @ u - np.eye(2)))) < tol


@dataclass(frozen=True)
class GateOp:
    matrix: GateMatrix
    target: int
    controls: frozenset[int] = field(default_factory=frozenset)
    name: str = ""
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "controls", frozenset(self.controls))
        if self.target in self.controls:
            raise ConfigurationError(f"target q{self.target} is also a control")
        if self.target < 0 or any(c < 0 for c in self.controls):
            raise ConfigurationError("qubit indices must be non-negative")

    @classmethod
    def named(cls, name: str, target: int, controls: Iterable[int] = (), params=()) -> GateOp:
        params = tuple(float(p) for p in params)
        return cls(builtin_gate(name, params), target, frozenset(controls), name.lower(), params)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*sorted(self.controls), self.target)

    def check(self, num_qubits: int) -> None:
        for q in self.qubits:
            if q >= num_qubits:
                raise ConfigurationError(f"qubit index {q} out of range for {num_qubits} qubits")


def apply_dense_inplace(psi: np.ndarray, op: GateOp) -> np.ndarray:
    """Apply ``op`` to a flat complex array in place and return it."""
    size = psi.size
    n = size.bit_length() - 1
    if size != 1 << n:
        raise ConfigurationError(f"state length {size} is not a power of two")
    op.check(n)
    view = psi.reshape((2,) * n)
    index: list = [slice(None)] * n
    for c in op.controls:
        index[n - 1 - c] = 1
    axis = n - 1 - op.target
    index[axis] = 0
    sel0 = tuple(index)
    index[axis] = 1
    sel1 = tuple(index)
    u00, u01, u10, u11 = op.matrix
    if u01 == 0 and u10 == 0:
        if u00 != 1:
            view[sel0] *= u00
        if u11 != 1:
            view[sel1] *= u11
        return psi
    a = view[sel0].copy()
    b = view[sel1]
    if u00 == 0 and u11 == 0:
        view[sel0] = u01 * b
        view[sel1] = u10 * a
    else:
        view[sel0] = u00 * a + u01 * b
        view[sel1] = u10 * a + u11 * b
    return psi


def apply_dense(state: np.ndarray, op: GateOp) -> np.ndarray:
    """Matrix-vector semantics of ``op`` on a copy of ``state``."""
    psi = np.array(state, dtype=complex, copy=True).ravel()
    return apply_dense_inplace(psi, op)


def apply_dd(state: QuantumStateDD, op: GateOp, *, use_cache: bool = True) -> QuantumStateDD:
    """Apply ``op`` to a decision-diagram state, returning a new state.

    Levels above the target are rebuilt top-down (controls above the target
    keep their 0-branch untouched).  At the target the (0-half, 1-half) pair
    of sub-diagrams is mixed by the gate matrix; controls below the target
    restrict the mixing to their 1-branches.  Both recursions are memoized
    per call; results are linear in the incoming weight, so caches key on
    nodes with the weight factored out.
    """
    n = state.num_qubits
    op.check(n)
    table = state.table
    make_node = table.make_node
    eps = table.eps
    t = op.target
    upper = frozenset(c for c in op.controls if c > t)
    lower = frozenset(c for c in op.controls if c < t)
    lowest_control = min(lower) if lower else t
    u00, u01, u10, u11 = op.matrix
    diagonal = u01 == 0 and u10 == 0
    antidiagonal = u00 == 0 and u11 == 0
    above_cache: dict[int, Edge] = {}
    pair_cache: dict[tuple, tuple[Edge, Edge]] = {}
    if use_cache:
        table.compute_cache = {"above": above_cache, "pair": pair_cache}

    def scale(edge: Edge, factor: complex) -> Edge:
        w = edge.weight * factor
        if w == 0:
            return ZERO_EDGE
        return Edge(w, edge.node)

    def combine(a: complex, xw: complex, b: complex, yw: complex, node) -> Edge:
        # a*xw + b*yw; cancellation down to rounding level of the terms is exact zero
        p = a * xw
        q = b * yw
        w = p + q
        if abs(w) <= eps * (abs(p) + abs(q)):
            return ZERO_EDGE
        return Edge(w, node)

    def children(edge: Edge) -> tuple[Edge, Edge]:
        if edge.weight == 0:
            return ZERO_EDGE, ZERO_EDGE
        node = edge.node
        return scale(node.low, edge.weight), scale(node.high, edge.weight)

    def mix(x: Edge, y: Edge, level: int, frame: float) -> tuple[Edge, Edge]:
        # x, y: the q_t = 0 / q_t = 1 halves, both rooted at `level`; `frame`
        # bounds the magnitude of the paths leading to them
        xw, yw = x.weight, y.weight
        if xw == 0 and yw == 0:
            return ZERO_EDGE, ZERO_EDGE
        if level < lowest_control:
            # no controls left below: closed forms where available
            if diagonal:
                return scale(x, u00), scale(y, u11)
            if antidiagonal:
                return scale(y, u01), scale(x, u10)
            if yw == 0:
                return scale(x, u00), scale(x, u10)
            if xw == 0:
                return scale(y, u01), scale(y, u11)
            if x.node is y.node:
                node = x.node
                return combine(u00, xw, u01, yw, node), combine(u10, xw, u11, yw, node)
        if level < 0:
            return combine(u00, xw, u01, yw, TERMINAL), combine(u10, xw, u11, yw, TERMINAL)
        if abs(xw) >= abs(yw):
            c = xw
            key = (x.node.uid, y.node.uid if yw != 0 else 0, yw / c, 0)
        else:
            c = yw
            key = (x.node.uid if xw != 0 else 0, y.node.uid, xw / c, 1)
        # results are reused across frames of the same binary order, so node
        # tolerances are set for the top of that range
        inner = math.ldexp(1.0, math.frexp(frame * abs(c))[1])
        key += (inner,)
        if use_cache:
            hit = pair_cache.get(key)
            if hit is not None:
                return scale(hit[0], c), scale(hit[1], c)
        xn = Edge(xw / c, x.node) if xw != 0 else ZERO_EDGE
        yn = Edge(yw / c, y.node) if yw != 0 else ZERO_EDGE
        xl, xh = children(xn)
        yl, yh = children(yn)
        if level in lower:
            rxh, ryh = mix(xh, yh, level - 1, inner)
            rxl, ryl = xl, yl
        else:
            rxl, ryl = mix(xl, yl, level - 1, inner)
            rxh, ryh = mix(xh, yh, level - 1, inner)
        result = (make_node(level, rxl, rxh, inner), make_node(level, ryl, ryh, inner))
        if use_cache:
            pair_cache[key] = result
        return scale(result[0], c), scale(result[1], c)

    def descend(edge: Edge, level: int) -> Edge:
        if edge.weight == 0:
            return ZERO_EDGE
        node = edge.node
        if use_cache:
            hit = above_cache.get(node.uid)
            if hit is not None:
                return scale(hit, edge.weight)
        frame = paths[node.uid]
        if level == t:
            rx, ry = mix(node.low, node.high, t - 1, frame)
            result = make_node(t, rx, ry, frame)
        elif level in upper:
            result = make_node(level, node.low, descend(node.high, level - 1), frame)
        else:
            result = make_node(level, descend(node.low, level - 1), descend(node.high, level - 1), frame)
        if use_cache:
            above_cache[node.uid] = result
        return scale(result, edge.weight)

    paths = reach(state)
    root = descend(state.root, n - 1)
    return QuantumStateDD(root, n, table)


ONE = Edge(1 + 0j, TERMINAL)
