"""Circuit IR and the strong-simulation driver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .config import dense_limit
from .ddcore import QuantumStateDD, UniqueTable, basis_state, compact, default_table
from .densesim import DenseState
from .errors import ConfigurationError, MemoryOutError
from .gates import GateOp, apply_dd, apply_dense_inplace

Backend = Literal["dd", "dense", "vector"]


@dataclass
class Circuit:
    num_qubits: int
    ops: list[GateOp] = field(default_factory=list)
    name: str = "circuit"
    measured: list[tuple[int, int]] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ConfigurationError("a circuit needs at least one qubit")
        for op in self.ops:
            op.check(self.num_qubits)

    def __len__(self) -> int:
        return len(self.ops)

    def add(self, name: str, target: int, controls=(), params=()) -> Circuit:
        op = GateOp.named(name, target, controls, params)
        op.check(self.num_qubits)
        self.ops.append(op)
        return self

    def swap(self, a: int, b: int) -> Circuit:
        # lowered to three CNOTs
        return self.add("x", b, [a]).add("x", a, [b]).add("x", b, [a])


def run(
    circuit: Circuit,
    backend: Backend = "dd",
    *,
    limit: int | None = None,
    table: UniqueTable | None = None,
    tidy: bool = True,
) -> DenseState | QuantumStateDD:
    """Apply every op, in order, to |0...0> on the chosen backend.

    On the DD backend ``tidy`` runs a final :func:`~qweak.ddcore.compact`
    pass, folding rounding-noise duplicates left by the last gates (each
    amplitude moves by at most the table's ``atol``).
    """
    n = circuit.num_qubits
    if backend in ("dense", "vector"):
        cap = dense_limit(limit)
        if n > cap:
            raise MemoryOutError(n, cap)
        psi = np.zeros(1 << n, dtype=complex)
        psi[0] = 1.0
        for op in circuit.ops:
            apply_dense_inplace(psi, op)
        return DenseState(psi, n)
    if backend != "dd":
        raise ConfigurationError(f"unknown backend {backend!r}")
    table = table if table is not None else default_table()
    state = basis_state(n, "0" * n, table)
    for op in circuit.ops:
        state = apply_dd(state, op)
        table.maybe_collect([state.root])
    table.compute_cache.clear()
    return compact(state) if tidy else state
