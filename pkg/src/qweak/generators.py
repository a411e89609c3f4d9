"""Benchmark circuit generators: QFT, Grover, GHZ and seeded random circuits."""

from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit
from .errors import ConfigurationError


def generate_qft(n: int) -> Circuit:
    """QFT on n qubits, ending with the qubit-reversal swap layer."""
    if n < 1:
        raise ConfigurationError("qft needs n >= 1")
    c = Circuit(n, name=f"qft_{n}")
    for k in range(n - 1, -1, -1):
        c.add("h", k)
        for j in range(1, k + 1):
            c.add("p", k, [k - j], [math.pi / 2**j])
    for i in range(n // 2):
        c.swap(i, n - 1 - i)
    return c


def grover_iterations(n: int) -> int:
    return math.floor(math.pi / 4 * math.sqrt(2**n))


def generate_grover(n: int, seed: int = 0) -> Circuit:
    """Grover search over n qubits with a seeded random marked element.

    The ancilla is q_n.  ``metadata["marked"]`` holds the marked index and
    ``metadata["iterations"]`` the iteration count.
    """
    if not 1 <= n <= 30:
        raise ConfigurationError("grover needs 1 <= n <= 30")
    marked = int(np.random.default_rng(seed).integers(0, 2**n))
    search = list(range(n))
    anc = n
    c = Circuit(n + 1, name=f"grover_{n}")
    c.add("x", anc).add("h", anc)
    for q in search:
        c.add("h", q)
    flips = [q for q in search if not (marked >> q) & 1]
    iterations = grover_iterations(n)
    for _ in range(iterations):
        for q in flips:
            c.add("x", q)
        c.add("x", anc, search)
        for q in flips:
            c.add("x", q)
        for q in search:
            c.add("h", q)
        for q in search:
            c.add("x", q)
        c.add("z", n - 1, search[:-1])
        for q in search:
            c.add("x", q)
        for q in search:
            c.add("h", q)
    c.add("h", anc).add("x", anc)
    c.metadata.update(marked=marked, iterations=iterations)
    return c


def marked_bitstring(circuit: Circuit) -> str:
    """Expected measurement of a Grover circuit: ancilla 0, then the marked index."""
    n = circuit.num_qubits - 1
    return "0" + format(circuit.metadata["marked"], f"0{n}b")


def generate_ghz(n: int) -> Circuit:
    if n < 1:
        raise ConfigurationError("ghz needs n >= 1")
    c = Circuit(n, name=f"ghz_{n}")
    c.add("h", n - 1)
    for k in range(n - 1, 0, -1):
        c.add("x", k - 1, [k])
    return c


_ROTATIONS = ("rx", "ry", "rz")


def generate_random(n: int, depth: int, seed: int = 0) -> Circuit:
    """``depth`` layers of random rotations followed by CZ/CX on random disjoint pairs."""
    if n < 1 or depth < 0:
        raise ConfigurationError("random circuit needs n >= 1 and depth >= 0")
    rng = np.random.default_rng(seed)
    c = Circuit(n, name=f"random_{n}_{depth}_{seed}")
    for _ in range(depth):
        for q in range(n):
            gate = _ROTATIONS[int(rng.integers(3))]
            c.add(gate, q, params=[float(rng.uniform(0, 2 * math.pi))])
        order = rng.permutation(n).tolist()
        for a, b in zip(order[0::2], order[1::2]):
            c.add("z" if rng.integers(2) else "x", b, [a])
    return c


def from_spec(spec: str) -> Circuit:
    """Build a circuit from ``name:params`` (qft:16, ghz:8, grover:10:seed, random:8:20:seed)."""
    name, *args = spec.strip().split(":")
    try:
        nums = [int(a) for a in args]
    except ValueError as exc:
        raise ConfigurationError(f"bad generator spec {spec!r}: {exc}") from None
    name = name.lower()
    arity = {"qft": (1, 1), "ghz": (1, 1), "grover": (1, 2), "random": (2, 3)}
    if name not in arity:
        raise ConfigurationError(f"unknown generator {name!r}")
    lo, hi = arity[name]
    if not lo <= len(nums) <= hi:
        raise ConfigurationError(f"generator {name!r} takes {lo}..{hi} integer parameters")
    if name == "qft":
        return generate_qft(*nums)
    if name == "ghz":
        return generate_ghz(*nums)
    if name == "grover":
        return generate_grover(*nums)
    return generate_random(*nums)
