import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import S, dense_run
from qweak.circuit import Circuit
from qweak.ddcore import UniqueTable, basis_state, from_dense, iter_nodes
from qweak.errors import ConfigurationError
from qweak.gates import BUILTIN_GATES, GateOp, apply_dd, apply_dense, builtin_gate, is_unitary
from qweak.generators import generate_random

SQ3 = math.sqrt(3)


def test_h_matrix():
    assert np.allclose(builtin_gate("h").as_array(), np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def test_x_matrix():
    assert np.array_equal(builtin_gate("x").as_array(), [[0, 1], [1, 0]])


def test_rx_two_thirds_pi():
    expected = np.array([[0.5, -0.5j * SQ3], [-0.5j * SQ3, 0.5]])
    m = builtin_gate("rx", [2 * math.pi / 3])
    assert np.allclose(m.as_array(), expected, atol=1e-15)
    assert is_unitary(m)
    # magnitudes seen in the running example: 1/2 and sqrt(3)/2 scaled by 1/sqrt(2)
    assert abs(m.u01) * S == pytest.approx(0.612372, abs=1e-6)
    assert abs(m.u00) * S == pytest.approx(0.353553, abs=1e-6)


def test_phase_and_rotation_conventions():
    theta = 0.7
    assert np.allclose(builtin_gate("p", [theta]).as_array(), np.diag([1, np.exp(1j * theta)]))
    rz = builtin_gate("rz", [theta]).as_array()
    assert np.allclose(rz, np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)]))
    ry = builtin_gate("ry", [theta]).as_array()
    assert np.allclose(ry, [[math.cos(theta / 2), -math.sin(theta / 2)], [math.sin(theta / 2), math.cos(theta / 2)]])


@pytest.mark.parametrize("name", sorted(BUILTIN_GATES))
def test_builtins_unitary(name):
    params = [1.234] if name in ("rx", "ry", "rz", "p") else []
    u = builtin_gate(name, params).as_array()
    assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-10


def test_builtin_errors():
    with pytest.raises(ConfigurationError, match="unknown"):
        builtin_gate("foo")
    with pytest.raises(ConfigurationError):
        builtin_gate("rx")
    with pytest.raises(ConfigurationError):
        builtin_gate("h", [1.0])


def test_gateop_validation():
    with pytest.raises(ConfigurationError):
        GateOp.named("x", 1, [1])
    with pytest.raises(ConfigurationError):
        GateOp.named("x", -1)
    with pytest.raises(ConfigurationError, match="out of range"):
        apply_dense(np.array([1, 0], dtype=complex), GateOp.named("x", 1))


# dense application


def test_dense_bell():
    psi = np.array([1, 0, 0, 0], dtype=complex)
    psi = apply_dense(psi, GateOp.named("h", 1))
    psi = apply_dense(psi, GateOp.named("x", 0, [1]))
    assert np.allclose(psi, [S, 0, 0, S], atol=1e-15)


def test_dense_x():
    assert np.array_equal(apply_dense(np.array([1, 0]), GateOp.named("x", 0)), [0, 1])


def test_dense_leaves_input_untouched():
    psi = np.array([1, 0], dtype=complex)
    apply_dense(psi, GateOp.named("h", 0))
    assert np.array_equal(psi, [1, 0])


def random_op(rng, n: int) -> GateOp:
    name = str(rng.choice(sorted(BUILTIN_GATES)))
    params = [float(rng.uniform(0, 2 * math.pi))] if name in ("rx", "ry", "rz", "p") else []
    qubits = rng.permutation(n)
    ncontrols = int(rng.integers(0, min(3, n)))
    return GateOp.named(name, int(qubits[0]), [int(q) for q in qubits[1 : 1 + ncontrols]], params)


def random_circuit(seed: int, n: int, depth: int) -> Circuit:
    rng = np.random.default_rng(seed)
    c = Circuit(n, name=f"rand_ctrl_{seed}")
    c.ops.extend(random_op(rng, n) for _ in range(depth))
    return c


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_dense_matches_kronecker_oracle(n, seed):
    c = random_circuit(seed, n, 12)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1
    for op in c.ops:
        before = np.linalg.norm(psi)
        psi = apply_dense(psi, op)
        assert np.linalg.norm(psi) == pytest.approx(before, abs=1e-12)
    assert np.allclose(psi, dense_run(c), atol=1e-12)


# DD application


def test_dd_bell():
    s = basis_state(2, "00", UniqueTable())
    s = apply_dd(s, GateOp.named("h", 1))
    s = apply_dd(s, GateOp.named("x", 0, [1]))
    assert np.allclose(s.to_dense(), [S, 0, 0, S], atol=1e-15)


def test_dd_x_single_qubit():
    table = UniqueTable()
    s = apply_dd(basis_state(1, "0", table), GateOp.named("x", 0))
    assert s.root == basis_state(1, "1", table).root


def test_dd_rejects_out_of_range():
    with pytest.raises(ConfigurationError):
        apply_dd(basis_state(2, "00"), GateOp.named("h", 2))


def test_dd_random_8q_depth_20():
    c = generate_random(8, 20, seed=11)
    table = UniqueTable()
    s = basis_state(8, "0" * 8, table)
    psi = np.zeros(256, dtype=complex)
    psi[0] = 1
    for op in c.ops:
        s = apply_dd(s, op)
        psi = apply_dense(psi, op)
    assert np.max(np.abs(s.to_dense() - psi)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 30), st.integers(0, 2**32 - 1))
def test_backend_equivalence(n, depth, seed):
    c = random_circuit(seed, n, depth)
    table = UniqueTable()
    s = basis_state(n, "0" * n, table)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1
    for op in c.ops:
        s = apply_dd(s, op)
        psi = apply_dense(psi, op)
        assert abs(s.root.weight) == pytest.approx(1, abs=1e-9)
    assert np.max(np.abs(s.to_dense() - psi)) < 1e-10
    for node in iter_nodes(s):
        assert abs(node.low.weight) ** 2 + abs(node.high.weight) ** 2 == pytest.approx(1, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_cache_soundness(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    v /= np.linalg.norm(v)
    for _ in range(5):
        op = random_op(rng, n)
        a = apply_dd(from_dense(v, UniqueTable()), op, use_cache=True)
        b = apply_dd(from_dense(v, UniqueTable()), op, use_cache=False)
        assert np.max(np.abs(a.to_dense() - b.to_dense())) < 1e-12
        assert a.node_count() == b.node_count()
        v = a.to_dense()


def test_dd_on_arbitrary_state_matches_dense(rng):
    v = rng.normal(size=32) + 1j * rng.normal(size=32)
    v /= np.linalg.norm(v)
    for op in (GateOp.named("h", 4, [0, 2]), GateOp.named("ry", 0, [3], [0.4]), GateOp.named("y", 2)):
        s = apply_dd(from_dense(v, UniqueTable()), op)
        assert np.max(np.abs(s.to_dense() - apply_dense(v, op))) < 1e-12
