"""Weak simulation of quantum circuits: measurement sampling from dense
vectors and from edge-weighted decision diagrams."""

from .circuit import Circuit, run
from .ddcore import (
    TERMINAL,
    ZERO_EDGE,
    Edge,
    Node,
    QuantumStateDD,
    UniqueTable,
    basis_state,
    compact,
    from_dense,
    get_amplitude,
    node_count,
    to_dense,
)
from .ddsampler import (
    annotate,
    downstream,
    edge_mass,
    exact_distribution,
    qubit_marginal,
    sample_many,
    sample_one,
    state_probability,
    upstream,
)
from .densesim import (
    DenseState,
    prefix_sum,
    sample_bitstrings,
    sample_index,
    sample_index_linear,
)
from .errors import (
    ConfigurationError,
    DegenerateDistributionError,
    DistributionError,
    MemoryOutError,
    QweakError,
    ZeroNodeError,
)
from .gates import GateMatrix, GateOp, apply_dd, apply_dense, builtin_gate
from .generators import from_spec, generate_ghz, generate_grover, generate_qft, generate_random
from .stats import Histogram, chi_squared, tvd

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "ConfigurationError",
    "DegenerateDistributionError",
    "DenseState",
    "DistributionError",
    "Edge",
    "GateMatrix",
    "GateOp",
    "Histogram",
    "MemoryOutError",
    "Node",
    "QuantumStateDD",
    "QweakError",
    "TERMINAL",
    "UniqueTable",
    "ZERO_EDGE",
    "ZeroNodeError",
    "annotate",
    "apply_dd",
    "apply_dense",
    "basis_state",
    "builtin_gate",
    "chi_squared",
    "compact",
    "downstream",
    "edge_mass",
    "exact_distribution",
    "from_dense",
    "from_spec",
    "generate_ghz",
    "generate_grover",
    "generate_qft",
    "generate_random",
    "get_amplitude",
    "node_count",
    "prefix_sum",
    "qubit_marginal",
    "run",
    "sample_bitstrings",
    "sample_index",
    "sample_index_linear",
    "sample_many",
    "sample_one",
    "state_probability",
    "to_dense",
    "tvd",
    "upstream",
]
