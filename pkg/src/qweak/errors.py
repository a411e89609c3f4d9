"""Exception types shared across the package."""


class QweakError(Exception):
    """Base class for all errors raised by qweak."""


class ConfigurationError(QweakError, ValueError):
    """Invalid structural argument (bad level, qubit index, length...)."""


class ZeroNodeError(QweakError, ValueError):
    """Both outgoing weights of a would-be node are zero."""


class MemoryOutError(QweakError, MemoryError):
    """Dense representation would exceed the configured qubit limit."""

    def __init__(self, num_qubits: int, limit: int):
        self.num_qubits = num_qubits
        self.limit = limit
        nbytes = 16 * (1 << num_qubits)
        super().__init__(
            f"memory out: dense state of {num_qubits} qubits needs {nbytes} bytes "
            f"(2^{num_qubits} amplitudes); dense limit is {limit} qubits"
        )


class DistributionError(QweakError, ValueError):
    """A probability vector is negative or does not sum to one."""


class DegenerateDistributionError(QweakError, ValueError):
    """Fewer than two bins remain after pooling; nothing to test."""
