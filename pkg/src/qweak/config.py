import os

#: Tolerance for complex weight comparison and unique-table bucketing.
DEFAULT_EPS = 1e-13

#: Absolute amplitude tolerance for merging nodes of small-magnitude sub-vectors.
DEFAULT_ATOL = 1e-13

#: Upper bound on the per-node weight tolerance that ``DEFAULT_ATOL`` can induce.
MAX_NODE_TOL = 1e-6

#: 26 qubits = 1 GiB of complex128 amplitudes.
DEFAULT_DENSE_LIMIT = 26

DENSE_LIMIT_ENV = "QWEAK_DENSE_LIMIT"


def dense_limit(override: int | None = None) -> int:
    """Resolve the dense qubit cap: explicit value, then env var, then default."""
    if override is not None:
        return int(override)
    env = os.environ.get(DENSE_LIMIT_ENV)
    if env:
        return int(env)
    return DEFAULT_DENSE_LIMIT
