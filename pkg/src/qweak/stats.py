"""Goodness-of-fit checks for sampled histograms.

Distributions are either numpy arrays indexed by basis-state integer or
mappings from bitstring to probability.  Histograms map bitstrings to counts.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .errors import DegenerateDistributionError, DistributionError

__all__ = [
    "POOL_THRESHOLD",
    "SIGNIFICANCE",
    "Histogram",
    "chi2_threshold",
    "chi_squared",
    "chi_squared_passes",
    "empirical",
    "tvd",
]

NORM_TOL = 1e-6
POOL_THRESHOLD = 5.0
SIGNIFICANCE = 0.001


@dataclass(frozen=True)
class Histogram:
    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        if self.shots < 1:
            raise DistributionError("a histogram needs at least one shot")
        if sum(self.counts.values()) != self.shots:
            raise DistributionError(
                f"counts sum to {sum(self.counts.values())}, expected {self.shots} shots"
            )
        if any(c < 0 for c in self.counts.values()):
            raise DistributionError("negative count")
        widths = {len(k) for k in self.counts}
        if len(widths) > 1:
            raise DistributionError(f"bitstrings of mixed length: {sorted(widths)}")

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> Histogram:
        clean = {k: int(v) for k, v in counts.items()}
        return cls(clean, sum(clean.values()))

    @property
    def num_qubits(self) -> int | None:
        return len(next(iter(self.counts))) if self.counts else None


def _as_histogram(hist) -> Histogram:
    return hist if isinstance(hist, Histogram) else Histogram.from_counts(hist)


def _check_normalized(p: np.ndarray, label: str) -> None:
    if np.any(p < -NORM_TOL):
        raise DistributionError(f"{label} has negative entries")
    total = float(p.sum())
    if abs(total - 1.0) > NORM_TOL:
        raise DistributionError(f"{label} sums to {total!r}, not 1 within {NORM_TOL}")


def _keyed(dist, width: int | None) -> dict[str, float]:
    if isinstance(dist, Mapping):
        return {k: float(v) for k, v in dist.items()}
    arr = np.asarray(dist, dtype=float)
    if width is None:
        width = max(int(arr.size - 1).bit_length(), 1)
    return {format(i, f"0{width}b"): float(v) for i, v in enumerate(arr) if v != 0.0}


def empirical(hist) -> dict[str, float]:
    """Relative frequencies of a histogram."""
    h = _as_histogram(hist)
    return {k: c / h.shots for k, c in h.counts.items()}


def tvd(p, q) -> float:
    """Total variation distance ``(1/2) sum |p_i - q_i|``.

    Arrays must have equal length; mappings are aligned on their key union,
    with missing keys read as zero.
    """
    if isinstance(p, Mapping) or isinstance(q, Mapping):
        if not (isinstance(p, Mapping) and isinstance(q, Mapping)):
            raise DistributionError("cannot compare a mapping with an array; convert one first")
        keys = sorted(set(p) | set(q))
        a = np.array([float(p.get(k, 0.0)) for k in keys])
        b = np.array([float(q.get(k, 0.0)) for k in keys])
    else:
        a = np.asarray(p, dtype=float)
        b = np.asarray(q, dtype=float)
        if a.shape != b.shape:
            raise DistributionError(f"index sets differ: {a.shape} vs {b.shape}")
    _check_normalized(a, "p")
    _check_normalized(b, "q")
    return float(min(max(0.5 * np.abs(a - b).sum(), 0.0), 1.0))


def chi_squared(hist, exact) -> tuple[float, int]:
    """Pearson statistic of ``hist`` against ``exact``, with small-bin pooling.

    Bins whose expected count is below 5 (including outcomes absent from
    ``exact``) are merged into a single pooled bin.  The pooled bin takes part
    only when its expected count is positive.  Raises
    :class:`DegenerateDistributionError` if fewer than two bins remain.
    """
    h = _as_histogram(hist)
    probs = _keyed(exact, h.num_qubits)
    _check_normalized(np.array(list(probs.values()) or [0.0]), "exact")
    shots = h.shots
    statistic = 0.0
    bins = 0
    pooled_obs = 0.0
    pooled_exp = 0.0
    for key in set(probs) | set(h.counts):
        expected = probs.get(key, 0.0) * shots
        observed = h.counts.get(key, 0)
        if expected >= POOL_THRESHOLD:
            statistic += (observed - expected) ** 2 / expected
            bins += 1
        else:
            pooled_obs += observed
            pooled_exp += expected
    if pooled_exp > 0.0:
        statistic += (pooled_obs - pooled_exp) ** 2 / pooled_exp
        bins += 1
    elif pooled_obs > 0:
        # mass observed where none is expected
        statistic = float("inf")
    if bins < 2:
        raise DegenerateDistributionError(f"only {bins} bin(s) after pooling; the outcome is deterministic")
    return float(statistic), bins - 1


def chi2_threshold(dof: int, significance: float = SIGNIFICANCE) -> float:
    """Upper ``1 - significance`` percentile of chi-squared with ``dof`` degrees of freedom."""
    return float(chi2.ppf(1.0 - significance, dof))


def chi_squared_passes(hist, exact, significance: float = SIGNIFICANCE) -> bool:
    """True when ``hist`` is consistent with ``exact``; deterministic outcomes pass vacuously."""
    try:
        statistic, dof = chi_squared(hist, exact)
    except DegenerateDistributionError:
        h = _as_histogram(hist)
        probs = _keyed(exact, h.num_qubits)
        return all(probs.get(k, 0.0) * h.shots >= POOL_THRESHOLD or c == 0 for k, c in h.counts.items())
    return statistic <= chi2_threshold(dof, significance)
