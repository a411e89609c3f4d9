"""Seeded, splittable random streams for sampling.

Every (seed, worker) pair gets its own PCG64 stream derived through
``SeedSequence.spawn``, so results depend only on the seed and the worker
count, never on scheduling.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

T = TypeVar("T")


def split_shots(shots: int, workers: int) -> list[int]:
    workers = max(1, min(workers, shots))
    base, extra = divmod(shots, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def spawn_generators(seed: int, shots: int, workers: int = 1) -> list[tuple[np.random.Generator, int]]:
    """One (generator, shot count) pair per worker."""
    counts = split_shots(shots, workers)
    children = np.random.SeedSequence(seed).spawn(len(counts))
    return [(np.random.Generator(np.random.PCG64(ss)), c) for ss, c in zip(children, counts)]


def run_streams(
    fn: Callable[[np.random.Generator, int], T],
    seed: int,
    shots: int,
    workers: int = 1,
) -> list[T]:
    """Call ``fn(rng, count)`` for each stream; results in stream order."""
    streams = spawn_generators(seed, shots, workers)
    if len(streams) == 1:
        rng, count = streams[0]
        return [fn(rng, count)]
    with ThreadPoolExecutor(max_workers=len(streams)) as pool:
        return list(pool.map(lambda s: fn(*s), streams))


def merge_counts(parts: Iterable[dict[str, int]]) -> dict[str, int]:
    total: dict[str, int] = {}
    for part in parts:
        for key, value in part.items():
            total[key] = total.get(key, 0) + value
    return dict(sorted(total.items()))
