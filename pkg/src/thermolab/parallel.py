"""Deterministic fan-out over realization indices.

Work is split into contiguous blocks (a static partition), results are
reassembled in index order, and reductions use compensated summation, so
outputs do not depend on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def static_partition(n: int, workers: int) -> list[range]:
    """Split range(n) into at most ``workers`` contiguous, near-equal blocks."""
    workers = max(1, min(int(workers), n)) if n else 1
    base, extra = divmod(n, workers)
    out, start = [], 0
    for w in range(workers):
        size = base + (w < extra)
        out.append(range(start, start + size))
        start += size
    return [r for r in out if len(r)]


def _run_block(func, items):
    return [func(x) for x in items]


def map_ordered(func: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Apply ``func`` to every item, returning results in input order.

    ``func`` must be picklable when ``workers > 1``.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    blocks = static_partition(len(items), workers)
    with ProcessPoolExecutor(max_workers=len(blocks)) as pool:
        futs = [pool.submit(_run_block, func, [items[i] for i in b]) for b in blocks]
        out: list[R] = []
        for f in futs:
            out.extend(f.result())
    return out


def fsum_axis0(stack: np.ndarray) -> np.ndarray:
    """Compensated sum over the first axis, elementwise."""
    stack = np.asarray(stack, dtype=float)
    flat = stack.reshape(stack.shape[0], -1)
    out = np.array([math.fsum(flat[:, i]) for i in range(flat.shape[1])])
    return out.reshape(stack.shape[1:])


def mean_stderr(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and standard error (sample std / sqrt(n)) over the first axis."""
    stack = np.asarray(stack, dtype=float)
    n = stack.shape[0]
    mean = fsum_axis0(stack) / n
    if n < 2:
        return mean, np.zeros_like(mean)
    var = fsum_axis0((stack - mean) ** 2) / (n - 1)
    return mean, np.sqrt(var / n)
