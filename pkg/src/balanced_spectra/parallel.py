"""Deterministic task fan-out.

Results never depend on the worker count: every task carries its own derived
seed and the reduction happens in submission order.  If a process pool cannot
be created (restricted sandboxes), the map silently runs serially.
"""

from __future__ import annotations

import os
import pickle
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool

from .errors import InvalidArgumentError

ENV_THREADS = "BALANCED_SPECTRA_THREADS"


def resolve_workers(threads: int | None = None) -> int:
    """Explicit count, else the BALANCED_SPECTRA_THREADS env var, else all cores."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise InvalidArgumentError(f"{ENV_THREADS}={env!r} is not an integer") from exc
    return os.cpu_count() or 1


def parallel_map(fn, items, workers: int | None = None) -> list:
    """Order-preserving map over ``items`` using up to ``workers`` processes.

    Falls back to a serial loop when the callable cannot cross a process
    boundary or the sandbox refuses to fork; exceptions raised by ``fn``
    itself always propagate.
    """
    items = list(items)
    count = resolve_workers(workers)
    if count <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    try:
        pickle.dumps(fn)
    except (pickle.PicklingError, AttributeError, TypeError):
        return [fn(item) for item in items]
    try:
        with ProcessPoolExecutor(max_workers=min(count, len(items))) as pool:
            chunk = max(1, len(items) // (4 * count))
            return list(pool.map(fn, items, chunksize=chunk))
    except (OSError, BrokenProcessPool):
        return [fn(item) for item in items]
