"""Replicate-level parallelism.

Work items carry their own substream keys, so results are identical for any
worker count; SEVFDR_THREADS caps the pool (unset/1 = sequential, 0 = one per
CPU).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("SEVFDR_THREADS", "1").strip()
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"SEVFDR_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ValueError("SEVFDR_THREADS must be >= 0")
    return os.cpu_count() or 1 if n == 0 else n


def parallel_map(fn, items) -> list:
    """Ordered map over items, fanned out across processes when allowed."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
