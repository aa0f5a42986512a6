"""Optional process pool, capped by the CONEBETA_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def worker_count() -> int:
    """Workers allowed by CONEBETA_THREADS (default 1, i.e. serial)."""
    raw = os.environ.get("CONEBETA_THREADS", "1").strip()
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CONEBETA_THREADS must be an integer, got {raw!r}") from None
    return max(1, min(n, os.cpu_count() or 1))


def ordered_map(fn, items, workers: int = 1, initializer=None, initargs=()) -> list:
    """fn over items, results in input order; serial when workers <= 1."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        if initializer is not None:
            initializer(*initargs)
        return [fn(it) for it in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers, initializer=initializer, initargs=initargs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
