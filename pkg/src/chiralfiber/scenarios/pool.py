"""Ordered parallel map over sweep rows."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def default_workers() -> int:
    env = os.environ.get("CHIRALFIBER_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def ordered_map(fn, items, workers=None) -> list:
    """``[fn(x) for x in items]``, possibly in worker processes.

    Results always come back in input order.
    """
    items = list(items)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as ex:
        return list(ex.map(fn, items))
