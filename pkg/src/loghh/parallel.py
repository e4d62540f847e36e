"""Ordered parallel map for independent slices (degree slices, total degrees)."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

_THREADS = 1


def set_threads(n):
    global _THREADS
    _THREADS = max(1, int(n))


def get_threads():
    return _THREADS


def ordered_map(fn, items):
    """``[fn(x) for x in items]``, possibly on worker threads; results keep input order."""
    items = list(items)
    if _THREADS <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=_THREADS) as ex:
        return list(ex.map(fn, items))
