"""Process-pool helpers for the data-parallel sweeps.

Work is split into deterministic chunks and merged with order-independent
reductions, so results are identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Contiguous, non-empty subranges covering [lo, hi)."""
    n = hi - lo
    parts = max(1, min(parts, n))
    step, extra = divmod(n, parts)
    out = []
    start = lo
    for i in range(parts):
        end = start + step + (1 if i < extra else 0)
        out.append((start, end))
        start = end
    return out


def split_list(items: list, parts: int) -> list[list]:
    bounds = split_range(0, len(items), parts)
    return [items[a:b] for a, b in bounds]


def map_chunks(fn, args_list: list, workers: int) -> list:
    """Apply fn to each args tuple, in-process or across worker processes."""
    if workers <= 1 or len(args_list) <= 1:
        return [fn(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args_list))
