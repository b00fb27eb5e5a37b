"""Deterministic sharding of integer ranges over a thread pool.

Compiled kernels release the GIL, so threads give real speedups for the
big scans.  Results always come back in shard order, so the merged output
does not depend on the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

from .errors import InvalidInputError

T = TypeVar("T")


def default_threads() -> int:
    env = os.environ.get("SQUARELAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise InvalidInputError(f"SQUARELAB_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise InvalidInputError("SQUARELAB_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def split_range(lo: int, hi: int, parts: int, balance: str = "linear") -> list[tuple[int, int]]:
    """Split ``[lo, hi]`` into at most ``parts`` contiguous inclusive pieces.

    ``balance="quadratic"`` sizes pieces for work growing like ``x**2``
    (e.g. per-modulus scans whose cost is proportional to the modulus).
    """
    if hi < lo:
        return []
    parts = max(1, min(parts, hi - lo + 1))
    if balance == "linear":
        cuts = [lo + (hi - lo + 1) * i // parts for i in range(parts + 1)]
    elif balance == "quadratic":
        cuts = [lo + round((hi - lo + 1) * (i / parts) ** 0.5) for i in range(parts + 1)]
    else:
        raise InvalidInputError(f"unknown balance {balance!r}")
    cuts[-1] = hi + 1
    return [(a, b - 1) for a, b in zip(cuts, cuts[1:]) if b > a]


def map_shards(fn: Callable[[int, int], T], shards: list[tuple[int, int]], threads: int | None = None) -> list[T]:
    threads = threads or default_threads()
    if threads < 1:
        raise InvalidInputError("threads must be >= 1")
    if threads == 1 or len(shards) <= 1:
        return [fn(a, b) for a, b in shards]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda s: fn(*s), shards))
