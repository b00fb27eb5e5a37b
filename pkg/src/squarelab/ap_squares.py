"""Squares in arithmetic progressions a + ib."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import is_square
from .errors import InvalidInputError


@dataclass(frozen=True)
class ApSquareReport:
    a: int
    b: int
    k: int
    hit_indices: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.hit_indices)

    def values(self) -> list[int]:
        return [self.a + i * self.b for i in self.hit_indices]


def _positive(**kw):
    for name, v in kw.items():
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise InvalidInputError(f"{name} must be a positive integer, got {v!r}")


def squares_in_ap(a: int, b: int, k: int) -> ApSquareReport:
    """Indices ``1 <= i <= k`` with ``a + ib`` a perfect square."""
    _positive(a=a, b=b, k=k)
    if a + k * b < kernels.INT64_SAFE:
        hits = tuple(int(i) for i in kernels.square_hits(a, b, k))
    else:
        hits = tuple(i for i in range(1, k + 1) if is_square(a + i * b) is not None)
    return ApSquareReport(int(a), int(b), int(k), hits)


def sigma_lower_search(k: int, a_max: int, b_max: int) -> ApSquareReport:
    """Most squares among ``a+b, ..., a+kb`` over the box ``a <= a_max, b <= b_max``.

    Only a lower bound for the true maximum; ties go to the smallest ``(b, a)``.
    """
    _positive(k=k, a_max=a_max, b_max=b_max)
    if a_max + k * b_max >= kernels.INT64_SAFE:
        raise InvalidInputError("search box too large for int64 kernels")
    _, a, b = kernels.sigma_box(k, a_max, b_max)
    return squares_in_ap(a, b, k)


def square_ap3(limit: int) -> list[tuple[int, int, int]]:
    """All ``(x, y, z)`` with ``0 <= x < y < z``, ``x^2 + z^2 = 2y^2`` and ``z^2 <= limit``."""
    if limit < 1:
        raise InvalidInputError("limit must be >= 1")
    out = []
    for y in range(1, math.isqrt(limit) + 1):
        # z^2 = 2y^2 - x^2 <= limit  =>  x^2 >= 2y^2 - limit
        lo = math.isqrt(max(2 * y * y - limit - 1, 0))
        x = np.arange(lo, y, dtype=np.int64)
        z2 = 2 * y * y - x * x
        x = x[(z2 <= limit) & kernels.numpy_backend.square_mask(z2)]
        for xv in x.tolist():
            out.append((xv, y, math.isqrt(2 * y * y - xv * xv)))
    out.sort(key=lambda t: (t[2] ** 2 - t[1] ** 2, t[0]))
    return out


def fermat_four_term_check(limit: int) -> list[tuple[int, int, int, int]]:
    """Every 4-term progression of squares ``x1^2 < ... < x4^2 <= limit``.

    Walks the inner pair ``(x2, x3)``; the outer terms are then forced.
    The result is expected to be empty.
    """
    if limit < 16:
        raise InvalidInputError(f"limit must be >= 16, got {limit}")
    found = []
    mask = kernels.numpy_backend.square_mask
    for x3 in range(2, math.isqrt(limit) + 1):
        x2 = np.arange(1, x3, dtype=np.int64)
        d = x3 * x3 - x2 * x2
        top = x3 * x3 + d
        ok = (top <= limit) & (x2 * x2 - d >= 0)
        x2, d, top = x2[ok], d[ok], top[ok]
        hit = mask(x2 * x2 - d) & mask(top)
        for v, dd in zip(x2[hit].tolist(), d[hit].tolist()):
            found.append((math.isqrt(v * v - dd), v, x3, math.isqrt(x3 * x3 + dd)))
    return sorted(found)


def benchmark_progression(k: int) -> tuple[int, float, float]:
    """``(count, sqrt(8k/3), count - sqrt(8k/3))`` for the progression 49 + 24i."""
    if k < 8:
        raise InvalidInputError(f"k must be >= 8, got {k}")
    count = squares_in_ap(49, 24, k).count
    model = math.sqrt(8 * k / 3)
    return count, model, count - model
