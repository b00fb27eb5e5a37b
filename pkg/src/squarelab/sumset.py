"""Representation counts r_{E+E}, r_{E-E}, their moments, and related statistics."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from . import kernels
from .errors import InvalidInputError

Sign = Literal["sum", "difference"]

# Above this many ordered pairs the profile is accumulated in chunks by the kernel.
_KERNEL_MIN_PAIRS = 256


@dataclass(frozen=True)
class RepProfile:
    """Multiplicities of ``a + b`` (or ``a - b``) over pairs from a ground set.

    ``counts`` is keyed in ascending order.  ``ordered`` is False only for
    the unordered-with-repetition convention used by the B2[g] code.
    """

    sign: Sign
    counts: dict[int, int]
    ground_set_size: int
    ordered: bool = True

    def __getitem__(self, n: int) -> int:
        return self.counts.get(n, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def max_count(self) -> int:
        return max(self.counts.values())


@dataclass(frozen=True)
class AffineCube:
    b0: int
    generators: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def vertices(self) -> list[int]:
        out = [self.b0]
        for g in self.generators:
            out += [v + g for v in out]
        return out


@dataclass(frozen=True)
class GridStats:
    sum_count: int
    diff_count: int
    prod_count: int
    pair_count: int


def _as_sorted_distinct(E: Iterable[int]) -> list[int]:
    items = list(E)
    out = sorted(set(items))
    if len(out) != len(items):
        raise InvalidInputError("ground set elements must be distinct")
    if not out:
        raise InvalidInputError("ground set must be nonempty")
    return out


def _fits_int64(values: list[int]) -> bool:
    return max(abs(values[0]), abs(values[-1])) < kernels.INT64_SAFE // 2


def rep_profile(E: Iterable[int], sign: Sign = "sum", ordered: bool = True) -> RepProfile:
    """Count representations ``n = a + b`` (or ``a - b``) with ``a, b`` in ``E``.

    Ordered pairs by default, so the counts always sum to ``|E|**2``.  With
    ``ordered=False`` (sums only) pairs are unordered and ``a == b`` is allowed.
    """
    if sign not in ("sum", "difference"):
        raise InvalidInputError(f"sign must be 'sum' or 'difference', got {sign!r}")
    if not ordered and sign != "sum":
        raise InvalidInputError("the unordered convention is defined for sums only")
    vals = _as_sorted_distinct(E)
    s = 1 if sign == "sum" else -1
    if not ordered:
        c: Counter[int] = Counter()
        for i, a in enumerate(vals):
            for b in vals[i:]:
                c[a + b] += 1
        return RepProfile(sign, dict(sorted(c.items())), len(vals), ordered=False)
    if len(vals) ** 2 >= _KERNEL_MIN_PAIRS and _fits_int64(vals):
        u, cnt = kernels.pair_value_counts(np.array(vals, dtype=np.int64), s)
        counts = {int(x): int(y) for x, y in zip(u, cnt)}
    else:
        c = Counter(a + s * b for a in vals for b in vals)
        counts = dict(sorted(c.items()))
    return RepProfile(sign, counts, len(vals))


def energy_moment(profile: RepProfile, m: int) -> int:
    """Exact ``sum_n r(n)**m``."""
    if m < 1:
        raise InvalidInputError(f"moment order must be >= 1, got {m}")
    return sum(r**m for r in profile.counts.values())


def binom_moment(profile: RepProfile, j: int) -> int:
    """Exact ``sum_n C(r(n), j)``."""
    if j < 1:
        raise InvalidInputError(f"j must be >= 1, got {j}")
    return sum(math.comb(r, j) for r in profile.counts.values())


def sumset_size(E: Iterable[int]) -> int:
    """``|E + E|``."""
    vals = _as_sorted_distinct(E)
    return len({a + b for i, a in enumerate(vals) for b in vals[i:]})


def find_affine_cubes(A: Iterable[int], d: int, bound: int | None = None) -> list[AffineCube]:
    """All affine cubes of dimension ``d`` whose ``2**d`` vertices are distinct members of ``A``.

    Cubes are reported with ``b0`` the least vertex, so every generator is
    positive, generators ascending.  Dimension 2 pairs up equal differences;
    higher dimensions extend each lower cube by a translate that stays in ``A``.
    """
    if d < 2:
        raise InvalidInputError(f"dimension must be >= 2, got {d}")
    pool = sorted(set(A))
    if bound is not None and pool and (pool[0] < -bound or pool[-1] > bound):
        raise InvalidInputError(f"A must lie within [-{bound}, {bound}]")
    if 2**d > len(pool):
        return []
    members = set(pool)
    by_diff: dict[int, list[int]] = defaultdict(list)
    for i, x in enumerate(pool):
        for y in pool[i + 1 :]:
            by_diff[y - x].append(x)
    cubes: set[tuple[int, tuple[int, ...]]] = set()
    for delta, lows in by_diff.items():
        for i, u in enumerate(lows):
            for v in lows[i + 1 :]:
                verts = {u, u + delta, v, v + delta}
                if len(verts) == 4:
                    g = tuple(sorted((delta, v - u)))
                    cubes.add((u, g))
    for _ in range(3, d + 1):
        grown: set[tuple[int, tuple[int, ...]]] = set()
        for b0, gens in cubes:
            verts = AffineCube(b0, gens).vertices()
            vset = set(verts)
            # the translate's least vertex b0 + shift must itself be in A
            for y in pool:
                shift = y - b0
                if shift <= 0 or y in vset:
                    continue
                moved = [v + shift for v in verts]
                if all(m in members for m in moved) and vset.isdisjoint(moved):
                    grown.add((b0, tuple(sorted(gens + (shift,)))))
        cubes = grown
    out = []
    for b0, gens in sorted(cubes):
        cube = AffineCube(b0, gens)
        verts = cube.vertices()
        if len(set(verts)) == len(verts) and all(v in members for v in verts):
            out.append(cube)
    return out


def grid_stats(A: Iterable[int], G: Iterable[tuple[int, int]]) -> GridStats:
    """Distinct-value counts of ``a+b``, ``a-b`` and ``a*b`` over ``G``."""
    members = set(A)
    pairs = list(dict.fromkeys(G))
    if not pairs:
        raise InvalidInputError("G must be nonempty")
    for a, b in pairs:
        if a not in members or b not in members:
            raise InvalidInputError(f"pair {(a, b)} is not in A x A")
    return GridStats(
        sum_count=len({a + b for a, b in pairs}),
        diff_count=len({a - b for a, b in pairs}),
        prod_count=len({a * b for a, b in pairs}),
        pair_count=len(pairs),
    )
