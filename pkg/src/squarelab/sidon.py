"""B2[g] sets of squares: verification, a greedy baseline, and a random construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import HardAssertionError, InvalidInputError

_FIT_MIN_TERMS = 16


def default_beta(g: int) -> float:
    """16/3 for g = 1; for g >= 2 the smallest admissible value plus 0.01."""
    if g < 1:
        raise InvalidInputError("g must be >= 1")
    if g == 1:
        return 16 / 3
    return (2 ** (2 * g + 1) - 1) / (2 * g + 1) + 2 / g + 0.01


@dataclass(frozen=True)
class B2Config:
    g: int = 1
    beta: float | None = None
    x_max: int = 10**4
    seed: int = 0

    def __post_init__(self):
        if self.g < 1:
            raise InvalidInputError(f"g must be >= 1, got {self.g}")
        if self.beta is None:
            object.__setattr__(self, "beta", default_beta(self.g))
        if not self.beta > 1:
            raise InvalidInputError(f"beta must exceed 1, got {self.beta}")
        if self.x_max < 16:
            raise InvalidInputError(f"x_max must be >= 16, got {self.x_max}")
        if not 0 <= self.seed < 2**64:
            raise InvalidInputError("seed must fit in 64 bits")


@dataclass(frozen=True)
class B2Outcome:
    config: B2Config
    sampled: tuple[int, ...]
    removed: tuple[int, ...]
    kept_squares: tuple[int, ...]


def _unordered_counts(vals: np.ndarray):
    u, c = kernels.pair_value_counts(vals, 1)
    # ordered counts double every off-diagonal pair; add the diagonal back before halving
    diag = np.isin(u, 2 * vals)
    return u, (c + diag) // 2


def is_b2g(S: Iterable[int], g: int) -> tuple[bool, tuple[int, int]]:
    """At most ``g`` unordered representations ``n = a + b`` (``a = b`` allowed) for every ``n``.

    Returns ``(ok, (n, count))`` with ``n`` the smallest value of maximal count.
    """
    if g < 1:
        raise InvalidInputError("g must be >= 1")
    vals = sorted(set(S))
    if not vals:
        raise InvalidInputError("S must be nonempty")
    if vals[-1] < kernels.INT64_SAFE // 2:
        u, c = _unordered_counts(np.array(vals, dtype=np.int64))
        i = int(np.argmax(c))
        n, cnt = int(u[i]), int(c[i])
    else:
        counts: dict[int, int] = {}
        for i, a in enumerate(vals):
            for b in vals[i:]:
                counts[a + b] = counts.get(a + b, 0) + 1
        n, cnt = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return cnt <= g, (n, cnt)


def greedy_sidon_squares(limit: int) -> list[int]:
    """Scan squares up to ``limit`` and keep each one that leaves the set Sidon."""
    if limit < 1:
        raise InvalidInputError("limit must be >= 1")
    kept: list[int] = []
    sums: set[int] = set()
    for c in range(1, math.isqrt(limit) + 1):
        s = c * c
        new = [s + t for t in kept] + [2 * s]
        if sums.isdisjoint(new):
            kept.append(s)
            sums.update(new)
    return kept


def interval_sidon_squares(N: int) -> list[int]:
    """``{(N - floor(sqrt N) + k)^2 : 0 <= k < floor(sqrt N)}``."""
    r = math.isqrt(N)
    return [(N - r + k) ** 2 for k in range(r)]


def inclusion_probabilities(cfg: B2Config) -> np.ndarray:
    """``p_b = 1 / (b^(1/(2g+1)) log(2+b)^beta)`` for ``b = 1..x_max``."""
    b = np.arange(1, cfg.x_max + 1, dtype=np.float64)
    p = 1.0 / (b ** (1.0 / (2 * cfg.g + 1)) * np.log(2.0 + b) ** cfg.beta)
    return np.minimum(p, 1.0)


def _uniforms(seed: int, n: int) -> np.ndarray:
    # Philox is counter based: draw b-1 is the same whatever is drawn around it
    return np.random.Generator(np.random.Philox(key=seed)).random(n)


def removal_set(B: Iterable[int], g: int) -> list[int]:
    """Elements ``b0`` that are the largest element in some ``g+1`` representations
    ``n = b^2 + b'^2`` (``b >= b'``, both in ``B``)."""
    vals = np.array(sorted(set(B)), dtype=np.int64)
    if len(vals) == 0:
        return []
    i, j = np.triu_indices(len(vals))
    n = vals[i] ** 2 + vals[j] ** 2
    big = vals[j]
    order = np.lexsort((-big, n))
    n, big = n[order], big[order]
    cuts = np.flatnonzero(np.diff(n)) + 1
    starts = np.concatenate(([0], cuts))
    sizes = np.diff(np.concatenate((starts, [len(n)])))
    out: set[int] = set()
    for st, sz in zip(starts[sizes > g].tolist(), sizes[sizes > g].tolist()):
        # reps sorted by larger element, descending: all but the g smallest are removed
        out.update(big[st : st + sz - g].tolist())
    return sorted(out)


def random_b2g_squares(cfg: B2Config) -> B2Outcome:
    """Sample ``b`` with probability ``p_b``, drop the removal set, square what is left."""
    u = _uniforms(cfg.seed, cfg.x_max)
    p = inclusion_probabilities(cfg)
    sampled = (np.flatnonzero(u < p) + 1).tolist()
    removed = removal_set(sampled, cfg.g)
    gone = set(removed)
    kept = [c * c for c in sampled if c not in gone]
    if kept:
        ok, worst = is_b2g(kept, cfg.g)
        if not ok:
            raise HardAssertionError(f"kept squares are not B2[{cfg.g}]: {worst}")
    return B2Outcome(cfg, tuple(sampled), tuple(removed), tuple(kept))


def expected_sample_size(cfg: B2Config) -> float:
    return float(inclusion_probabilities(cfg).sum())


def growth_exponent_fit(seq: Iterable[int]) -> float:
    """Least-squares slope of ``log a_k`` against ``log k`` over the top half of the sequence."""
    a = np.array(list(seq), dtype=np.float64)
    K = len(a)
    if K < _FIT_MIN_TERMS:
        raise InvalidInputError(f"need at least {_FIT_MIN_TERMS} terms, got {K}")
    if np.any(np.diff(a) <= 0) or a[0] <= 0:
        raise InvalidInputError("sequence must be positive and strictly increasing")
    k = np.arange(1, K + 1, dtype=np.float64)
    lo = K // 2
    slope, _ = np.polyfit(np.log(k[lo:]), np.log(a[lo:]), 1)
    return float(slope)


def log_corrected_exponent(g: int, beta: float, k: float) -> float:
    """Local slope of ``(k log(k)^beta)^(2 + 1/g)`` at ``k``: what the fit should see."""
    e = 2 + 1 / g
    return e * (1 + beta / math.log(k))
