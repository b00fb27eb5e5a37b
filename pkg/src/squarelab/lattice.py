"""Lattice points on circles x^2 + y^2 = M and how tightly they cluster on arcs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

import mpmath
import numpy as np

from . import kernels
from .core import GaussianInteger, UNITS, factorize, gaussian_prime_above
from .errors import HardAssertionError, InvalidInputError
from .parallel import default_threads, map_shards, split_range

# Float decisions closer than this (relative) to the threshold are redone in mpmath.
READJUDICATE_TOL = 1e-9
_MP_DPS = 50


@dataclass(frozen=True)
class CirclePoint:
    x: int
    y: int
    M: int

    def __post_init__(self):
        if self.x * self.x + self.y * self.y != self.M:
            raise HardAssertionError(f"({self.x}, {self.y}) is not on x^2+y^2={self.M}")

    def as_tuple(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass(frozen=True)
class ArcCluster:
    M: int
    points: tuple[CirclePoint, ...]
    arc_length: float

    @property
    def size(self) -> int:
        return len(self.points)


def _half(p) -> int:
    x, y = p
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(p, q) -> int:
    hp, hq = _half(p), _half(q)
    if hp != hq:
        return hp - hq
    cross = p[0] * q[1] - p[1] * q[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def sort_by_angle(points):
    """Counter-clockwise from the positive x-axis, exact integer comparisons."""
    return sorted(points, key=cmp_to_key(lambda a, b: _angle_cmp(a.as_tuple(), b.as_tuple())))


def r2_formula(M: int) -> int:
    """Number of integer points on ``x^2 + y^2 = M`` from the factorization of ``M``."""
    if M < 1:
        raise InvalidInputError("M must be positive")
    count = 4
    for p, e in factorize(M):
        if p % 4 == 3 and e % 2:
            return 0
        if p % 4 == 1:
            count *= e + 1
    return count


def two_square_reps(M: int) -> list[CirclePoint]:
    """Every integer point on ``x^2 + y^2 = M``, sorted by angle.

    Each point is a unit times a product over the split primes of
    ``pi^j * conj(pi)^(e-j)``; ramified and inert primes contribute fixed factors.
    """
    if M < 1:
        raise InvalidInputError(f"M must be positive, got {M}")
    base = GaussianInteger(1, 0)
    split = []
    for p, e in factorize(M):
        if p == 2:
            base = base * GaussianInteger(1, 1) ** e
        elif p % 4 == 3:
            if e % 2:
                return []
            base = base * GaussianInteger(p**(e // 2), 0)
        else:
            split.append((gaussian_prime_above(p), e))
    nus = [base]
    for pi, e in split:
        pc = pi.conj()
        nus = [nu * pi**j * pc ** (e - j) for nu in nus for j in range(e + 1)]
    pts = {(u * nu).as_tuple() for nu in nus for u in UNITS}
    return sort_by_angle(CirclePoint(x, y, M) for x, y in pts)


def _mp_angle(p) -> mpmath.mpf:
    a = mpmath.atan2(p[1], p[0])
    return a if a >= 0 else a + 2 * mpmath.pi


def _arc(points, i: int, j: int, R) -> mpmath.mpf:
    """Arc length from ``points[i]`` counter-clockwise to ``points[j]``."""
    d = _mp_angle(points[j].as_tuple()) - _mp_angle(points[i].as_tuple())
    if d < 0 or (d == 0 and j != i):
        d += 2 * mpmath.pi
    return R * d


def max_arc_cluster(M: int, arc_length: float) -> ArcCluster:
    """Largest set of points of circle ``M`` inside one closed arc of the given length."""
    if arc_length <= 0:
        raise InvalidInputError("arc_length must be positive")
    pts = two_square_reps(M)
    if not pts:
        return ArcCluster(M, (), 0.0)
    with mpmath.workdps(_MP_DPS):
        R = mpmath.sqrt(M)
        if arc_length >= 2 * mpmath.pi * R:
            return ArcCluster(M, tuple(pts), float(_arc(pts, 0, len(pts) - 1, R)))
        n = len(pts)
        best = (1, 0, mpmath.mpf(0))
        for i in range(n):
            size = 1
            while size < n and _arc(pts, i, (i + size) % n, R) <= arc_length:
                size += 1
            if size > best[0]:
                best = (size, i, _arc(pts, i, (i + size - 1) % n, R))
        size, i, arc = best
    chosen = tuple(pts[(i + t) % n] for t in range(size))
    return ArcCluster(M, chosen, float(arc))


def arc_exponent(k: int) -> Fraction:
    """``1/2 - 1/(4*floor(k/2) + 2)``."""
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    return Fraction(1, 2) - Fraction(1, 4 * (k // 2) + 2)


@dataclass(frozen=True)
class ArcVerifyResult:
    M_max: int
    k: int
    exponent: Fraction
    ok: bool
    worst: ArcCluster | None
    worst_ratio: float
    violations: tuple[int, ...]
    circles_checked: int
    readjudicated: int


def _points_up_to(lo: int, hi: int):
    """All lattice points with ``lo <= x^2 + y^2 <= hi``, grouped by M, angle-sorted within M."""
    r = math.isqrt(hi)
    xs, ys = [], []
    for x in range(-r, r + 1):
        top = math.isqrt(hi - x * x)
        y = np.arange(-top, top + 1, dtype=np.int64)
        m = x * x + y * y
        y = y[m >= lo]
        xs.append(np.full(len(y), x, dtype=np.int64))
        ys.append(y)
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    m = x * x + y * y
    ang = np.mod(np.arctan2(y.astype(np.float64), x.astype(np.float64)), 2 * np.pi)
    order = np.lexsort((ang, m))
    return x[order], y[order], m[order], ang[order]


def _verify_range(lo: int, hi: int, k: int, alpha: float):
    x, y, m, ang = _points_up_to(lo, hi)
    if len(m) == 0:
        return []
    cuts = np.flatnonzero(np.diff(m)) + 1
    starts = np.concatenate(([0], cuts)).astype(np.int64)
    sizes = np.diff(np.concatenate((starts, [len(m)]))).astype(np.int64)
    span, arg = kernels.group_window_min(ang, starts, sizes, np.full(len(starts), 2 * np.pi), k + 1, True)
    out = []
    for g in np.flatnonzero(arg >= 0).tolist():
        M = int(m[starts[g]])
        R = math.sqrt(M)
        ratio = R * float(span[g]) / R**alpha
        idx = [starts[g] + (arg[g] - starts[g] + t) % sizes[g] for t in range(k + 1)]
        pts = tuple((int(x[i]), int(y[i])) for i in idx)
        out.append((M, ratio, pts))
    return out


def arc_bound_verify(M_max: int, k: int, threads: int | None = None, exponent=None) -> ArcVerifyResult:
    """Check every circle ``M <= M_max`` for ``k+1`` points on an arc of length ``R**alpha``.

    ``alpha = 1/2 - 1/(4*floor(k/2)+2)`` unless ``exponent`` (a rational in
    ``(0, 1)``) overrides it, and ``R = sqrt(M)``.  Angles are float64;
    any circle whose arc/threshold ratio is within ``READJUDICATE_TOL`` of 1 is
    recomputed at 50 digits before it is called either way.
    """
    if M_max < 2:
        raise InvalidInputError("M_max must be >= 2")
    if not 1 <= k <= 5:
        raise InvalidInputError("k must be in 1..5")
    exp = arc_exponent(k) if exponent is None else Fraction(exponent)
    if not 0 < exp < 1:
        raise InvalidInputError(f"exponent must lie in (0, 1), got {exp}")
    alpha = float(exp)
    threads = threads or default_threads()
    shards = split_range(1, M_max, threads * 4)
    rows = [r for part in map_shards(lambda a, b: _verify_range(a, b, k, alpha), shards, threads) for r in part]
    violations = []
    readj = 0
    worst = None
    for M, ratio, pts in rows:
        if abs(ratio - 1) < READJUDICATE_TOL:
            readj += 1
            with mpmath.workdps(_MP_DPS):
                R = mpmath.sqrt(M)
                cps = [CirclePoint(px, py, M) for px, py in pts]
                ratio_mp = _arc(cps, 0, len(cps) - 1, R) / R ** (mpmath.mpf(exp.numerator) / exp.denominator)
                bad = ratio_mp <= 1
                ratio = float(ratio_mp)
        else:
            bad = ratio <= 1
        if bad:
            violations.append(M)
        if worst is None or ratio < worst[1]:
            worst = (M, ratio, pts)
    cluster = None
    if worst is not None:
        M, ratio, pts = worst
        cps = tuple(CirclePoint(px, py, M) for px, py in pts)
        with mpmath.workdps(_MP_DPS):
            arc = float(_arc(list(cps), 0, len(cps) - 1, mpmath.sqrt(M)))
        cluster = ArcCluster(M, cps, arc)
    return ArcVerifyResult(
        M_max, k, exp, not violations, cluster, worst[1] if worst else math.inf,
        tuple(violations), len(rows), readj,
    )


# ------------------------------------------------------------ explicit families


def fibonacci(m: int) -> int:
    """``F_m`` for any integer ``m`` (``F_{-m} = (-1)^(m+1) F_m``)."""
    if m < 0:
        f = fibonacci(-m)
        return f if m % 2 else -f
    a, b = 0, 1
    for _ in range(m):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class FamilyResult:
    family: str
    n: int
    points: tuple[CirclePoint, ...]
    M: int
    extreme_separation: float
    model_length: float

    @property
    def ratio(self) -> float:
        return self.extreme_separation / self.model_length


def _fib_quad(n: int):
    # x0 = F_{3n}/2, y0 = F_{3n-3}/2 (F_{3n} is always even), G_m = (-1)^(m+1) F_m
    F = fibonacci

    def G(m):
        return -F(m) if m % 2 == 0 else F(m)

    x0, y0 = F(3 * n) // 2, F(3 * n - 3) // 2
    pts = [
        (x0 - 2 * G(n - 2), y0 - 2 * G(n + 1)),
        (x0 + G(n - 3), y0 + G(n)),
        (x0 + G(n - 2), y0 + G(n + 1)),
        (x0 - G(n - 1), y0 - G(n + 2)),
    ]
    M5 = 5 * F(2 * n - 3) * F(2 * n - 1) * F(2 * n + 1)
    return pts, M5 // 2


def family_points(family: str, n: int) -> FamilyResult:
    """Points of one of the explicit near-extremal families, checked to lie on their circle.

    ``pair``: ``(n, n+1), (n+1, n)``; ``triple``: ``(4n^3-1, 2n^2+2n), (4n^3, 2n^2+1),
    (4n^3+1, 2n^2-2n)``; ``quad_fibonacci``: four points built from Fibonacci numbers
    (``x0 = F_{3n}/2``, ``y0 = F_{3n-3}/2``, ``G_m = (-1)^(m+1) F_m``) on
    ``x^2 + y^2 = (5/2) F_{2n-3} F_{2n-1} F_{2n+1}``.
    """
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if family == "pair":
        pts = [(n, n + 1), (n + 1, n)]
        M = 2 * n * n + 2 * n + 1
        model = math.sqrt(2)
    elif family == "triple":
        c = 4 * n**3
        pts = [(c - 1, 2 * n * n + 2 * n), (c, 2 * n * n + 1), (c + 1, 2 * n * n - 2 * n)]
        M = c * c + (2 * n * n + 1) ** 2
        model = (16 * math.sqrt(M)) ** (1 / 3)
    elif family == "quad_fibonacci":
        if n < 3:
            raise InvalidInputError("quad_fibonacci needs n >= 3")
        pts, M = _fib_quad(n)
        model = (40 + 20 * math.sqrt(5)) ** (1 / 3) * math.sqrt(M) ** (1 / 3)
    else:
        raise InvalidInputError(f"unknown family {family!r}")
    for px, py in pts:
        if px * px + py * py != M:
            raise HardAssertionError(f"family {family} n={n}: point {(px, py)} is off x^2+y^2={M}")
    sep = max(math.dist(p, q) for p in pts for q in pts)
    return FamilyResult(family, n, tuple(CirclePoint(px, py, M) for px, py in pts), M, sep, model)


def quad_fibonacci_shifted(n: int):
    """The four-point family read with ``x0 = F_{3n+2}/2``, ``y0 = F_{3n-1}/2``,
    ``G_m = (-1)^m F_m`` and circle ``(5/2) F_{2n-2} F_{2n} F_{2n+2}``.

    Returns ``(points, M, norms)`` with exact rationals so the mismatch can be inspected.
    """
    F = fibonacci

    def G(m):
        return F(m) if m % 2 == 0 else -F(m)

    x0, y0 = Fraction(F(3 * n + 2), 2), Fraction(F(3 * n - 1), 2)
    pts = [
        (x0 - 2 * G(n - 2), y0 - 2 * G(n + 1)),
        (x0 + G(n - 3), y0 + G(n)),
        (x0 + G(n - 2), y0 + G(n + 1)),
        (x0 - G(n - 1), y0 - G(n + 2)),
    ]
    M = Fraction(5, 2) * F(2 * n - 2) * F(2 * n) * F(2 * n + 2)
    return pts, M, [px * px + py * py for px, py in pts]


def bridge_maps(cluster: ArcCluster):
    """Images of a cluster under ``z -> z * conj(z0)`` and ``z -> (1+i) z * conj(z0)``.

    The first lands near the positive x-axis on circle ``M^2``, the second near
    the diagonal on circle ``2 M^2``.
    """
    if not cluster.points:
        return [], []
    z0 = GaussianInteger(cluster.points[0].x, cluster.points[0].y).conj()
    flat = [GaussianInteger(p.x, p.y) * z0 for p in cluster.points]
    diag = [GaussianInteger(1, 1) * z for z in flat]
    M = cluster.M
    return (
        [CirclePoint(z.re, z.im, M * M) for z in flat],
        [CirclePoint(z.re, z.im, 2 * M * M) for z in diag],
    )
