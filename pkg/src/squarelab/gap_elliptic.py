"""Three-term progressions of rational squares and the curve Delta*Y^2 = X^3 - X.

A progression x^2, y^2, z^2 with x = r(t^2-2t-1), y = r(t^2+1), z = r(t^2+2t-1)
has difference Delta = 4 r^2 (t^3 - t) and gives the point (t, 1/(2r)) on
E_Delta.  Doubling that point yields a second progression with the same
difference, hence 2x3 grids of squares.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .ap_squares import square_ap3
from .errors import HardAssertionError, InvalidInputError

Q = Fraction


@dataclass(frozen=True)
class Ap3Params:
    r: Fraction
    t: Fraction
    x: Fraction
    y: Fraction
    z: Fraction
    delta: Fraction

    @property
    def degenerate(self) -> bool:
        return self.delta == 0

    def squares(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.x**2, self.y**2, self.z**2)


def ap3_squares(r, t) -> Ap3Params:
    r, t = Q(r), Q(t)
    if r == 0:
        raise InvalidInputError("r must be nonzero")
    x = r * (t * t - 2 * t - 1)
    y = r * (t * t + 1)
    z = r * (t * t + 2 * t - 1)
    delta = 4 * r * r * (t**3 - t)
    if x * x + z * z != 2 * y * y or z * z - y * y != delta:
        raise HardAssertionError("progression identities failed")
    return Ap3Params(r, t, x, y, z, delta)


def recover_ap3(x, y, z) -> Ap3Params:
    """``(r, t)`` whose progression has squares ``x^2, y^2, z^2`` (signs of x, y, z are free)."""
    x, y, z = Q(x), Q(y), Q(z)
    if x * x + z * z != 2 * y * y:
        raise InvalidInputError(f"{x}^2, {y}^2, {z}^2 is not an arithmetic progression")
    for sx in (1, -1):
        for sz in (1, -1):
            xs, zs = sx * x, sz * z
            r = (2 * y - zs - xs) / 4
            if r == 0:
                continue
            p = ap3_squares(r, (zs - xs) / (4 * r))
            if (p.x, p.y, p.z) == (xs, y, zs):
                return p
    raise InvalidInputError("only the constant progression has no parameters")


@dataclass(frozen=True)
class ECPoint:
    """A point on ``delta * Y^2 = X^3 - X``; ``X is None`` is the point at infinity."""

    curve_delta: Fraction
    X: Fraction | None = None
    Y: Fraction | None = None

    def __post_init__(self):
        d = Q(self.curve_delta)
        if d == 0:
            raise InvalidInputError("curve_delta must be nonzero")
        object.__setattr__(self, "curve_delta", d)
        if (self.X is None) != (self.Y is None):
            raise InvalidInputError("give both coordinates or neither")
        if self.X is not None:
            X, Y = Q(self.X), Q(self.Y)
            object.__setattr__(self, "X", X)
            object.__setattr__(self, "Y", Y)
            if d * Y * Y != X**3 - X:
                raise HardAssertionError(f"({X}, {Y}) is not on {d}*Y^2 = X^3 - X")

    @classmethod
    def infinity(cls, delta) -> "ECPoint":
        return cls(Q(delta))

    @property
    def is_infinity(self) -> bool:
        return self.X is None

    def __neg__(self) -> "ECPoint":
        if self.is_infinity:
            return self
        return ECPoint(self.curve_delta, self.X, -self.Y)


def point_from_ap3(p: Ap3Params) -> ECPoint:
    if p.degenerate:
        raise InvalidInputError("degenerate progression has no curve point")
    return ECPoint(p.delta, p.t, 1 / (2 * p.r))


def ec_add(P: ECPoint, Qp: ECPoint) -> ECPoint:
    """Chord-and-tangent addition on ``delta * Y^2 = X^3 - X``."""
    if P.curve_delta != Qp.curve_delta:
        raise InvalidInputError(f"points lie on different curves ({P.curve_delta} vs {Qp.curve_delta})")
    d = P.curve_delta
    if P.is_infinity:
        return Qp
    if Qp.is_infinity:
        return P
    if P.X == Qp.X:
        if P.Y == -Qp.Y:
            return ECPoint.infinity(d)
        lam = (3 * P.X**2 - 1) / (2 * d * P.Y)
    else:
        lam = (Qp.Y - P.Y) / (Qp.X - P.X)
    x3 = d * lam * lam - P.X - Qp.X
    y3 = -(P.Y + lam * (x3 - P.X))
    return ECPoint(d, x3, y3)


def ec_double(P: ECPoint) -> ECPoint:
    if P.is_infinity or P.Y == 0:
        return ECPoint.infinity(P.curve_delta)
    return ec_add(P, P)


def ec_multiply(P: ECPoint, m: int) -> ECPoint:
    if m < 0:
        return ec_multiply(-P, -m)
    out = ECPoint.infinity(P.curve_delta)
    while m:
        if m & 1:
            out = ec_add(out, P)
        P = ec_double(P)
        m >>= 1
    return out


def double_via_progression(p: Ap3Params) -> tuple[Fraction, Fraction]:
    """``(T, R)`` with ``T = y^2 / Delta`` and ``R = Delta^2 / (2xyz)``; ``2P = (T, 1/(2R))``."""
    if p.degenerate or p.x == 0:
        raise InvalidInputError("doubling needs a non-degenerate progression with x != 0")
    return p.y**2 / p.delta, p.delta**2 / (2 * p.x * p.y * p.z)


@dataclass(frozen=True)
class GapGrid:
    x0: Fraction
    v: Fraction
    delta: Fraction
    dims: tuple[int, int]
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        J1, J2 = self.dims
        if J1 not in (2, 3) or J2 != 3:
            raise InvalidInputError(f"unsupported grid shape {self.dims}")
        for j1 in range(J1):
            for j2 in range(J2):
                if self.entries[j1][j2] != self.x0 + j1 * self.v + j2 * self.delta:
                    raise HardAssertionError(f"entry ({j1},{j2}) breaks the progression")

    @classmethod
    def build(cls, x0, v, delta, J1: int = 3) -> "GapGrid":
        x0, v, delta = Q(x0), Q(v), Q(delta)
        rows = tuple(tuple(x0 + j1 * v + j2 * delta for j2 in range(3)) for j1 in range(J1))
        return cls(x0, v, delta, (J1, 3), rows)

    def all_squares(self) -> bool:
        return all(_is_rational_square(e) for row in self.entries for e in row)

    def distinct(self) -> bool:
        flat = [e for row in self.entries for e in row]
        return len(set(flat)) == len(flat)


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def gap_2x3(r, t) -> GapGrid:
    """Two progressions of squares sharing the difference ``Delta``: from ``P`` and ``2P``."""
    p = ap3_squares(r, t)
    if p.degenerate:
        raise InvalidInputError(f"t={p.t} gives a constant progression")
    if p.x == 0 or p.z == 0:
        raise InvalidInputError("x or z vanishes; the doubled point is 2-torsion")
    T, R = double_via_progression(p)
    q = ap3_squares(R, T)
    if q.delta != p.delta:
        raise HardAssertionError("doubled progression has a different difference")
    grid = GapGrid.build(p.x**2, q.x**2 - p.x**2, p.delta, J1=2)
    if not grid.all_squares():
        raise HardAssertionError("2x3 grid has a non-square entry")
    return grid


def magic_square(u, v, delta) -> tuple[tuple[Fraction, ...], ...]:
    u, v, d = Q(u), Q(v), Q(delta)
    return (
        (u + v, u - v - d, u + d),
        (u - v + d, u, u + v - d),
        (u - d, u + v + d, u - v),
    )


def magic_line_sums(sq) -> list[Fraction]:
    rows = [sum(r) for r in sq]
    cols = [sum(sq[i][j] for i in range(3)) for j in range(3)]
    diags = [sum(sq[i][i] for i in range(3)), sum(sq[i][2 - i] for i in range(3))]
    return rows + cols + diags


def magic_square_view(grid: GapGrid):
    """The grid's nine entries arranged as a magic square centred on ``u = x0 + v + Delta``."""
    if grid.dims != (3, 3):
        raise InvalidInputError(f"magic squares need a 3x3 grid, got {grid.dims}")
    return magic_square(grid.x0 + grid.v + grid.delta, grid.v, grid.delta)


def grid_from_magic(u, v, delta) -> GapGrid:
    u, v, delta = Q(u), Q(v), Q(delta)
    return GapGrid.build(u - v - delta, v, delta, J1=3)


def search_3x3_gap_squares(height_bound: int) -> list[GapGrid]:
    """Every 3x3 grid of nine distinct integer squares ``<= height_bound^2`` with ``v, Delta > 0``.

    Rows are three-term square progressions; grouping them by difference,
    a grid is three rows whose first entries are themselves in progression.
    """
    if height_bound < 1:
        raise InvalidInputError("height_bound must be >= 1")
    limit = height_bound * height_bound
    by_diff: dict[int, set[int]] = defaultdict(set)
    for x, y, z in square_ap3(limit):
        by_diff[y * y - x * x].add(x * x)
    found = []
    for delta, starts in sorted(by_diff.items()):
        s = sorted(starts)
        members = set(s)
        for i, a in enumerate(s):
            for b in s[i + 1 :]:
                c = 2 * b - a
                if c in members:
                    g = GapGrid.build(a, b - a, delta, J1=3)
                    if g.distinct() and g.all_squares():
                        found.append(g)
    return found


def check_grid_on_curve(grid: GapGrid) -> list[ECPoint]:
    """Curve points behind each row of a grid of squares (rows share ``Delta``)."""
    pts = []
    for row in grid.entries:
        roots = [Q(math.isqrt(e.numerator), math.isqrt(e.denominator)) for e in row]
        pts.append(point_from_ap3(recover_ap3(*roots)))
    return pts

