import math
from fractions import Fraction

import pytest

from squarelab.errors import InvalidInputError
from squarelab.lattice import (
    CirclePoint,
    arc_bound_verify,
    arc_exponent,
    bridge_maps,
    family_points,
    fibonacci,
    max_arc_cluster,
    quad_fibonacci_shifted,
    r2_formula,
    two_square_reps,
)


def brute_points(M):
    r = math.isqrt(M)
    return {(x, y) for x in range(-r, r + 1) for y in range(-r, r + 1) if x * x + y * y == M}


def angle(p):
    a = math.atan2(p[1], p[0])
    return a if a >= 0 else a + 2 * math.pi


def brute_min_span(M, w):
    """Shortest arc (as length) through ``w`` consecutive points, or None."""
    pts = sorted(brute_points(M), key=angle)
    n = len(pts)
    if n < w:
        return None
    th = [angle(p) for p in pts]
    R = math.sqrt(M)
    return min(R * ((th[(i + w - 1) % n] - th[i]) % (2 * math.pi)) for i in range(n))


def test_r2_and_reps_match_brute_force():
    for M in range(1, 2000):
        pts = brute_points(M)
        assert r2_formula(M) == len(pts)
        assert {p.as_tuple() for p in two_square_reps(M)} == pts


def test_reps_sorted_by_angle():
    for M in (25, 65, 1105, 5525, 2 * 5**4 * 13):
        ang = [angle(p.as_tuple()) for p in two_square_reps(M)]
        assert ang == sorted(ang)


def test_reps_large_modulus():
    M = 5**3 * 13**2 * 17 * 29 * 3**2
    pts = two_square_reps(M)
    assert len(pts) == r2_formula(M) == 4 * 4 * 3 * 2 * 2
    assert all(p.x * p.x + p.y * p.y == M for p in pts)


def test_circle_point_validates():
    with pytest.raises(Exception):
        CirclePoint(1, 1, 3)


@pytest.mark.parametrize("M,arc,size", [(25, 100.0, 12), (1105, 8.3, 3), (2, 10.0, 4), (3, 1.0, 0)])
def test_max_arc_cluster_examples(M, arc, size):
    assert max_arc_cluster(M, arc).size == size


@pytest.mark.parametrize("M", [65, 325, 1105, 5525])
def test_max_arc_cluster_against_window_scan(M):
    R = math.sqrt(M)
    for L in (1.0, 5.0, 0.5 * R, 2 * R):
        best = max(
            (w for w in range(1, r2_formula(M) + 1) if brute_min_span(M, w) <= L),
            default=1,
        )
        assert max_arc_cluster(M, L).size == best


def test_arc_exponent():
    got = [arc_exponent(k) for k in (1, 2, 3, 4, 5)]
    assert got == [0, Fraction(1, 3), Fraction(1, 3), Fraction(2, 5), Fraction(2, 5)]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_arc_verify_matches_brute_force(k):
    M_max = 3000
    alpha = float(arc_exponent(k))
    ratios = {}
    for M in range(1, M_max + 1):
        s = brute_min_span(M, k + 1)
        if s is not None:
            ratios[M] = s / math.sqrt(M) ** alpha
    res = arc_bound_verify(M_max, k, threads=2)
    assert res.ok and not res.violations
    assert res.circles_checked == len(ratios)
    worst_M = min(ratios, key=lambda m: (ratios[m], m))
    assert res.worst.M == worst_M
    assert res.worst_ratio == pytest.approx(ratios[worst_M], rel=1e-9)


def test_arc_verify_validation():
    with pytest.raises(InvalidInputError):
        arc_bound_verify(1, 2)
    with pytest.raises(InvalidInputError):
        arc_bound_verify(100, 6)


def test_fibonacci_negative_indices():
    assert [fibonacci(m) for m in range(-5, 8)] == [5, -3, 2, -1, 1, 0, 1, 1, 2, 3, 5, 8, 13]


def test_pair_family():
    for n in (1, 10, 1000):
        r = family_points("pair", n)
        assert r.extreme_separation == math.sqrt(2) and r.ratio == 1.0


def test_triple_family_membership_and_ratio():
    for n in range(1, 51):
        r = family_points("triple", n)
        assert all(p.x**2 + p.y**2 == r.M for p in r.points)
    assert 0.95 <= family_points("triple", 50).ratio <= 1.05


def test_quad_family_on_circle():
    r = family_points("quad_fibonacci", 3)
    assert r.M == 325 and [p.as_tuple() for p in r.points] == [(15, 10), (17, 6), (18, 1), (18, -1)]
    for n in range(3, 20):
        q = family_points("quad_fibonacci", n)
        assert len({p.as_tuple() for p in q.points}) == 4
        assert 0.9 < q.ratio < 1.1


def test_quad_family_shifted_indices_are_off_circle():
    for n in range(3, 10):
        pts, M, norms = quad_fibonacci_shifted(n)
        assert all(v != M for v in norms)


def test_family_validation():
    with pytest.raises(InvalidInputError):
        family_points("quad_fibonacci", 2)
    with pytest.raises(InvalidInputError):
        family_points("hex", 4)


def test_bridge_maps():
    c = max_arc_cluster(1105, 8.3)
    flat, diag = bridge_maps(c)
    assert flat[0].as_tuple() == (1105, 0)
    assert all(p.M == 1105**2 for p in flat) and all(p.M == 2 * 1105**2 for p in diag)
    assert diag[0].as_tuple() == (1105, 1105)


def test_arc_verify_exponent_override():
    res = arc_bound_verify(3000, 3, exponent=Fraction(2, 5))
    assert res.exponent == Fraction(2, 5) and res.ok
    base = arc_bound_verify(3000, 3)
    assert res.worst_ratio < base.worst_ratio
    with pytest.raises(InvalidInputError):
        arc_bound_verify(100, 3, exponent=Fraction(3, 2))
