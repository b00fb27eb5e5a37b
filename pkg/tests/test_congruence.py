import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from squarelab.congruence import (
    ClusterWitness,
    OmegaSpec,
    alpha_exponent,
    cluster_bound_scan,
    construct_clustered_modulus,
    largest_odd_at_most,
    min_window_with_k_roots,
    root_in_initial_interval,
    root_set,
    shortint_exponent,
    shortint_scan,
    vandermonde_certificate,
)
from squarelab.errors import InvalidInputError


def brute_roots(f, n):
    return [x for x in range(n) if f(x) % n == 0]


@given(st.integers(2, 3000), st.integers(-100, 100))
def test_root_set_square_matches_brute_force(n, a):
    assert list(root_set(OmegaSpec("x_squared_minus_a", n, a=a))) == brute_roots(lambda x: x * x - a, n)


@given(st.integers(2, 3000))
def test_root_set_idempotent_count(n):
    om = root_set(OmegaSpec("x_times_x_minus_1", n))
    assert list(om) == brute_roots(lambda x: x * (x - 1), n)
    omega_n = len({p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, math.isqrt(p) + 1))})
    assert len(om) == 2**omega_n


def test_root_set_monic():
    om = root_set(OmegaSpec("monic", 91, coefficients=(1, 0, 0, -1)))
    assert list(om) == brute_roots(lambda x: x**3 - 1, 91)


def test_root_set_examples():
    assert root_set(OmegaSpec("x_squared_minus_a", 12, a=1)).residues == (1, 5, 7, 11)
    assert len(root_set(OmegaSpec("x_squared_minus_a", 24, a=1))) == 8
    assert root_set(OmegaSpec("x_times_x_minus_1", 3605)).residues == (0, 1, 721, 1030, 1751, 1855, 2576, 2885)


def test_omega_spec_validation():
    with pytest.raises(InvalidInputError):
        OmegaSpec("cubic", 10)
    with pytest.raises(InvalidInputError):
        OmegaSpec("monic", 10, coefficients=(2, 1))
    with pytest.raises(InvalidInputError):
        OmegaSpec("x_squared_minus_a", 1)


@pytest.mark.parametrize("k", range(2, 60))
def test_shortint_exponent_equals_alpha2(k):
    if k >= 3:
        assert shortint_exponent(k) == alpha_exponent(2, k - 1).alpha
        ell = largest_odd_at_most(k)
        assert shortint_exponent(k) == Fraction(1, 2) - Fraction(1, 2 * ell)


def test_alpha_exponent_values():
    assert alpha_exponent(2, 2).alpha == Fraction(1, 3)
    assert alpha_exponent(2, 4).alpha == Fraction(2, 5)
    assert alpha_exponent(1, 3).alpha == Fraction(1)
    with pytest.raises(InvalidInputError):
        alpha_exponent(3, 2)


def test_min_window():
    om = root_set(OmegaSpec("x_squared_minus_a", 24, a=1))
    w = min_window_with_k_roots(om, 3)
    spans = [(om.residues[i + 2] - om.residues[i], i) for i in range(len(om) - 2)]
    i = min(spans)[1]
    assert w.roots == om.residues[i : i + 3]
    assert ClusterWitness(24, (1, 5, 7)).span == 6


def test_construction_3605():
    cm = construct_clustered_modulus(3, 0, primes=[5, 7])
    assert cm.n == 3605 and cm.primes == (5, 7, 103)
    assert cm.a == (1, 2, 53) and cm.x == (721, 1030, 1855)
    assert sum(cm.x) == cm.n + 1 and len(cm.omega) == 8


def test_construction_two_primes():
    cm = construct_clustered_modulus(2, 0, primes=[3])
    assert cm.x == (7, 15) and sum(cm.x) % cm.n == 1


@pytest.mark.parametrize("k", range(2, 7))
def test_construction_edge_invariants(k):
    cm = construct_clustered_modulus(k, 50)
    n = cm.n
    assert n == math.prod(cm.primes) and len(set(cm.primes)) == k
    assert sum(cm.x) % n == 1
    for i, (x, p) in enumerate(zip(cm.x, cm.primes)):
        assert x % p == 1 and all(x % q == 0 for j, q in enumerate(cm.primes) if j != i)
    assert cm.omega == root_set(OmegaSpec("x_times_x_minus_1", n))
    least = cm.min_nontrivial_root()
    assert root_in_initial_interval(cm.omega, k) == least
    # the edge choice pushes the least root to within a few percent of n/k
    assert 0.9 / k < least / n <= 1 / k + 1 / n


def test_construction_origin_variant():
    eps = 0.1
    cm = construct_clustered_modulus(3, 0, variant="origin", eps=eps)
    assert sum(cm.x) == 1
    assert max(abs(x) for x in cm.x) < eps * cm.n
    assert cm.omega == root_set(OmegaSpec("x_times_x_minus_1", cm.n))


def test_construction_validation():
    with pytest.raises(InvalidInputError):
        construct_clustered_modulus(3, 0, primes=[5, 6])
    with pytest.raises(InvalidInputError):
        construct_clustered_modulus(3, 1)
    with pytest.raises(InvalidInputError):
        construct_clustered_modulus(3, 50, variant="origin")


def test_vandermonde_examples():
    prod, div, ok = vandermonde_certificate([1, 5, 7], 1, 24)
    assert (prod, div, ok) == ((5 - 1) * (7 - 1) * (7 - 5), 24, True)
    with pytest.raises(InvalidInputError):
        vandermonde_certificate([1, 2], 1, 24)


@given(st.integers(5, 400), st.integers(0, 399))
def test_vandermonde_holds_for_every_cluster(b, a):
    roots = brute_roots(lambda x: x * x - a, b)
    for w in (3, 4, 5):
        for i in range(len(roots) - w + 1):
            assert vandermonde_certificate(roots[i : i + w], a, b)[2]


def brute_scan(b_max, w, alpha, cyclic):
    """Worst exponent and violating moduli, straight from the definition."""
    viol = []
    for b in range(2, b_max + 1):
        for a in range(b):
            r = brute_roots(lambda x: x * x - a, b)
            n = len(r)
            if n < w:
                continue
            for i in range(n if cyclic else n - w + 1):
                win = [r[(i + t) % n] + b * ((i + t) // n) for t in range(w)]
                s = win[-1] - win[0]
                if not s ** alpha.denominator > b ** alpha.numerator:
                    viol.append(b)
    return sorted(set(viol))


@pytest.mark.parametrize("k", [3, 4, 5])
def test_shortint_scan_matches_brute_force(k):
    res = shortint_scan(120, k, threads=2)
    assert res.violations == brute_scan(120, k, shortint_exponent(k), True) == []
    assert res.ok
    w = res.worst
    assert all((x * x - res.worst_residue) % w.n == 0 for x in w.roots)


def test_shortint_scan_thread_independent():
    a = shortint_scan(300, 3, threads=1)
    b = shortint_scan(300, 3, threads=6)
    assert (a.worst, a.windows, a.violations) == (b.worst, b.windows, b.violations)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_cluster_bound_scan(k):
    res = cluster_bound_scan(400, k)
    assert res.ok and res.threshold == alpha_exponent(2, k).alpha
