import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from squarelab.errors import InvalidInputError
from squarelab.sumset import energy_moment, rep_profile
from squarelab.trig import (
    TrigPolySpec,
    fejer_eval,
    fejer_grid,
    fejer_l2_squared,
    l2_squared,
    l4_fourth_exact,
    l4_growth_ratio,
    lp_norm_quadrature,
    norm_ratio,
    rudin_pairing,
    window_energy,
)


def direct_fejer(N, theta):
    return sum((1 - abs(j) / N) * cmath.exp(2j * math.pi * j * theta) for j in range(-N, N + 1)).real


def brute_l4(terms):
    conv = {}
    for n1, a1 in terms.items():
        for n2, a2 in terms.items():
            conv[n1 + n2] = conv.get(n1 + n2, 0) + a1 * a2
    return sum(c * c for c in conv.values())


def test_l2_and_l4_of_twenty_squares():
    f = TrigPolySpec.squares(range(1, 21))
    assert l2_squared(f) == 20
    assert l4_fourth_exact(f) == 1000
    assert lp_norm_quadrature(f, 4, 4096) ** 4 == pytest.approx(1000, rel=1e-9)


@given(st.dictionaries(st.integers(0, 200), st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=1, max_size=10))
def test_l4_exact_matches_convolution(terms):
    if not any(terms.values()):
        return
    f = TrigPolySpec(terms)
    assert l4_fourth_exact(f) == brute_l4(f.terms)
    assert l4_fourth_exact(f) == pytest.approx(lp_norm_quadrature(f, 4, 4 * f.max_frequency + 8) ** 4, rel=1e-8, abs=1e-9)


@given(st.lists(st.integers(1, 400), min_size=2, max_size=30, unique=True))
def test_unit_l4_equals_sum_energy(ks):
    sq = [k * k for k in ks]
    assert l4_fourth_exact(TrigPolySpec.unit(sq)) == energy_moment(rep_profile(sq, "sum"), 2)


def test_quadrature_rejects_coarse_grid():
    f = TrigPolySpec.squares(range(1, 11))
    with pytest.raises(InvalidInputError):
        lp_norm_quadrature(f, 4, 100)


def test_norm_ratio_single_term_is_one():
    assert norm_ratio(TrigPolySpec.unit([7]), 6) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("N", [1, 3, 10, 37])
def test_fejer_closed_form_matches_direct_sum(N):
    for theta in np.linspace(0.0013, 0.9987, 41):
        assert fejer_eval(N, theta) == pytest.approx(direct_fejer(N, theta), abs=1e-9)
    assert fejer_eval(N, 0.0) == N


@pytest.mark.parametrize("N", [5, 20])
def test_fejer_grid_and_l2(N):
    g = fejer_grid(N, 4096)
    assert g.min() >= 0 and np.mean(g) == pytest.approx(1.0, abs=1e-12)
    assert float(fejer_l2_squared(N)) == pytest.approx(np.mean(g**2), rel=1e-9)


def test_rudin_pairing_sides():
    elems = [49 + 24 * i for i in (1, 5, 10, 22, 35)]
    lhs, sigma, upper = rudin_pairing(elems, 49, 24, 40, 4, 1 << 14)
    assert sigma == 5
    assert lhs == sum(Fraction(40 - abs(i - 20), 40) for i in (1, 5, 10, 22, 35))
    assert lhs >= Fraction(sigma, 2)
    assert float(lhs) <= upper * (1 + 1e-9)
    with pytest.raises(InvalidInputError):
        rudin_pairing([50], 49, 24, 40, 4, 1024)


def brute_window(N, Delta):
    sq = [k * k for k in range(N, N + Delta + 1)]
    return sum(1 for a in sq for b in sq for c in sq for d in sq if a + b == c + d)


@pytest.mark.parametrize("N,Delta", [(100, 10), (50, 7), (30, 0), (20, 20)])
def test_window_energy_against_quadruple_loop(N, Delta):
    r = window_energy(N, Delta)
    assert r.l4_fourth == brute_window(N, Delta)
    assert r.n_terms == Delta + 1


def test_window_energy_zero_delta():
    r = window_energy(100, 0)
    assert r.l4_fourth == 1 and r.ratio == math.inf


def test_window_energy_validation():
    for N, D in [(1, 0), (10, -1), (10, 11)]:
        with pytest.raises(InvalidInputError):
            window_energy(N, D)


def test_growth_ratio_small_x_brute_force():
    x = 30
    sq = [k * k for k in range(1, x + 1)]
    e = sum(1 for a in sq for b in sq for c in sq for d in sq if a + b == c + d)
    assert l4_growth_ratio(x) == pytest.approx(e / (x * x * math.log(x)))
