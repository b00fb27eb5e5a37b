"""Both backends against each other and against plain-Python oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from squarelab import kernels
from squarelab.core import smallest_prime_factor_table

BACKENDS = [kernels.get_backend("numpy"), kernels.get_backend("numba")]
IDS = ["numpy", "numba"]


def brute_hits(a, b, k):
    return [i for i in range(1, k + 1) if math.isqrt(a + i * b) ** 2 == a + i * b]


def brute_qc(b, w, cyclic):
    """(min span, windows, vandermonde failures) over every a mod b."""
    need = (w - 1) ** 2 // 4
    best, nwin, vfail = None, 0, 0
    for a in range(b):
        roots = [x for x in range(b) if (x * x - a) % b == 0]
        n = len(roots)
        if n < w:
            continue
        starts = range(n) if cyclic else range(n - w + 1)
        for i in starts:
            win = [roots[(i + t) % n] + b * ((i + t) // n) for t in range(w)]
            nwin += 1
            span = win[-1] - win[0]
            best = span if best is None else min(best, span)
            prod = math.prod(win[j] - win[i2] for i2 in range(w) for j in range(i2 + 1, w))
            vfail += prod % b**need != 0
    return best, nwin, vfail


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@pytest.mark.parametrize("a,b,k", [(49, 24, 100), (1, 1, 99), (2, 4, 10), (7, 3, 500)])
def test_square_hits(impl, a, b, k):
    assert impl.square_hits(a, b, k).tolist() == brute_hits(a, b, k)


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
def test_square_hits_near_int64_limit(impl):
    a = (2**31 - 1) ** 2 - 10
    assert impl.square_hits(a, 1, 20).tolist() == brute_hits(a, 1, 20)


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@pytest.mark.parametrize("k,am,bm", [(5, 30, 30), (3, 12, 40), (10, 10, 10)])
def test_sigma_box(impl, k, am, bm):
    best = max(
        ((len(brute_hits(a, b, k)), -b, -a) for b in range(1, bm + 1) for a in range(1, am + 1)),
    )
    cnt, a, b = impl.sigma_box(k, am, bm)
    assert (cnt, a, b) == (best[0], -best[2], -best[1])


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@pytest.mark.parametrize("sign", [1, -1])
def test_pair_value_counts(impl, sign):
    vals = np.array([1, 4, 9, 16, 25, 49, 100], dtype=np.int64)
    u, c = impl.pair_value_counts(vals, sign)
    expect = {}
    for x in vals.tolist():
        for y in vals.tolist():
            expect[x + sign * y] = expect.get(x + sign * y, 0) + 1
    assert dict(zip(u.tolist(), c.tolist())) == expect
    assert u.tolist() == sorted(expect)


@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=40, unique=True))
def test_pair_value_counts_backends_agree(xs):
    v = np.array(sorted(xs), dtype=np.int64)
    for sign in (1, -1):
        a, b = (impl.pair_value_counts(v, sign) for impl in BACKENDS)
        assert a[0].tolist() == b[0].tolist() and a[1].tolist() == b[1].tolist()


@pytest.mark.parametrize("cyclic", [False, True])
def test_group_window_min_backends_agree(cyclic):
    rng = np.random.default_rng(3)
    sizes = np.array([0, 1, 3, 5, 8, 2], dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(np.int64)
    vals = np.concatenate([np.sort(rng.random(s)) for s in sizes])
    periods = np.ones(len(sizes))
    out = [impl.group_window_min(vals, starts, sizes, periods, 3, cyclic) for impl in BACKENDS]
    np.testing.assert_array_equal(out[0][0], out[1][0])
    np.testing.assert_array_equal(out[0][1], out[1][1])
    for g, (st_, sz) in enumerate(zip(starts, sizes)):
        spans = []
        rng_i = range(sz) if cyclic and sz >= 3 else range(max(0, sz - 2))
        for i in rng_i:
            j = (i + 2) % sz
            spans.append(vals[st_ + j] - vals[st_ + i] + (1.0 if i + 2 >= sz else 0.0))
        assert out[0][0][g] == (min(spans) if spans else np.inf)


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@pytest.mark.parametrize("w,cyclic", [(3, True), (3, False), (4, True), (5, False)])
def test_qc_scan_against_brute_force(impl, w, cyclic):
    b_hi = 60
    spf = smallest_prime_factor_table(b_hi)
    span, arg_a, arg_x1, nwin, vfail = impl.qc_scan(2, b_hi, w, cyclic, 0, spf)
    for i, b in enumerate(range(2, b_hi + 1)):
        best, n, vf = brute_qc(b, w, cyclic)
        assert int(nwin[i]) == n and int(vfail[i]) == vf
        assert int(span[i]) == (-1 if best is None else best)
        if best is not None:
            a, x1 = int(arg_a[i]), int(arg_x1[i])
            assert (x1 * x1 - a) % b == 0


def test_qc_scan_backends_agree_with_filter():
    spf = smallest_prime_factor_table(400)
    a = kernels.get_backend("numpy").qc_scan(300, 400, 4, False, 2, spf)
    b = kernels.get_backend("numba").qc_scan(300, 400, 4, False, 2, spf)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


def test_backend_selection(monkeypatch):
    assert kernels.BACKEND in ("numba", "numpy")
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("flag,expect", [("numpy", "numpy"), ("numba", "numba"), ("", "numba")])
def test_env_flag_selects_backend(flag, expect):
    import os
    import subprocess
    import sys

    env = dict(os.environ, SQUARELAB_BACKEND=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from squarelab import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expect


def test_env_flag_rejects_unknown():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SQUARELAB_BACKEND="cuda")
    out = subprocess.run([sys.executable, "-c", "import squarelab.kernels"], env=env, capture_output=True, text=True)
    assert out.returncode != 0 and "SQUARELAB_BACKEND" in out.stderr
