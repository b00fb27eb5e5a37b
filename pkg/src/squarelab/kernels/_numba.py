"""Compiled loop kernels; same contracts as ``_numpy``."""

from __future__ import annotations

import numpy as np
from numba import njit

_SQ64 = np.zeros(64, dtype=np.bool_)
_SQ63 = np.zeros(63, dtype=np.bool_)
_SQ65 = np.zeros(65, dtype=np.bool_)
_SQ11 = np.zeros(11, dtype=np.bool_)
for _t in (_SQ64, _SQ63, _SQ65, _SQ11):
    _m = len(_t)
    for _x in range(_m):
        _t[_x * _x % _m] = True


@njit(cache=True, nogil=True)
def _isqrt(v):
    r = np.int64(np.sqrt(np.float64(v)))
    while r * r > v:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r


@njit(cache=True, nogil=True)
def _is_square(v, t64, t63, t65, t11):
    if v < 0:
        return False
    if not t64[v & 63]:
        return False
    if not t63[v % 63] or not t65[v % 65] or not t11[v % 11]:
        return False
    r = _isqrt(v)
    return r * r == v


@njit(cache=True, nogil=True)
def _square_hits(a, b, k, t64, t63, t65, t11):
    out = np.empty(k, dtype=np.int64)
    n = 0
    v = a
    for i in range(1, k + 1):
        v += b
        if _is_square(v, t64, t63, t65, t11):
            out[n] = i
            n += 1
    return out[:n]


def square_hits(a: int, b: int, k: int) -> np.ndarray:
    return _square_hits(np.int64(a), np.int64(b), np.int64(k), _SQ64, _SQ63, _SQ65, _SQ11)


@njit(cache=True, nogil=True)
def _sigma_box(k, a_max, b_max, t64, t63, t65, t11):
    best, best_a, best_b = -1, 0, 0
    for b in range(1, b_max + 1):
        for a in range(1, a_max + 1):
            c = 0
            v = a
            for i in range(k):
                v += b
                if _is_square(v, t64, t63, t65, t11):
                    c += 1
            if c > best:
                best, best_a, best_b = c, a, b
    return best, best_a, best_b


def sigma_box(k: int, a_max: int, b_max: int) -> tuple[int, int, int]:
    c, a, b = _sigma_box(k, a_max, b_max, _SQ64, _SQ63, _SQ65, _SQ11)
    return int(c), int(a), int(b)


@njit(cache=True, nogil=True)
def _pair_value_counts(vals, sign):
    n = vals.shape[0]
    s = np.empty(n * n, dtype=np.int64)
    t = 0
    for i in range(n):
        for j in range(n):
            s[t] = vals[i] + sign * vals[j]
            t += 1
    s.sort()
    u = np.empty(n * n, dtype=np.int64)
    c = np.empty(n * n, dtype=np.int64)
    m = 0
    for i in range(n * n):
        if m > 0 and s[i] == u[m - 1]:
            c[m - 1] += 1
        else:
            u[m] = s[i]
            c[m] = 1
            m += 1
    return u[:m], c[:m]


def pair_value_counts(vals: np.ndarray, sign: int):
    return _pair_value_counts(np.ascontiguousarray(vals, dtype=np.int64), np.int64(sign))


@njit(cache=True, nogil=True)
def _group_window_min(vals, starts, sizes, periods, w, cyclic):
    ng = starts.shape[0]
    span_out = np.full(ng, np.inf)
    arg_out = np.full(ng, -1, dtype=np.int64)
    for g in range(ng):
        st, sz = starts[g], sizes[g]
        if sz < w:
            continue
        last = sz if cyclic else sz - w + 1
        for p in range(last):
            e = p + w - 1
            if e < sz:
                span = vals[st + e] - vals[st + p]
            else:
                span = vals[st + e - sz] + periods[g] - vals[st + p]
            if span < span_out[g]:
                span_out[g] = span
                arg_out[g] = st + p
    return span_out, arg_out


def group_window_min(vals, starts, sizes, periods, w: int, cyclic: bool):
    return _group_window_min(
        np.ascontiguousarray(vals, dtype=np.float64),
        np.ascontiguousarray(starts, dtype=np.int64),
        np.ascontiguousarray(sizes, dtype=np.int64),
        np.ascontiguousarray(periods, dtype=np.float64),
        w,
        cyclic,
    )


@njit(cache=True, nogil=True)
def _qc_scan(b_lo, b_hi, w, cyclic, d_filter, spf):
    nb = b_hi - b_lo + 1
    min_span = np.full(nb, -1, dtype=np.int64)
    arg_a = np.full(nb, -1, dtype=np.int64)
    arg_x1 = np.full(nb, -1, dtype=np.int64)
    windows = np.zeros(nb, dtype=np.int64)
    vfail = np.zeros(nb, dtype=np.int64)
    need = (w - 1) * (w - 1) // 4
    counts = np.zeros(b_hi + 1, dtype=np.int64)
    offs = np.zeros(b_hi + 2, dtype=np.int64)
    xs = np.zeros(b_hi, dtype=np.int64)
    win = np.zeros(w, dtype=np.int64)
    primes = np.zeros(32, dtype=np.int64)
    exps = np.zeros(32, dtype=np.int64)
    local = np.zeros(b_hi + 1, dtype=np.int64)
    allowed = np.ones(b_hi + 1, dtype=np.bool_)
    for b in range(b_lo, b_hi + 1):
        k = b - b_lo
        nf = 0
        m = b
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            primes[nf] = p
            exps[nf] = e
            nf += 1
        for a in range(b + 1):
            counts[a] = 0
        for x in range(b):
            counts[x * x % b] += 1
        offs[0] = 0
        for a in range(b):
            offs[a + 1] = offs[a] + counts[a]
        for a in range(b):
            counts[a] = offs[a]
        for x in range(b):
            s = x * x % b
            xs[counts[s]] = x
            counts[s] += 1
        if d_filter > 0:
            for a in range(b):
                allowed[a] = True
            for f in range(nf):
                q = 1
                for _ in range(exps[f]):
                    q *= primes[f]
                for r in range(q):
                    local[r] = 0
                for x in range(q):
                    local[x * x % q] += 1
                for a in range(b):
                    if local[a % q] > d_filter:
                        allowed[a] = False
        best = -1
        for a in range(b):
            st = offs[a]
            sz = offs[a + 1] - st
            if sz < w or (d_filter > 0 and not allowed[a]):
                continue
            last = sz if cyclic else sz - w + 1
            for p in range(last):
                for t in range(w):
                    o = p + t
                    if o < sz:
                        win[t] = xs[st + o]
                    else:
                        win[t] = xs[st + o - sz] + b
                span = win[w - 1] - win[0]
                windows[k] += 1
                if best < 0 or span < best:
                    best = span
                    arg_a[k] = a
                    arg_x1[k] = win[0]
                if need > 0:
                    for f in range(nf):
                        pr = primes[f]
                        goal = exps[f] * need
                        tot = 0
                        for u in range(w):
                            for v in range(u + 1, w):
                                d = win[v] - win[u]
                                while d % pr == 0:
                                    d //= pr
                                    tot += 1
                            if tot >= goal:
                                break
                        if tot < goal:
                            vfail[k] += 1
                            break
        min_span[k] = best
    return min_span, arg_a, arg_x1, windows, vfail


def qc_scan(b_lo: int, b_hi: int, w: int, cyclic: bool, d_filter: int, spf: np.ndarray):
    return _qc_scan(b_lo, b_hi, w, cyclic, d_filter, spf)
