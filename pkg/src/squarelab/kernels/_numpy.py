"""Vectorised numpy implementations of the hot loops.

These are the reference path: slower than the compiled kernels on big
scans but with no compilation step.  Signatures match ``_numba``.
"""

from __future__ import annotations

import numpy as np

_BLOCK = 1 << 22


def isqrt_vec(v: np.ndarray) -> np.ndarray:
    """Floor square root of a nonnegative int64 array (values < 2**62)."""
    r = np.sqrt(v.astype(np.float64)).astype(np.int64)
    r -= (r * r > v).astype(np.int64)
    r += ((r + 1) * (r + 1) <= v).astype(np.int64)
    return r


def square_mask(v: np.ndarray) -> np.ndarray:
    out = v >= 0
    w = np.where(out, v, 0)
    r = isqrt_vec(w)
    return out & (r * r == w)


def square_hits(a: int, b: int, k: int) -> np.ndarray:
    i = np.arange(1, k + 1, dtype=np.int64)
    return i[square_mask(a + b * i)]


def sigma_box(k: int, a_max: int, b_max: int) -> tuple[int, int, int]:
    i = np.arange(1, k + 1, dtype=np.int64)
    a = np.arange(1, a_max + 1, dtype=np.int64)
    rows = max(1, _BLOCK // max(k, 1))
    best = (-1, 0, 0)
    for b in range(1, b_max + 1):
        for lo in range(0, a_max, rows):
            block = a[lo : lo + rows]
            hits = square_mask(block[:, None] + b * i[None, :]).sum(axis=1)
            j = int(np.argmax(hits))
            if hits[j] > best[0]:
                best = (int(hits[j]), int(block[j]), b)
    return best


def pair_value_counts(vals: np.ndarray, sign: int) -> tuple[np.ndarray, np.ndarray]:
    """Distinct values of ``x + sign*y`` over ordered pairs and their multiplicities."""
    vals = np.asarray(vals, dtype=np.int64)
    n = len(vals)
    rows = max(1, _BLOCK // max(n, 1))
    chunks_v, chunks_c = [], []
    for lo in range(0, n, rows):
        s = (vals[lo : lo + rows, None] + sign * vals[None, :]).ravel()
        u, c = np.unique(s, return_counts=True)
        chunks_v.append(u)
        chunks_c.append(c)
    if len(chunks_v) == 1:
        return chunks_v[0], chunks_c[0].astype(np.int64)
    allv = np.concatenate(chunks_v)
    allc = np.concatenate(chunks_c)
    u, inv = np.unique(allv, return_inverse=True)
    return u, np.bincount(inv, weights=allc, minlength=len(u)).astype(np.int64)


def group_window_min(vals, starts, sizes, periods, w: int, cyclic: bool):
    """Smallest span of ``w`` consecutive sorted values inside each group.

    ``vals`` is sorted within each group; groups are contiguous runs given by
    ``starts``/``sizes``.  With ``cyclic`` a window may wrap past the end of
    its group, the wrapped values being shifted by the group's period.
    Returns ``(span, first_index)``; groups with no window get ``inf`` / -1.
    """
    vals = np.asarray(vals, dtype=np.float64)
    starts = np.asarray(starts, dtype=np.int64)
    sizes = np.asarray(sizes, dtype=np.int64)
    periods = np.asarray(periods, dtype=np.float64)
    ng = len(starts)
    span_out = np.full(ng, np.inf)
    arg_out = np.full(ng, -1, dtype=np.int64)
    if ng == 0:
        return span_out, arg_out
    group = np.repeat(np.arange(ng), sizes)
    idx = np.arange(len(vals), dtype=np.int64)
    pos = idx - starts[group]
    size = sizes[group]
    end = pos + (w - 1)
    ok = size >= w
    if not cyclic:
        ok &= end < size
    wrapped = end >= size
    j = starts[group] + np.where(size > 0, end % np.maximum(size, 1), 0)
    span = vals[j] - vals + wrapped * periods[group]
    span = np.where(ok, span, np.inf)
    span_out = np.minimum.reduceat(span, starts) if len(span) else span_out
    span_out[sizes == 0] = np.inf
    hit = np.flatnonzero(ok & (span == span_out[group]))
    g, first = np.unique(group[hit], return_index=True)
    arg_out[g] = hit[first]
    return span_out, arg_out


def _vp_total(diffs: list[np.ndarray], p: int) -> np.ndarray:
    total = np.zeros(len(diffs[0]), dtype=np.int64)
    for d in diffs:
        m = d.copy()
        while True:
            mask = m % p == 0
            if not mask.any():
                break
            total += mask
            m = np.where(mask, m // p, m)
    return total


def qc_scan(b_lo: int, b_hi: int, w: int, cyclic: bool, d_filter: int, spf: np.ndarray):
    """Window scan of root sets of x^2 = a (mod b) for b in [b_lo, b_hi].

    For every b, every residue a, and every run of ``w`` consecutive roots,
    record the smallest span (ties: smallest a, then earliest window) and
    count windows whose Vandermonde product is not divisible by
    ``b ** ((w-1)**2 // 4)``.  ``d_filter > 0`` restricts to residues a whose
    root count modulo every prime power exactly dividing b is <= d_filter.
    """
    nb = b_hi - b_lo + 1
    min_span = np.full(nb, -1, dtype=np.int64)
    arg_a = np.full(nb, -1, dtype=np.int64)
    arg_x1 = np.full(nb, -1, dtype=np.int64)
    windows = np.zeros(nb, dtype=np.int64)
    vfail = np.zeros(nb, dtype=np.int64)
    need = (w - 1) ** 2 // 4
    for b in range(b_lo, b_hi + 1):
        x = np.arange(b, dtype=np.int64)
        s = x * x % b
        order = np.argsort(s, kind="stable")
        ss = s[order]
        cuts = np.flatnonzero(np.diff(ss)) + 1
        starts = np.concatenate(([0], cuts)).astype(np.int64)
        sizes = np.diff(np.concatenate((starts, [b]))).astype(np.int64)
        keep = sizes >= w
        factors = []
        m = b
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        if d_filter > 0 and keep.any():
            res = ss[starts]
            for p, e in factors:
                q = p**e
                cnt = np.bincount(np.arange(q, dtype=np.int64) ** 2 % q, minlength=q)
                keep &= cnt[res % q] <= d_filter
        if not keep.any():
            continue
        starts, sizes = starts[keep], sizes[keep]
        group = np.repeat(np.arange(len(starts)), sizes)
        idx = np.concatenate([np.arange(st, st + sz) for st, sz in zip(starts, sizes)])
        pos = idx - starts[group]
        size = sizes[group]
        if not cyclic:
            sel = pos + (w - 1) < size
            group, pos, size = group[sel], pos[sel], size[sel]
        cols = []
        for t in range(w):
            off = pos + t
            j = starts[group] + off % size
            cols.append(order[j] + b * (off >= size))
        span = cols[-1] - cols[0]
        k = b - b_lo
        windows[k] = len(span)
        best = int(np.argmin(span))
        min_span[k] = span[best]
        arg_a[k] = ss[starts[group[best]]]
        arg_x1[k] = cols[0][best]
        if need:
            diffs = [cols[v] - cols[u] for u in range(w) for v in range(u + 1, w)]
            bad = np.zeros(len(span), dtype=bool)
            for p, e in factors:
                bad |= _vp_total(diffs, p) < e * need
            vfail[k] = int(bad.sum())
    return min_span, arg_a, arg_x1, windows, vfail
