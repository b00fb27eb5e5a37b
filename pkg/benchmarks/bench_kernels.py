"""Time each kernel under the numba and numpy backends and check they agree.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

The first numba call per kernel includes JIT compilation (or a cache load);
it is reported separately as ``first_s``.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from squarelab.core import smallest_prime_factor_table
from squarelab.kernels import get_backend


def cases(scale: float):
    n = int(2000 * scale)
    vals = np.unique(np.arange(1, n + 1, dtype=np.int64) ** 2)
    b_hi = int(3000 * scale)
    spf = smallest_prime_factor_table(b_hi)
    return {
        "square_hits": lambda m: m.square_hits(49, 24, int(10**6 * scale)),
        "sigma_box": lambda m: m.sigma_box(8, int(200 * scale), int(200 * scale)),
        "pair_value_counts": lambda m: m.pair_value_counts(vals, 1),
        "qc_scan": lambda m: m.qc_scan(2, b_hi, 3, True, 0, spf),
    }


def same(x, y) -> bool:
    if isinstance(x, tuple):
        return len(x) == len(y) and all(same(a, b) for a, b in zip(x, y))
    return bool(np.array_equal(np.asarray(x), np.asarray(y)))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args(argv)
    backends = {"numpy": get_backend("numpy"), "numba": get_backend("numba")}
    print(f"{'kernel':<18} {'backend':<7} {'first_s':>9} {'best_s':>9}  agree")
    bad = 0
    for name, fn in cases(args.scale).items():
        out = {}
        for bname, mod in backends.items():
            t0 = time.perf_counter()
            out[bname] = fn(mod)
            first = time.perf_counter() - t0
            best = first
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                fn(mod)
                best = min(best, time.perf_counter() - t0)
            agree = "" if bname == "numpy" else ("yes" if same(out["numpy"], out[bname]) else "NO")
            bad += agree == "NO"
            print(f"{name:<18} {bname:<7} {first:9.4f} {best:9.4f}  {agree}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
