"""Roots of quadratic congruences: CRT composition, clustering, and constructions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from . import kernels
from .core import (
    ResidueSet,
    crt_combine,
    factorize,
    is_probable_prime,
    smallest_prime_factor_table,
    sqrt_mod_prime_power,
)
from .errors import BudgetExceededError, HardAssertionError, InvalidInputError
from .parallel import default_threads, map_shards, split_range

OmegaKind = Literal["x_squared_minus_a", "x_times_x_minus_1", "monic"]

# Prime powers above this are not rooted by exhaustion.
EXHAUSTIVE_LIMIT = 10**6
PRIME_STEP_BUDGET = 10**6


@dataclass(frozen=True)
class OmegaSpec:
    """Which congruence ``f(x) = 0 (mod modulus)`` to solve.

    ``a`` is used by ``x_squared_minus_a``; ``coefficients`` (leading
    coefficient first, monic) by ``monic``.
    """

    kind: OmegaKind
    modulus: int
    a: int = 0
    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("x_squared_minus_a", "x_times_x_minus_1", "monic"):
            raise InvalidInputError(f"unknown congruence kind {self.kind!r}")
        if self.modulus < 2:
            raise InvalidInputError(f"modulus must be >= 2, got {self.modulus}")
        if self.kind == "monic" and (not self.coefficients or self.coefficients[0] != 1):
            raise InvalidInputError("monic kind needs coefficients with leading 1")


@dataclass(frozen=True)
class ClusterWitness:
    n: int
    roots: tuple[int, ...]

    @property
    def span(self) -> int:
        return self.roots[-1] - self.roots[0]

    @property
    def exponent(self) -> float:
        return math.log(self.span) / math.log(self.n) if self.span > 0 else float("-inf")


@dataclass(frozen=True)
class ExponentBound:
    d: int
    k: int
    r: int
    s: int
    alpha: Fraction


def _prime_power_roots(spec: OmegaSpec, p: int, e: int) -> list[int]:
    q = p**e
    if spec.kind == "x_times_x_minus_1":
        # x and x-1 are coprime, so p^e must divide one of them
        return [0, 1]
    if spec.kind == "x_squared_minus_a":
        return list(sqrt_mod_prime_power(spec.a, p, e))
    if q > EXHAUSTIVE_LIMIT:
        raise InvalidInputError(f"prime power {q} too large for exhaustive rooting")
    x = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    for c in spec.coefficients:
        acc = (acc * x + c) % q
    return np.flatnonzero(acc == 0).tolist()


def root_set(spec: OmegaSpec) -> ResidueSet:
    """``{x mod n : f(x) = 0 (mod n)}`` built prime power by prime power."""
    parts = [(p**e, _prime_power_roots(spec, p, e)) for p, e in factorize(spec.modulus)]
    combos = [0]
    mod = 1
    for q, roots in parts:
        if not roots:
            return ResidueSet(spec.modulus, ())
        combos = [crt_combine([(c, mod), (r, q)])[0] for c in combos for r in roots]
        mod *= q
    return ResidueSet.from_iterable(spec.modulus, combos)


def alpha_exponent(d: int, k: int) -> ExponentBound:
    """``alpha_d(k) = (d*C(r,2) + r*s) / C(k+1,2)`` with ``k + 1 = r*d + s``."""
    if d < 1 or k < d:
        raise InvalidInputError(f"need 1 <= d <= k, got d={d}, k={k}")
    r, s = divmod(k + 1, d)
    alpha = Fraction(d * math.comb(r, 2) + r * s, math.comb(k + 1, 2))
    return ExponentBound(d, k, r, s, alpha)


def largest_odd_at_most(k: int) -> int:
    return k if k % 2 else k - 1


def shortint_exponent(k: int) -> Fraction:
    """``1/2 - 1/(2l)``, ``l`` the largest odd integer ``<= k``; equals ``alpha_2(k-1)``."""
    if k < 3:
        raise InvalidInputError(f"k must be >= 3, got {k}")
    ell = largest_odd_at_most(k)
    return Fraction(1, 2) - Fraction(1, 2 * ell)


def min_window_with_k_roots(omega: ResidueSet, k: int) -> ClusterWitness:
    """Tightest ``k`` consecutive roots in ``[0, n)`` (no wrap); ties go to the smallest start."""
    if k < 2:
        raise InvalidInputError(f"k must be >= 2, got {k}")
    res = omega.residues
    if len(res) < k:
        raise InvalidInputError(f"only {len(res)} roots, need {k}")
    best = min(range(len(res) - k + 1), key=lambda i: (res[i + k - 1] - res[i], i))
    return ClusterWitness(omega.modulus, tuple(res[best : best + k]))


@dataclass(frozen=True)
class ClusteredModulus:
    n: int
    primes: tuple[int, ...]
    a: tuple[int, ...]
    x: tuple[int, ...]
    omega: ResidueSet
    variant: str

    def min_nontrivial_root(self) -> int:
        """Least root other than 0 and 1 (``None`` for a prime modulus)."""
        rest = [r for r in self.omega.residues if r > 1]
        return rest[0] if rest else None


def _next_primes(floor: int, count: int) -> list[int]:
    out, p = [], floor + 1
    while len(out) < count:
        if is_probable_prime(p):
            out.append(p)
        p += 1
    return out


def construct_clustered_modulus(
    k: int,
    prime_floor: int,
    variant: str = "edge",
    primes: Sequence[int] | None = None,
    eps: float | None = None,
    step_budget: int = PRIME_STEP_BUDGET,
) -> ClusteredModulus:
    """Squarefree ``n = p_1...p_k`` whose idempotents ``x_i`` are placed on purpose.

    ``x_i = a_i n / p_i`` with ``x_i = 1 (mod p_i)`` and ``0`` modulo the other
    primes, so the roots of ``x(x-1) = 0 (mod n)`` are the subset sums of the
    ``x_i``.  ``variant="edge"`` uses ``a_j = floor(p_j / k)``, which puts the
    least nontrivial root just below ``n/k``, at the far end of ``(1, n/k + 1]``.
    ``variant="origin"`` uses ``a_j = 1`` with ``p_j > 2k/eps`` and a signed
    last idempotent, so every root has ``|x| < eps*n``.
    ``primes`` overrides the first ``k-1`` primes.
    """
    if k < 2:
        raise InvalidInputError(f"k must be >= 2, got {k}")
    if variant not in ("edge", "origin"):
        raise InvalidInputError(f"variant must be 'edge' or 'origin', got {variant!r}")
    if variant == "origin":
        if eps is None or not 0 < eps < 1:
            raise InvalidInputError("variant 'origin' needs 0 < eps < 1")
        floor = max(prime_floor, math.floor(2 * k / eps))
    else:
        floor = prime_floor
    if primes is None:
        if floor < k:
            raise InvalidInputError(f"prime_floor must be >= k={k}")
        head = _next_primes(floor, k - 1)
    else:
        head = [int(p) for p in primes]
        if len(head) != k - 1 or len(set(head)) != k - 1:
            raise InvalidInputError(f"need {k - 1} distinct primes, got {list(primes)}")
        for p in head:
            if not is_probable_prime(p) or p <= k:
                raise InvalidInputError(f"{p} is not a prime exceeding k={k}")
            if variant == "origin" and p <= 2 * k / eps:
                raise InvalidInputError(f"prime {p} must exceed 2k/eps = {2 * k / eps}")
    P = math.prod(head)
    a_head = [p // k if variant == "edge" else 1 for p in head]
    r, _ = crt_combine([(pow(a * (P // p), -1, p), p) for a, p in zip(a_head, head)])
    pk = None
    cand = r
    for _ in range(step_budget):
        if cand > k and is_probable_prime(cand):
            pk = cand
            break
        cand += P
    if pk is None:
        raise BudgetExceededError(f"no prime = {r} mod {P} within {step_budget} steps")
    n = P * pk
    x_head = [a * (n // p) for a, p in zip(a_head, head)]
    if variant == "edge":
        x_last = pow(P, -1, pk) * P  # least positive a_k with a_k P = 1 (mod p_k)
    else:
        x_last = 1 - sum(x_head)
    allp = head + [pk]
    xs = x_head + [x_last]
    for i, (xi, pi) in enumerate(zip(xs, allp)):
        if xi % pi != 1 % pi or any(xi % pj for j, pj in enumerate(allp) if j != i):
            raise HardAssertionError(f"idempotent x_{i + 1}={xi} is malformed")
    if sum(xs) % n != 1 % n:
        raise HardAssertionError("idempotents do not sum to 1 mod n")
    subset_sums = [sum(c) for m in range(k + 1) for c in itertools.combinations(xs, m)]
    omega = ResidueSet.from_iterable(n, subset_sums)
    if omega != root_set(OmegaSpec("x_times_x_minus_1", n)):
        raise HardAssertionError("subset sums of the idempotents differ from the root set")
    a_all = tuple(a_head) + (x_last // (n // pk),)
    return ClusteredModulus(n, tuple(allp), a_all, tuple(xs), omega, variant)


def root_in_initial_interval(omega: ResidueSet, k: int) -> int | None:
    """Least root in ``(1, n/k + 1]``, or ``None``."""
    n = omega.modulus
    for r in omega.residues:
        if 1 < r and r * k <= n + k:
            return r
    return None


def vandermonde_certificate(x: Sequence[int], a: int, b: int) -> tuple[int, int, bool]:
    """``(prod_{i<j}(x_j - x_i), b**floor((k-1)^2/4), divisor | product)``."""
    xs = [int(v) for v in x]
    if b < 1:
        raise InvalidInputError(f"modulus must be positive, got {b}")
    if len(set(xs)) != len(xs):
        raise InvalidInputError("roots must be distinct")
    for v in xs:
        if (v * v - a) % b:
            raise InvalidInputError(f"x={v} does not satisfy x^2 = {a} (mod {b})")
    k = len(xs)
    prod = math.prod(xs[j] - xs[i] for i in range(k) for j in range(i + 1, k))
    div = b ** ((k - 1) ** 2 // 4)
    return prod, div, prod % div == 0


@dataclass
class ScanResult:
    """Outcome of an exhaustive window scan over a range of moduli."""

    b_max: int
    k: int
    threshold: Fraction
    worst: ClusterWitness | None
    worst_residue: int | None
    windows: int
    violations: list[int] = field(default_factory=list)
    vandermonde_failures: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations and self.vandermonde_failures == 0


def _cluster_from(b: int, a: int, x1: int, w: int) -> tuple[int, ...]:
    roots = sorted(x for x in range(b) if (x * x - a) % b == 0)
    i = roots.index(x1)
    return tuple(roots[(i + t) % len(roots)] + b * ((i + t) // len(roots)) for t in range(w))


def _exceeds(span: int, b: int, alpha: Fraction) -> bool:
    # span > b**alpha, decided exactly
    return span ** alpha.denominator > b ** alpha.numerator


def _window_scan(b_max, w, cyclic, d_filter, alpha, threads, b_min=2):
    spf = smallest_prime_factor_table(b_max)
    threads = threads or default_threads()
    shards = split_range(b_min, b_max, threads * 8, balance="quadratic")

    def run(lo, hi):
        return lo, kernels.qc_scan(lo, hi, w, cyclic, d_filter, spf)

    best = None
    windows = 0
    violations = []
    vfail = 0
    for lo, (span, arg_a, arg_x1, nwin, vf) in map_shards(run, shards, threads):
        windows += int(nwin.sum())
        vfail += int(vf.sum())
        for i in np.flatnonzero(span >= 0).tolist():
            b, s = lo + i, int(span[i])
            if not _exceeds(s, b, alpha):
                violations.append(b)
            e = math.log(s) / math.log(b) if s > 0 else float("-inf")
            if best is None or e < best[0]:
                best = (e, b, int(arg_a[i]), int(arg_x1[i]))
    worst = worst_a = None
    if best is not None:
        _, b, a, x1 = best
        worst = ClusterWitness(b, _cluster_from(b, a, x1, w))
        worst_a = a
    return worst, worst_a, windows, violations, vfail


def shortint_scan(b_max: int, k: int, cyclic: bool = True, threads: int | None = None) -> ScanResult:
    """Every ``k``-root cluster of ``x^2 = a (mod b)``, all ``a``, all ``b <= b_max``.

    Checks ``span > b**(1/2 - 1/(2l))`` exactly and the Vandermonde
    divisibility for each cluster.  ``cyclic`` includes clusters that wrap
    past a multiple of ``b`` (they are clusters of integers all the same).
    """
    if b_max < 4:
        raise InvalidInputError(f"b_max must be >= 4, got {b_max}")
    alpha = shortint_exponent(k)
    worst, worst_a, windows, violations, vfail = _window_scan(b_max, k, cyclic, 0, alpha, threads)
    return ScanResult(b_max, k, alpha, worst, worst_a, windows, violations, vfail)


def cluster_bound_scan(n_max: int, k: int, d: int = 2, threads: int | None = None) -> ScanResult:
    """No ``k+1`` roots of ``x^2 = a (mod n)`` within length ``n**alpha_d(k)``.

    Only residues whose root set modulo each prime power has at most ``d``
    elements are scanned.  Windows are non-wrapping.
    """
    if d != 2:
        raise InvalidInputError("only quadratic congruences (d=2) are scanned")
    alpha = alpha_exponent(d, k).alpha
    worst, worst_a, windows, violations, _ = _window_scan(n_max, k + 1, False, d, alpha, threads)
    return ScanResult(n_max, k, alpha, worst, worst_a, windows, violations, 0)
