"""Exact integer, rational and Gaussian-integer arithmetic.

Everything here is a pure function of its arguments.  Rationals are
:class:`fractions.Fraction`; integers are Python ints of any size.
"""

from __future__ import annotations

import math
import operator
import random
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceededError, InvalidInputError

Rational = Fraction

# Deterministic Miller-Rabin witnesses; correct for every n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_EXTRA_ROUNDS = 24

_TRIAL_LIMIT = 1 << 10


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise InvalidInputError(f"malformed factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise InvalidInputError(f"factors multiply to {prod}, not {self.value}")

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def prime_powers(self) -> list[int]:
        return [p**e for p, e in self.factors]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)


@dataclass(frozen=True)
class ResidueSet:
    modulus: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidInputError(f"modulus must be positive, got {self.modulus}")
        prev = -1
        for r in self.residues:
            if r <= prev or r >= self.modulus:
                raise InvalidInputError("residues must be strictly increasing in [0, modulus)")
            prev = r

    @classmethod
    def from_iterable(cls, modulus: int, residues: Iterable[int]) -> "ResidueSet":
        return cls(modulus, tuple(sorted({r % modulus for r in residues})))

    def __len__(self) -> int:
        return len(self.residues)

    def __iter__(self) -> Iterator[int]:
        return iter(self.residues)

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, int):
            return False
        r = x % self.modulus
        i = bisect_left(self.residues, r)
        return i < len(self.residues) and self.residues[i] == r


@dataclass(frozen=True)
class GaussianInteger:
    re: int
    im: int

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conj(self) -> "GaussianInteger":
        return GaussianInteger(self.re, -self.im)

    def __add__(self, other: "GaussianInteger") -> "GaussianInteger":
        return GaussianInteger(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInteger") -> "GaussianInteger":
        return GaussianInteger(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianInteger":
        return GaussianInteger(-self.re, -self.im)

    def __mul__(self, other: "GaussianInteger") -> "GaussianInteger":
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianInteger(a * c - b * d, a * d + b * c)

    def __pow__(self, e: int) -> "GaussianInteger":
        if e < 0:
            raise InvalidInputError("negative powers are not Gaussian integers")
        result = GaussianInteger(1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def as_tuple(self) -> tuple[int, int]:
        return (self.re, self.im)


UNITS = (GaussianInteger(1, 0), GaussianInteger(0, 1), GaussianInteger(-1, 0), GaussianInteger(0, -1))


# ---------------------------------------------------------------- primes


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> np.ndarray:
    """Sieve of Eratosthenes; int64 array of primes <= n."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=8)
def smallest_prime_factor_table(n: int) -> np.ndarray:
    """spf[m] = least prime dividing m, for 2 <= m <= n (spf[0] = spf[1] = 0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in primes_up_to(math.isqrt(n)):
        p = int(p)
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = spf == 0
    rest[:2] = False
    spf[rest] = np.flatnonzero(rest)
    return spf


def _small_primes() -> list[int]:
    return [int(p) for p in primes_up_to(_TRIAL_LIMIT)]


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if any(witness(a) for a in _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(n)
    return not any(witness(rng.randrange(2, n - 1)) for _ in range(_MR_EXTRA_ROUNDS))


is_prime = is_probable_prime


def _brent_rho(n: int, rng: random.Random, budget: int) -> int:
    """Return a non-trivial factor of composite odd n."""
    steps = 0
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
            steps += r
            if steps > budget:
                raise BudgetExceededError(f"rho budget {budget} exhausted on {n}")
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, budget: int | None = None) -> Factorization:
    """Prime factorization of ``n >= 1``.

    Trial division by small primes, then Brent's rho seeded from ``n`` so the
    output never depends on call order.  ``budget`` caps rho iterations per
    split; exceeding it raises :class:`BudgetExceededError`.
    """
    if isinstance(n, bool):
        raise InvalidInputError("factorize expects an int, got bool")
    try:
        n = operator.index(n)
    except TypeError:
        raise InvalidInputError(f"factorize expects an int, got {type(n).__name__}") from None
    if n < 1:
        raise InvalidInputError(f"factorize requires n >= 1, got {n}")
    found: dict[int, int] = {}
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        rng = random.Random(n)
        stack = [m]
        limit = budget if budget is not None else 1 << 62
        while stack:
            x = stack.pop()
            if x == 1:
                continue
            if is_probable_prime(x):
                found[x] = found.get(x, 0) + 1
                continue
            r = math.isqrt(x)
            if r * r == x:
                stack += [r, r]
                continue
            d = _brent_rho(x, rng, limit)
            stack += [d, x // d]
    return Factorization(n, tuple(sorted(found.items())))


def radical(n: int) -> int:
    """Product of the distinct primes dividing ``n``; ``radical(1) == 1``."""
    return math.prod(factorize(n).primes())


def is_square(n: int) -> int | None:
    """Return ``r >= 0`` with ``r*r == n``, or ``None``."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise InvalidInputError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ------------------------------------------------------- modular square roots


def _tonelli_shanks(a: int, p: int) -> int | None:
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _unit_roots(u: int, p: int, m: int) -> set[int]:
    """Roots of y^2 = u (mod p^m) for u prime to p."""
    q = p**m
    u %= q
    if p == 2:
        if m <= 3:
            return {y for y in range(q) if (y * y - u) % q == 0}
        if u % 8 != 1:
            return set()
        r = 1
        for i in range(3, m):
            if (r * r - u) % (1 << (i + 1)):
                r += 1 << (i - 1)
        half = q >> 1
        return {r % q, -r % q, (r + half) % q, (-r + half) % q}
    r = _tonelli_shanks(u, p)
    if r is None:
        return set()
    pk = p
    while pk < q:
        pk = min(pk * pk, q)
        r = (r - (r * r - u) * pow(2 * r, -1, pk)) % pk
    return {r % q, -r % q}


def sqrt_mod_prime_power(a: int, p: int, e: int) -> ResidueSet:
    """All ``x`` in ``[0, p**e)`` with ``x*x == a (mod p**e)``."""
    if e < 1:
        raise InvalidInputError(f"exponent must be >= 1, got {e}")
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    q = p**e
    a %= q
    if a == 0:
        return ResidueSet(q, tuple(range(0, q, p ** ((e + 1) // 2))))
    v = valuation(a, p)
    if v % 2:
        return ResidueSet(q, ())
    h, m = v // 2, e - v
    base = p**h
    step = p**m
    roots = {base * (y + j * step) % q for y in _unit_roots(a // p**v, p, m) for j in range(base)}
    return ResidueSet(q, tuple(sorted(roots)))


def crt_combine(parts: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Combine ``[(residue, modulus), ...]`` with pairwise coprime moduli."""
    x, n = 0, 1
    for r, m in parts:
        if m < 1:
            raise InvalidInputError(f"modulus must be positive, got {m}")
        if math.gcd(n, m) != 1:
            raise InvalidInputError(f"moduli not coprime: {n} and {m}")
        t = (r - x) * pow(n, -1, m) % m if m > 1 else 0
        x += n * t
        n *= m
        x %= n
    return x, n


# ------------------------------------------------------ Gaussian primes


def two_squares_prime(p: int) -> tuple[int, int]:
    """``(a, b)`` with ``a > b > 0`` and ``a*a + b*b == p`` for prime ``p = 1 mod 4``."""
    if p % 4 != 1 or not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not a prime congruent to 1 mod 4")
    r = _tonelli_shanks(p - 1, p)
    assert r is not None
    a, b = p, r
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    c = is_square(p - b * b)
    assert c is not None, "Cornacchia descent failed"
    return (max(b, c), min(b, c))


def gaussian_prime_above(p: int) -> GaussianInteger:
    """A Gaussian prime of norm ``p`` (``p`` = 2 or ``p = 1 mod 4``)."""
    if p == 2:
        return GaussianInteger(1, 1)
    a, b = two_squares_prime(p)
    return GaussianInteger(a, b)
