"""Five squares in progression -> abc triples, via a partial-fraction identity.

For distinct t_1..t_5 the weights e_j = 1/prod_{i != j}(t_i - t_j) kill the
moments sum e_j t_j^l for l = 0..3.  Scaling to integers E_j = L e_j and
splitting by sign gives h = prod (x+t_j)^{E_j} (E_j > 0) and g (E_j < 0) of
equal degree D whose difference has degree D - 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import factorize, is_square, primes_up_to
from .errors import BudgetExceededError, HardAssertionError, InvalidInputError

# Above this degree h and g are not expanded; the degree drop is checked from power sums.
EXPAND_LIMIT = 600
# Brent-rho iterations allowed per split when factoring c.
FACTOR_BUDGET = 200_000
# Cofactors beyond this are not attacked with rho at all; rad is then bounded by the cofactor.
RHO_MAX_BITS = 256


def poly_mul(p: list[int], q: list[int]) -> list[int]:
    """Product of coefficient lists (lowest degree first)."""
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def poly_pow(p: list[int], e: int) -> list[int]:
    out = [1]
    while e:
        if e & 1:
            out = poly_mul(out, p)
        p = poly_mul(p, p)
        e >>= 1
    return out


def poly_sub(p: list[int], q: list[int]) -> list[int]:
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_eval(p: Sequence[int], x) -> Fraction | int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _top_coefficients(points: Sequence[Fraction], mult: Sequence[int], m: int) -> list[Fraction]:
    """Coefficients of ``x^D, x^(D-1), ..., x^(D-m)`` in ``prod (x + t_j)^{mult_j}`` via Newton's identities."""
    p = [None] + [sum(k * (-t) ** i for t, k in zip(points, mult)) for i in range(1, m + 1)]
    e = [Fraction(1)]
    for i in range(1, m + 1):
        s = sum((-1) ** (j - 1) * e[i - j] * p[j] for j in range(1, i + 1))
        e.append(Fraction(s) / i)
    return [(-1) ** i * e[i] for i in range(m + 1)]


def _weights(points: Sequence[Fraction]) -> list[Fraction]:
    out = []
    for j, tj in enumerate(points):
        prod = math.prod((ti - tj for i, ti in enumerate(points) if i != j), start=Fraction(1))
        out.append(1 / prod)
    return out


@dataclass(frozen=True)
class PartialFractionSystem:
    t: tuple
    e: tuple[Fraction, ...]
    L: int
    E: tuple[int, ...]
    D: int
    deg_f: int
    f_leading: Fraction
    h: tuple[int, ...] | None
    g: tuple[int, ...] | None
    f: tuple[int, ...] | None


def partial_fraction_weights(t: Sequence, expand_limit: int = EXPAND_LIMIT) -> PartialFractionSystem:
    """Weights, scaling and the cancelling pair ``h, g`` for five distinct points.

    ``t`` may be integers or rationals.  Polynomials are expanded only when
    ``D <= expand_limit``; the degree drop is asserted either way.
    """
    pts = [Fraction(v) for v in t]
    if len(pts) != 5:
        raise InvalidInputError(f"need exactly 5 points, got {len(pts)}")
    if len(set(pts)) != 5:
        raise InvalidInputError(f"points must be distinct, got {list(t)}")
    e = _weights(pts)
    for ell in range(4):
        if sum(ej * tj**ell for ej, tj in zip(e, pts)) != 0:
            raise HardAssertionError(f"moment {ell} does not vanish")
    L = math.lcm(*(w.denominator for w in e))
    E = [int(L * w) for w in e]
    D = sum(x for x in E if x > 0)
    if D != -sum(x for x in E if x < 0):
        raise HardAssertionError("h and g have different degrees")
    pos = [(tj, x) for tj, x in zip(pts, E) if x > 0]
    neg = [(tj, -x) for tj, x in zip(pts, E) if x < 0]
    if not pos or not neg:
        raise HardAssertionError("degenerate split: h or g is an empty product")
    top_h = _top_coefficients([p for p, _ in pos], [k for _, k in pos], 4)
    top_g = _top_coefficients([p for p, _ in neg], [k for _, k in neg], 4)
    if top_h[:4] != top_g[:4]:
        raise HardAssertionError("leading coefficients of h and g differ: no degree drop")
    lead = top_h[4] - top_g[4]
    if lead == 0 or lead != Fraction(-L, 4):
        raise HardAssertionError(f"coefficient of x^(D-4) in h - g is {lead}, expected {-L}/4")
    h = g = f = None
    if D <= expand_limit and all(p.denominator == 1 for p in pts):
        h = [1]
        for tj, k in pos:
            h = poly_mul(h, poly_pow([int(tj), 1], k))
        g = [1]
        for tj, k in neg:
            g = poly_mul(g, poly_pow([int(tj), 1], k))
        f = poly_sub(h, g)
        if len(f) - 1 != D - 4 or f[-1] != Fraction(-L, 4):
            raise HardAssertionError(f"expanded h - g has degree {len(f) - 1}, expected {D - 4}")
        h, g, f = tuple(h), tuple(g), tuple(f)
    return PartialFractionSystem(tuple(t), tuple(e), L, tuple(E), D, D - 4, lead, h, g, f)


# ------------------------------------------------------------------ abc triples


@dataclass(frozen=True)
class AbcTriple:
    a: int
    b: int
    c: int
    rad: int
    rad_exact: bool
    quality: float
    sqrt_product: int | None = None
    log_B_over_log_A: float | None = None


def radical_bounded(n: int, budget: int = FACTOR_BUDGET) -> tuple[int, bool]:
    """``(rad(n), True)``, or ``(upper bound, False)`` if some cofactor will not split in budget."""
    if n < 1:
        raise InvalidInputError("n must be positive")
    rad = 1
    for p in primes_up_to(10**5).tolist():
        if n % p == 0:
            rad *= p
            while n % p == 0:
                n //= p
        if n == 1:
            return rad, True
    if n.bit_length() > RHO_MAX_BITS:
        return rad * n, False
    try:
        return rad * math.prod(factorize(n, budget=budget).primes()), True
    except BudgetExceededError:
        r = math.isqrt(n)
        return rad * (r if r * r == n else n), False


def _orient(u: int, v: int, w: int) -> tuple[int, int, int]:
    """Three nonzero integers with ``u + v + w = 0`` as coprime positive ``a + b = c``."""
    if u + v + w != 0 or 0 in (u, v, w):
        raise HardAssertionError(f"{u} + {v} + {w} is not a nondegenerate zero sum")
    same = [x for x in (u, v, w) if (x > 0) == (u > 0)]
    other = [x for x in (u, v, w) if (x > 0) != (u > 0)]
    pair, single = (same, other) if len(same) == 2 else (other, same)
    a, b = sorted(abs(x) for x in pair)
    c = abs(single[0])
    gcd = math.gcd(a, b)
    return a // gcd, b // gcd, c // gcd


def _triple(a: int, b: int, c: int, budget: int, **extra) -> AbcTriple:
    rad, exact = 1, True
    for n in (a, b, c):
        r, ok = radical_bounded(n, budget)
        rad = rad * r // math.gcd(rad, r)
        exact &= ok
    quality = math.log(c) / math.log(rad) if rad > 1 else math.inf
    return AbcTriple(a, b, c, rad, exact, quality, **extra)


def abc_from_square_ap(A: int, B: int, t: Sequence[int], variant: str = "direct", budget: int = FACTOR_BUDGET) -> AbcTriple:
    """abc triple from five squares ``A + t_j B``.

    ``direct`` evaluates ``B^D h(A/B)`` and ``B^D g(A/B)``; ``reciprocal`` uses the
    points ``1/t_j`` at ``B/A`` and clears the ``t_j`` denominators.
    """
    if B < 1:
        raise InvalidInputError("B must be positive")
    if math.gcd(A, B) != 1:
        raise InvalidInputError(f"A and B must be coprime, got gcd {math.gcd(A, B)}")
    t = [int(v) for v in t]
    vals = [A + tj * B for tj in t]
    bad = [v for v in vals if v <= 0 or is_square(v) is None]
    if bad:
        raise InvalidInputError(f"not positive squares: {bad}")
    if variant == "direct":
        sys_ = partial_fraction_weights(t, expand_limit=0)
        E = sys_.E
        H = math.prod(v**x for v, x in zip(vals, E) if x > 0)
        G = math.prod(v ** (-x) for v, x in zip(vals, E) if x < 0)
    elif variant == "reciprocal":
        if 0 in t:
            raise InvalidInputError("reciprocal variant needs every t_j nonzero")
        base = partial_fraction_weights(t, expand_limit=0)
        recip = partial_fraction_weights([Fraction(1, tj) for tj in t], expand_limit=0)
        prod_t = math.prod(t)
        for ej, es, tj in zip(base.e, recip.e, t):
            if es != ej * tj**3 * prod_t:
                raise HardAssertionError("reciprocal weights disagree with e_j t_j^3 prod t_i")
        E = recip.E
        # A^D h*(B/A) has factors (A + t_j B)/t_j; multiplying through by prod |t_j|^{|E_j|} clears them
        H = math.prod(v**x for v, x in zip(vals, E) if x > 0) * math.prod(tj ** (-x) for tj, x in zip(t, E) if x < 0)
        G = math.prod(v ** (-x) for v, x in zip(vals, E) if x < 0) * math.prod(tj**x for tj, x in zip(t, E) if x > 0)
    else:
        raise InvalidInputError(f"variant must be 'direct' or 'reciprocal', got {variant!r}")
    a, b, c = _orient(H, -G, G - H)
    sqrt_prod = math.prod(is_square(v) for v in vals)
    ratio = math.log(B) / math.log(abs(A)) if abs(A) > 1 else None
    return _triple(a, b, c, budget, sqrt_product=sqrt_prod, log_B_over_log_A=ratio)


def abc_quality(a: int, b: int, budget: int = FACTOR_BUDGET) -> AbcTriple:
    """``c = a + b`` and ``log c / log rad(abc)``."""
    if a < 1 or b < 1:
        raise InvalidInputError("a and b must be positive")
    if math.gcd(a, b) != 1:
        raise InvalidInputError(f"a and b must be coprime, got gcd {math.gcd(a, b)}")
    return _triple(a, b, a + b, budget)
