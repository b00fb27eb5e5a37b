"""Norms of trigonometric polynomials with square (or arbitrary) frequencies.

Even norms are computed exactly from the coefficient self-convolution;
quadrature is kept for odd exponents and as a cross-check.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import InvalidInputError

# Below this |sin(pi*theta)| the Fejer closed form is replaced by its limit N.
FEJER_SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class TrigPolySpec:
    """``f(theta) = sum a_k e(n_k theta)`` with rational coefficients."""

    terms: Mapping[int, Fraction]

    def __post_init__(self):
        clean = {}
        for n, a in self.terms.items():
            if not isinstance(n, (int, np.integer)) or n < 0:
                raise InvalidInputError(f"frequencies must be nonnegative integers, got {n!r}")
            clean[int(n)] = Fraction(a)
        if not any(clean.values()):
            raise InvalidInputError("at least one coefficient must be nonzero")
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def unit(cls, frequencies: Iterable[int]) -> "TrigPolySpec":
        freqs = list(frequencies)
        if len(set(freqs)) != len(freqs):
            raise InvalidInputError("frequencies must be distinct")
        return cls({n: Fraction(1) for n in freqs})

    @classmethod
    def squares(cls, ks: Iterable[int], coefficients: Iterable | None = None) -> "TrigPolySpec":
        ks = list(ks)
        coeffs = [1] * len(ks) if coefficients is None else list(coefficients)
        return cls({k * k: Fraction(a) for k, a in zip(ks, coeffs)})

    @property
    def max_frequency(self) -> int:
        return max(self.terms)

    def is_unit(self) -> bool:
        return all(a == 1 for a in self.terms.values())


@dataclass(frozen=True)
class WindowEnergyReport:
    N: int
    Delta: int
    n_terms: int
    l4_fourth: int
    model: float
    ratio: float
    delta_vs_logN_over_N: float
    delta_vs_N_over_logN: float


def l2_squared(f: TrigPolySpec) -> Fraction:
    return sum((a * a for a in f.terms.values()), Fraction(0))


def _unit_energy(freqs: list[int]) -> int:
    if max(freqs) < kernels.INT64_SAFE // 4 and len(freqs) > 1:
        _, counts = kernels.pair_value_counts(np.array(freqs, dtype=np.int64), 1)
        return int(np.sum(counts.astype(object) ** 2))
    conv: dict[int, int] = defaultdict(int)
    for x in freqs:
        for y in freqs:
            conv[x + y] += 1
    return sum(c * c for c in conv.values())


def l4_fourth_exact(f: TrigPolySpec) -> Fraction:
    """``||f||_4^4 = sum_m (sum_{n_k + n_j = m} a_k a_j)**2`` exactly."""
    coeffs = list(f.terms.values())
    if len(set(coeffs)) == 1:
        return coeffs[0] ** 4 * _unit_energy(list(f.terms))
    den = math.lcm(*(a.denominator for a in coeffs))
    scaled = {n: int(a * den) for n, a in f.terms.items()}
    conv: dict[int, int] = defaultdict(int)
    items = list(scaled.items())
    for n1, c1 in items:
        for n2, c2 in items:
            conv[n1 + n2] += c1 * c2
    return Fraction(sum(c * c for c in conv.values()), den**4)


def _midpoint_values(f: TrigPolySpec, grid_points: int) -> np.ndarray:
    c = np.zeros(grid_points, dtype=np.complex128)
    for n, a in f.terms.items():
        c[n] += float(a) * np.exp(1j * np.pi * n / grid_points)
    return np.fft.ifft(c) * grid_points


def lp_norm_quadrature(f: TrigPolySpec, p: float, grid_points: int) -> float:
    """Composite midpoint estimate of ``(int_0^1 |f|^p)^(1/p)``."""
    if p < 1:
        raise InvalidInputError(f"p must be >= 1, got {p}")
    need = 4 * f.max_frequency
    if grid_points < max(need, 1):
        raise InvalidInputError(f"grid_points={grid_points} too coarse; need at least {need}")
    vals = np.abs(_midpoint_values(f, grid_points))
    return float(np.mean(vals**p) ** (1.0 / p))


def norm_ratio(f: TrigPolySpec, p: float, grid_points: int | None = None) -> float:
    """Empirical ``||f||_p / ||f||_2`` (exact denominator)."""
    grid = grid_points or max(8 * f.max_frequency, 64)
    return lp_norm_quadrature(f, p, grid) / math.sqrt(float(l2_squared(f)))


def fejer_eval(N: int, theta: float) -> float:
    """Fejer kernel ``sum_{|j|<=N} (1-|j|/N) e(j theta)`` via its closed form."""
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    s = math.sin(math.pi * theta)
    if abs(s) < FEJER_SINGULAR_TOL:
        return float(N)
    return math.sin(math.pi * N * theta) ** 2 / (N * s * s)


def fejer_grid(N: int, grid_points: int) -> np.ndarray:
    """Kernel values at the midpoints ``(j + 1/2)/grid_points``."""
    theta = (np.arange(grid_points) + 0.5) / grid_points
    s = np.sin(np.pi * theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.sin(np.pi * N * theta) ** 2 / (N * s * s)
    return np.where(np.abs(s) < FEJER_SINGULAR_TOL, float(N), v)


def fejer_l2_squared(N: int) -> Fraction:
    return sum((Fraction(N - abs(j), N) ** 2 for j in range(-N, N + 1)), Fraction(0))


def rudin_pairing(elements: Iterable[int], a: int, b: int, N: int, p: float, grid_points: int):
    """Both sides of the Fejer-kernel pairing used to bound squares in ``a + ib``.

    ``elements`` are members of ``a + ib, 1 <= i <= N``.  Returns
    ``(lhs, sigma, upper)`` where ``lhs`` is the exact value of
    ``int g(-t) e((a+bm)t) kappa_N(bt) dt`` (so ``lhs >= sigma/2``) and
    ``upper = ||g||_p ||kappa_N||_q`` by quadrature, ``1/p + 1/q = 1``.
    """
    elems = sorted(set(elements))
    if p <= 1:
        raise InvalidInputError("p must exceed 1")
    m = (N + 1) // 2
    lhs = Fraction(0)
    for n in elems:
        i, r = divmod(n - a, b)
        if r or not 1 <= i <= N:
            raise InvalidInputError(f"{n} is not in the progression {a} + {b}i, 1 <= i <= {N}")
        lhs += Fraction(N - abs(i - m), N)
    g = TrigPolySpec.unit(elems)
    grid = max(grid_points, 4 * g.max_frequency, 4 * N)
    q = p / (p - 1)
    kappa_q = float(np.mean(fejer_grid(N, grid) ** q) ** (1.0 / q))
    return lhs, len(elems), lp_norm_quadrature(g, p, grid) * kappa_q


def window_energy(N: int, Delta: int) -> WindowEnergyReport:
    """Exact additive energy of ``{k^2 : N <= k <= N + Delta}`` against ``Delta^2 + Delta^3 log N / N``."""
    if N < 2 or Delta < 0 or Delta > N:
        raise InvalidInputError(f"need N >= 2 and 0 <= Delta <= N, got N={N}, Delta={Delta}")
    freqs = [k * k for k in range(N, N + Delta + 1)]
    l4 = _unit_energy(freqs) if len(freqs) > 1 else 1
    logn = math.log(N)
    model = Delta**2 + Delta**3 * logn / N
    return WindowEnergyReport(
        N=N,
        Delta=Delta,
        n_terms=len(freqs),
        l4_fourth=l4,
        model=model,
        ratio=l4 / model if model > 0 else math.inf,
        delta_vs_logN_over_N=Delta / (logn / N),
        delta_vs_N_over_logN=Delta / (N / logn),
    )


def l4_growth_ratio(x: int) -> float:
    """``||sum_{k<=x} e(k^2 t)||_4^4 / (x^2 log x)``."""
    if x < 2:
        raise InvalidInputError("x must be >= 2")
    return _unit_energy([k * k for k in range(1, x + 1)]) / (x * x * math.log(x))
