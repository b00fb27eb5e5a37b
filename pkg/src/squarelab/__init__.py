"""Exact-arithmetic experiments on squares: progressions, sumsets, congruences, circles."""

__version__ = "0.1.0"
