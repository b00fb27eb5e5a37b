import math

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def brute_square_roots(a: int, n: int) -> list[int]:
    return [x for x in range(n) if (x * x - a) % n == 0]


def brute_circle(M: int) -> set[tuple[int, int]]:
    r = math.isqrt(M)
    return {(x, y) for x in range(-r, r + 1) for y in range(-r, r + 1) if x * x + y * y == M}


@pytest.fixture
def oracle():
    class O:
        square_roots = staticmethod(brute_square_roots)
        circle = staticmethod(brute_circle)

    return O


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
