"""Hot loops behind a backend switch.

``SQUARELAB_BACKEND=numpy`` forces the vectorised numpy path;
``SQUARELAB_BACKEND=numba`` (the default when numba imports) uses the
compiled kernels.  Both implement identical contracts, and the test suite
checks them against each other.
"""

from __future__ import annotations

import os

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None


def _select():
    want = os.environ.get("SQUARELAB_BACKEND", "").strip().lower()
    if want == "numpy" or numba_backend is None:
        return "numpy", numpy_backend
    if want not in ("", "numba"):
        raise ValueError(f"SQUARELAB_BACKEND must be 'numba' or 'numpy', got {want!r}")
    return "numba", numba_backend


BACKEND, _impl = _select()


def get_backend(name: str | None = None):
    """Module implementing the kernels for ``name`` (default: the active one)."""
    if name is None:
        return _impl
    if name == "numpy":
        return numpy_backend
    if name == "numba":
        if numba_backend is None:
            raise ValueError("numba is not installed")
        return numba_backend
    raise ValueError(f"unknown backend {name!r}")


square_hits = _impl.square_hits
sigma_box = _impl.sigma_box
pair_value_counts = _impl.pair_value_counts
group_window_min = _impl.group_window_min
qc_scan = _impl.qc_scan

# Largest value the int64 kernels accept (products of two roots stay in range).
INT64_SAFE = 1 << 62
