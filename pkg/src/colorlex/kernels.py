"""Kernel dispatch: compiled extension when available, Python otherwise.

Both backends are result-identical by construction (fixed accumulation
order for distance sums, integer tallies for the simulation), so which
one is active never changes any output. Set COLORLEX_PURE=1 to force
the Python fallback, e.g. for benchmarking.
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("COLORLEX_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

USING_COMPILED = _impl is not _kernels_py


def backend_name() -> str:
    return "compiled" if USING_COMPILED else "python"


def mean_pairwise_distance(pts) -> float:
    """Mean Euclidean distance over all ordered row pairs of an (n, 3) array."""
    arr = np.ascontiguousarray(pts, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) array, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError("need at least two points")
    return float(_impl.mean_pairwise_distance(arr))


def simulate_counts(offsets, words, applicable, mode: int):
    """Dispatch the pair-enumeration kernel; see `_kernels_py.simulate_counts`."""
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    words = np.ascontiguousarray(words, dtype=np.int64)
    applicable = np.ascontiguousarray(applicable, dtype=np.uint8)
    if mode not in (0, 1, 2):
        raise ValueError(f"unknown mode {mode}")
    acc_twice, counts = _impl.simulate_counts(offsets, words, applicable, mode)
    return int(acc_twice), counts
