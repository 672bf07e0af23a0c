"""In-place zeta and Mobius transforms over the subset lattice.

All three run in O(n * 2^n) on a dense vector indexed by subset mask. The
vector is viewed as an n-dimensional 2x...x2 array so each bit becomes one
vectorized axis update.
"""

from __future__ import annotations

import numpy as np


def _axis_slices(n: int, axis: int):
    lo = tuple(0 if i == axis else slice(None) for i in range(n))
    hi = tuple(1 if i == axis else slice(None) for i in range(n))
    return lo, hi


def subset_sum(arr: np.ndarray, n: int) -> None:
    """arr[A] <- sum of arr[B] over all B subset of A."""
    view = arr.reshape([2] * n)
    for axis in range(n):
        lo, hi = _axis_slices(n, axis)
        view[hi] += view[lo]


def superset_sum(arr: np.ndarray, n: int) -> None:
    """arr[A] <- sum of arr[B] over all B superset of A (masses to commonalities)."""
    view = arr.reshape([2] * n)
    for axis in range(n):
        lo, hi = _axis_slices(n, axis)
        view[lo] += view[hi]


def superset_diff(arr: np.ndarray, n: int) -> None:
    """Inverse of superset_sum (commonalities back to masses)."""
    view = arr.reshape([2] * n)
    for axis in range(n):
        lo, hi = _axis_slices(n, axis)
        view[lo] -= view[hi]
