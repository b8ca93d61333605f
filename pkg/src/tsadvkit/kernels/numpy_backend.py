"""Pure-NumPy implementations of the hot kernels.

This backend is always available and serves as the reference the numba
backend is checked against. Select it with ``TSADVKIT_BACKEND=numpy``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

NAME = "numpy"


@lru_cache(maxsize=32)
def _dct_basis(length: int) -> np.ndarray:
    # Orthonormal DCT-II basis: B[k, n] = d_k * cos(pi*(2n+1)*k / (2T)),
    # d_0 = sqrt(1/T), d_k = sqrt(2/T) for k > 0. B @ B.T = I.
    n = np.arange(length)
    k = n[:, None]
    basis = np.cos(np.pi * (2.0 * n + 1.0) * k / (2.0 * length))
    scale = np.full(length, np.sqrt(2.0 / length))
    scale[0] = np.sqrt(1.0 / length)
    return scale[:, None] * basis


def dct_forward(p: np.ndarray) -> np.ndarray:
    return _dct_basis(p.shape[0]) @ p


def dct_inverse(w: np.ndarray) -> np.ndarray:
    return _dct_basis(w.shape[0]).T @ w


def subdist(shapelet: np.ndarray, series: np.ndarray) -> tuple[float, int]:
    """Minimum Euclidean distance over all aligned windows, first offset wins."""
    windows = np.lib.stride_tricks.sliding_window_view(series, shapelet.shape[0])
    sq = np.square(windows - shapelet).sum(axis=1)
    offset = int(np.argmin(sq))
    return float(np.sqrt(sq[offset])), offset


def subdist_batch(candidates: np.ndarray, series_matrix: np.ndarray) -> np.ndarray:
    """Distance of every candidate (K, l) to every series (N, T) -> (K, N)."""
    windows = np.lib.stride_tricks.sliding_window_view(
        series_matrix, candidates.shape[1], axis=1
    )
    out = np.empty((candidates.shape[0], series_matrix.shape[0]))
    for i, cand in enumerate(candidates):
        sq = np.square(windows - cand).sum(axis=2)
        out[i] = np.sqrt(sq.min(axis=1))
    return out


def dtw_sq_cost(a: np.ndarray, b: np.ndarray) -> float:
    """Accumulated squared-difference DTW cost (before the final sqrt).

    Plain O(n*m) dynamic program; the recurrence is inherently sequential,
    so this fallback runs Python loops over a preallocated table.
    """
    n, m = a.shape[0], b.shape[0]
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, n + 1):
        ai = a[i - 1]
        row = acc[i]
        prev = acc[i - 1]
        for j in range(1, m + 1):
            d = ai - b[j - 1]
            row[j] = d * d + min(prev[j], row[j - 1], prev[j - 1])
    return float(acc[n, m])
