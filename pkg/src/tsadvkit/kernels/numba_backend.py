"""Numba-compiled kernels, signature-compatible with the numpy backend.

All kernels avoid fastmath so results stay within 1e-9 of the numpy path
and runs are bit-reproducible for a fixed backend. The transforms reuse the
numpy backend's cached cosine basis; recomputing cosines per call would
dominate the runtime of iterated filtered attacks.
"""

from __future__ import annotations

import math

import numpy as np
from numba import config as _numba_config
from numba import njit, prange

from .numpy_backend import _dct_basis

# workqueue avoids TBB/OMP version sniffing and is deterministic enough here
_numba_config.THREADING_LAYER = "workqueue"

NAME = "numba"


@njit(cache=True)
def _basis_matvec(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    rows = basis.shape[0]
    out = np.empty(rows)
    for k in range(rows):
        acc = 0.0
        for n in range(rows):
            acc += basis[k, n] * v[n]
        out[k] = acc
    return out


@njit(cache=True)
def _basis_matvec_t(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    rows = basis.shape[0]
    out = np.empty(rows)
    for n in range(rows):
        acc = 0.0
        for k in range(rows):
            acc += basis[k, n] * v[k]
        out[n] = acc
    return out


def dct_forward(p: np.ndarray) -> np.ndarray:
    return _basis_matvec(_dct_basis(p.shape[0]), p)


def dct_inverse(w: np.ndarray) -> np.ndarray:
    return _basis_matvec_t(_dct_basis(w.shape[0]), w)


@njit(cache=True)
def subdist(shapelet: np.ndarray, series: np.ndarray) -> tuple[float, int]:
    length = shapelet.shape[0]
    best = np.inf
    best_off = 0
    for off in range(series.shape[0] - length + 1):
        acc = 0.0
        for i in range(length):
            d = series[off + i] - shapelet[i]
            acc += d * d
        if acc < best:  # strict: first offset keeps ties
            best = acc
            best_off = off
    return math.sqrt(best), best_off


@njit(cache=True, parallel=True)
def subdist_batch(candidates: np.ndarray, series_matrix: np.ndarray) -> np.ndarray:
    num_cand = candidates.shape[0]
    length = candidates.shape[1]
    num_series = series_matrix.shape[0]
    series_len = series_matrix.shape[1]
    out = np.empty((num_cand, num_series))
    for c in prange(num_cand):
        for s in range(num_series):
            best = np.inf
            for off in range(series_len - length + 1):
                acc = 0.0
                for i in range(length):
                    d = series_matrix[s, off + i] - candidates[c, i]
                    acc += d * d
                if acc < best:
                    best = acc
            out[c, s] = math.sqrt(best)
    return out


@njit(cache=True)
def dtw_sq_cost(a: np.ndarray, b: np.ndarray) -> float:
    n = a.shape[0]
    m = b.shape[0]
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            d = a[i - 1] - b[j - 1]
            prev = acc[i - 1, j]
            if acc[i, j - 1] < prev:
                prev = acc[i, j - 1]
            if acc[i - 1, j - 1] < prev:
                prev = acc[i - 1, j - 1]
            acc[i, j] = d * d + prev
    return acc[n, m]
