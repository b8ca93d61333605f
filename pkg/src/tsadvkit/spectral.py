"""Orthonormal DCT-II analysis, high-pass filtering, and low-frequency norms.

The transform pair uses the orthonormal constants d_0 = sqrt(1/T) and
d_k = sqrt(2/T) for k > 0, which make ``idct(dct(p)) == p`` and preserve the
L2 norm (Parseval). Filtering zeroes the coefficients below a cutoff and
optionally rescales the result back to the input norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .series import TimeSeries

_NORM_TOL = 1e-12


class AllLowFrequencyError(ValueError):
    """Raised when filtering would erase the whole signal."""


@dataclass(frozen=True)
class FilterSpec:
    """High-pass filter parameters: drop coefficients k < cutoff."""

    cutoff: int
    preserve_l2: bool = True

    def validate(self, length: int) -> None:
        if not 0 <= self.cutoff <= length:
            raise ValueError(f"cutoff must lie in [0, {length}], got {self.cutoff}")


def dct(p: TimeSeries) -> np.ndarray:
    """Forward DCT-II spectrum of ``p``, same length, norm-preserving."""
    return kernels.dct_forward(np.asarray(p, dtype=np.float64))


def idct(w: np.ndarray) -> TimeSeries:
    """Exact inverse of :func:`dct`."""
    return kernels.dct_inverse(np.asarray(w, dtype=np.float64))


def highpass(p: TimeSeries, spec: FilterSpec) -> TimeSeries:
    """Zero spectrum coefficients below the cutoff and invert.

    With ``preserve_l2`` the filtered signal is rescaled to the input norm;
    the scaling is a scalar multiple, so the zeroed band stays zero. A cutoff
    of 0 is an exact no-op.
    """
    p = np.asarray(p, dtype=np.float64)
    spec.validate(p.shape[0])
    if spec.cutoff == 0:
        return p.copy()
    w = dct(p)
    w[: spec.cutoff] = 0.0
    out = idct(w)
    if spec.preserve_l2:
        out_norm = np.linalg.norm(out)
        if out_norm <= _NORM_TOL:
            raise AllLowFrequencyError("perturbation entirely low-frequency")
        out *= np.linalg.norm(p) / out_norm
    elif np.linalg.norm(out) <= _NORM_TOL:
        raise AllLowFrequencyError("perturbation entirely low-frequency")
    return out


def lf_norm(p: TimeSeries, cutoff: int) -> float:
    """L2 norm of the spectrum coefficients below the cutoff."""
    p = np.asarray(p, dtype=np.float64)
    if not 0 <= cutoff <= p.shape[0]:
        raise ValueError(f"cutoff must lie in [0, {p.shape[0]}], got {cutoff}")
    if cutoff == 0:
        return 0.0
    return float(np.linalg.norm(dct(p)[:cutoff]))


def dc_magnitude(p: TimeSeries) -> float:
    """|sum_n p_n|, the direct-current content of a perturbation."""
    return float(abs(np.sum(p)))
