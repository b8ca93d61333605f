"""Foundational series types and vector operations.

A time series is a 1-D float64 :class:`numpy.ndarray` of length T >= 2 with
only finite values; :func:`as_series` enforces that contract at the
boundaries. Datasets bundle an (N, T) matrix with integer labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Alias used in signatures; a validated 1-D float64 array.
TimeSeries = np.ndarray

_STD_TOL = 1e-12


def as_series(values) -> np.ndarray:
    """Validate and convert to a float64 time series array."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"time series must be 1-D, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError("time series must have at least 2 values")
    if not np.all(np.isfinite(arr)):
        raise ValueError("time series contains non-finite values")
    return arr


@dataclass(frozen=True)
class LabeledDataset:
    """Series of one shared length plus contiguous integer class labels.

    Immutable after construction (arrays are marked read-only), so instances
    are safe to share across concurrent workers.
    """

    X: np.ndarray
    y: np.ndarray
    num_classes: int
    original_labels: tuple[float, ...] = field(default=())

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.X, dtype=np.float64))
        y = np.ascontiguousarray(np.asarray(self.y, dtype=np.int64))
        if X.ndim != 2:
            raise ValueError("X must be a 2-D (N, T) array")
        if X.shape[1] < 2:
            raise ValueError("series length must be at least 2")
        if not np.all(np.isfinite(X)):
            raise ValueError("dataset contains non-finite values")
        if y.shape != (X.shape[0],):
            raise ValueError("labels must align one-to-one with series")
        if self.num_classes < 1:
            raise ValueError("num_classes must be positive")
        if y.size and (y.min() < 0 or y.max() >= self.num_classes):
            raise ValueError("labels must lie in 0..num_classes-1")
        present = np.unique(y)
        if present.size != self.num_classes:
            missing = sorted(set(range(self.num_classes)) - set(present.tolist()))
            raise ValueError(f"classes {missing} have no series")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if not self.original_labels:
            object.__setattr__(
                self, "original_labels", tuple(float(c) for c in range(self.num_classes))
            )

    @property
    def length(self) -> int:
        """Shared series length T."""
        return self.X.shape[1]

    def __len__(self) -> int:
        return self.X.shape[0]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y, minlength=self.num_classes)


def l2_distance(a: TimeSeries, b: TimeSeries) -> float:
    """Euclidean distance sqrt(sum_i (a_i - b_i)^2)."""
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    return float(np.sqrt(np.sum(np.square(a - b))))


def cosine_similarity(a: TimeSeries, b: TimeSeries) -> float:
    """dot(a, b) / (||a||_2 * ||b||_2), in [-1, 1]."""
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na <= _STD_TOL or nb <= _STD_TOL:
        raise ValueError("degenerate vector")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def znormalize(a: TimeSeries) -> TimeSeries:
    """Shift to mean 0 and scale to unit standard deviation.

    Constant series (sd below 1e-12) come back as all zeros instead of
    erroring; near-constant rows do occur in real archive files.
    """
    centered = a - np.mean(a)
    sd = np.std(centered)
    if sd <= _STD_TOL:
        return np.zeros_like(centered)
    return centered / sd


def znormalize_matrix(X: np.ndarray) -> np.ndarray:
    """Row-wise znormalize for an (N, T) matrix."""
    centered = X - X.mean(axis=1, keepdims=True)
    sd = centered.std(axis=1, keepdims=True)
    out = np.zeros_like(centered)
    ok = sd[:, 0] > _STD_TOL
    out[ok] = centered[ok] / sd[ok]
    return out
