"""Class-wise discovery of top-1 discriminative shapelets by information gain.

A candidate subsequence splits the training set at a distance threshold;
the candidate whose best threshold yields the largest entropy decrease wins.
Scoring uses one-vs-rest labels per class, so each class gets the window
that best separates it from everything else.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .series import LabeledDataset, TimeSeries


def round_half_up(x: float) -> int:
    """Round with .5 going up, independent of banker's rounding."""
    return int(np.floor(x + 0.5))


def shapelet_length(length_ratio: float, series_length: int) -> int:
    """l = round(R*T), clamped to [1, T]."""
    return min(max(round_half_up(length_ratio * series_length), 1), series_length)


@dataclass(frozen=True)
class Shapelet:
    """A class's top discriminative subsequence and its split statistics."""

    class_id: int
    values: np.ndarray
    source_series: int
    source_offset: int
    threshold: float
    info_gain: float

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]

    def to_dict(self) -> dict:
        return {
            "class_id": self.class_id,
            "source_series": self.source_series,
            "source_offset": self.source_offset,
            "length": len(self),
            "threshold": self.threshold,
            "info_gain": self.info_gain,
            "values": [float(v) for v in self.values],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Shapelet":
        return cls(
            class_id=int(d["class_id"]),
            values=np.asarray(d["values"], dtype=np.float64),
            source_series=int(d["source_series"]),
            source_offset=int(d["source_offset"]),
            threshold=float(d["threshold"]),
            info_gain=float(d["info_gain"]),
        )


@dataclass(frozen=True)
class MinerConfig:
    """Mining knobs. Defaults are exhaustive: stride 1, no candidate cap.

    Ties between equal-gain candidates always resolve to the lower
    (source_series, source_offset) pair, whatever the evaluation order.
    """

    length_ratio: float = 0.5
    candidate_stride: int = 1
    max_candidates_per_class: int | None = None

    def __post_init__(self):
        if not 0.0 < self.length_ratio <= 1.0:
            raise ValueError("length_ratio must lie in (0, 1]")
        if self.candidate_stride < 1:
            raise ValueError("candidate_stride must be positive")
        if self.max_candidates_per_class is not None and self.max_candidates_per_class < 1:
            raise ValueError("max_candidates_per_class must be positive")


def subdist(shapelet_values: np.ndarray, series: TimeSeries) -> tuple[float, int]:
    """Minimum Euclidean distance over aligned windows and its first offset."""
    shapelet_values = np.asarray(shapelet_values, dtype=np.float64)
    series = np.asarray(series, dtype=np.float64)
    if shapelet_values.shape[0] > series.shape[0]:
        raise ValueError("shapelet longer than series")
    dist, offset = kernels.subdist(shapelet_values, series)
    return float(dist), int(offset)


def entropy(class_counts) -> float:
    """Shannon entropy in bits; zero counts contribute nothing."""
    counts = np.asarray(class_counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise ValueError("empty partition")
    probs = counts[counts > 0] / total
    return float(-(probs * np.log2(probs)).sum())


def info_gain(distances, labels, tau: float) -> float:
    """Entropy decrease of splitting at subdist <= tau versus > tau."""
    distances = np.asarray(distances, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if distances.shape != labels.shape:
        raise ValueError("distances and labels must align")
    if distances.shape[0] < 2:
        raise ValueError("need at least 2 samples")
    total = distances.shape[0]
    left = labels[distances <= tau]
    right = labels[distances > tau]
    gain = entropy(np.bincount(labels))
    for side in (left, right):
        if side.size:
            gain -= side.size / total * entropy(np.bincount(side))
    return float(gain)


def best_threshold(distances, labels) -> tuple[float, float]:
    """Best split threshold over midpoints of consecutive distinct distances.

    Returns (tau, gain); ties in gain break toward the smaller tau. When all
    distances coincide no split exists and the gain is 0.
    """
    distances = np.asarray(distances, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if distances.shape != labels.shape:
        raise ValueError("distances and labels must align")
    if distances.shape[0] < 2:
        raise ValueError("need at least 2 samples")

    order = np.argsort(distances, kind="stable")
    d_sorted = distances[order]
    l_sorted = labels[order]
    num_classes = int(labels.max()) + 1
    total = distances.shape[0]
    total_counts = np.bincount(labels, minlength=num_classes).astype(np.float64)
    base = entropy(total_counts)

    best_tau = float(d_sorted[0])
    best_gain = 0.0
    left = np.zeros(num_classes)
    for i in range(total - 1):
        left[l_sorted[i]] += 1
        if d_sorted[i + 1] == d_sorted[i]:
            continue
        tau = 0.5 * (d_sorted[i] + d_sorted[i + 1])
        n_left = i + 1
        gain = (
            base
            - n_left / total * entropy(left)
            - (total - n_left) / total * entropy(total_counts - left)
        )
        if gain > best_gain:
            best_gain = gain
            best_tau = tau
    return best_tau, float(best_gain)


def _candidate_windows(
    train: LabeledDataset, class_id: int, length: int, cfg: MinerConfig
) -> tuple[np.ndarray, list[tuple[int, int]]]:
    windows = []
    origins = []
    for idx in np.flatnonzero(train.y == class_id):
        row = train.X[idx]
        for off in range(0, train.length - length + 1, cfg.candidate_stride):
            windows.append(row[off : off + length])
            origins.append((int(idx), off))
    cap = cfg.max_candidates_per_class
    if cap is not None and len(windows) > cap:
        keep = np.unique(np.round(np.linspace(0, len(windows) - 1, cap)).astype(int))
        windows = [windows[i] for i in keep]
        origins = [origins[i] for i in keep]
    return np.asarray(windows, dtype=np.float64), origins


def mine_class_shapelets(train: LabeledDataset, cfg: MinerConfig) -> dict[int, Shapelet]:
    """Top-1 shapelet per class under one-vs-rest information gain.

    Deterministic regardless of evaluation order: candidates are enumerated
    by ascending (source_series, source_offset) and only a strictly larger
    gain displaces the incumbent.
    """
    length = shapelet_length(cfg.length_ratio, train.length)
    result: dict[int, Shapelet] = {}
    for class_id in range(train.num_classes):
        binary = (train.y == class_id).astype(np.int64)
        candidates, origins = _candidate_windows(train, class_id, length, cfg)
        dists = kernels.subdist_batch(candidates, train.X)
        best: Shapelet | None = None
        for cand, origin, row in zip(candidates, origins, dists):
            tau, gain = best_threshold(row, binary)
            if best is None or gain > best.info_gain:
                best = Shapelet(
                    class_id=class_id,
                    values=cand,
                    source_series=origin[0],
                    source_offset=origin[1],
                    threshold=tau,
                    info_gain=gain,
                )
        result[class_id] = best
    return result


def align_interval(shapelet: Shapelet, x: TimeSeries) -> tuple[int, int]:
    """Best-match window of ``x`` for this shapelet, as [i1, i2)."""
    _, offset = subdist(shapelet.values, x)
    return offset, offset + len(shapelet)
