"""Miner correctness against exhaustive brute-force oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsadvkit.series import LabeledDataset
from tsadvkit.shapelets import (
    MinerConfig,
    Shapelet,
    align_interval,
    best_threshold,
    entropy,
    info_gain,
    mine_class_shapelets,
    shapelet_length,
    subdist,
)


def oracle_subdist(shapelet, series):
    """Window-by-window scan written independently of the kernels."""
    best = math.inf
    best_off = 0
    for off in range(len(series) - len(shapelet) + 1):
        d = math.sqrt(sum((series[off + i] - shapelet[i]) ** 2 for i in range(len(shapelet))))
        if d < best:
            best = d
            best_off = off
    return best, best_off


def oracle_best_threshold(distances, labels):
    """Exhaustive midpoint enumeration using the public info_gain op."""
    uniq = sorted(set(distances))
    if len(uniq) == 1:
        return uniq[0], 0.0
    best_tau, best_gain = uniq[0], 0.0
    for lo, hi in zip(uniq, uniq[1:]):
        tau = (lo + hi) / 2.0
        gain = info_gain(distances, labels, tau)
        if gain > best_gain:
            best_tau, best_gain = tau, gain
    return best_tau, best_gain


def oracle_mine(train, length_ratio):
    """Brute-force search over every window of every series, stride 1."""
    length = shapelet_length(length_ratio, train.length)
    result = {}
    for cls in range(train.num_classes):
        binary = (train.y == cls).astype(int)
        best = None
        for idx in range(len(train)):
            if train.y[idx] != cls:
                continue
            for off in range(train.length - length + 1):
                cand = train.X[idx, off : off + length]
                dists = [oracle_subdist(cand, row)[0] for row in train.X]
                tau, gain = oracle_best_threshold(dists, binary)
                if best is None or gain > best[0]:
                    best = (gain, idx, off, tau)
        result[cls] = best
    return result


class TestSubdist:
    def test_exact_containment(self):
        dist, off = subdist(np.array([1.0, 2.0]), np.array([0.0, 1.0, 2.0, 3.0]))
        assert dist == 0.0
        assert off == 1

    def test_single_point_scan(self):
        dist, off = subdist(np.array([0.0]), np.array([3.0, 1.0, 2.0]))
        assert dist == 1.0
        assert off == 1

    def test_matches_exhaustive_oracle(self, rng):
        shapelet = rng.standard_normal(4)
        series = rng.standard_normal(12)
        dist, off = subdist(shapelet, series)
        ref_dist, ref_off = oracle_subdist(shapelet, series)
        assert abs(dist - ref_dist) < 1e-9
        assert off == ref_off

    def test_too_long_rejected(self):
        with pytest.raises(ValueError, match="shapelet longer than series"):
            subdist(np.zeros(5), np.zeros(4))


class TestEntropy:
    def test_balanced_binary(self):
        assert entropy([5, 5]) == pytest.approx(1.0)

    def test_pure_partition(self):
        assert entropy([7, 0]) == 0.0

    def test_three_one_split(self):
        expected = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
        assert entropy([3, 1]) == pytest.approx(expected, abs=1e-12)

    def test_empty_partition(self):
        with pytest.raises(ValueError, match="empty partition"):
            entropy([0, 0])

    @given(st.lists(st.integers(0, 20), min_size=2, max_size=6).filter(lambda c: sum(c) > 0))
    @settings(max_examples=60, deadline=None)
    def test_permutation_invariant(self, counts):
        shuffled = list(reversed(counts))
        assert entropy(counts) == pytest.approx(entropy(shuffled), abs=1e-12)


class TestInfoGain:
    def test_perfect_split(self):
        assert info_gain([0, 0, 9, 9], [0, 0, 1, 1], 1.0) == pytest.approx(1.0)

    def test_uninformative_split(self):
        assert info_gain([0, 9, 0, 9], [0, 0, 1, 1], 1.0) == pytest.approx(0.0)

    def test_partial_split_value(self):
        # D1 = {0,0,1}, D2 = {1}: 1 - 0.75 * E([2,1])
        expected = 1.0 - 0.75 * (-(2 / 3) * math.log2(2 / 3) - (1 / 3) * math.log2(1 / 3))
        assert info_gain([0, 1, 2, 9], [0, 0, 1, 1], 3.0) == pytest.approx(expected, abs=1e-12)

    def test_bounded_by_dataset_entropy(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 12))
            dists = rng.uniform(0, 5, n)
            labels = rng.integers(0, 3, n)
            tau = float(rng.uniform(0, 5))
            gain = info_gain(dists, labels, tau)
            assert -1e-12 <= gain <= entropy(np.bincount(labels)) + 1e-12


class TestBestThreshold:
    def test_perfect_split_midpoint(self):
        tau, gain = best_threshold([0, 0, 9, 9], [0, 0, 1, 1])
        assert tau == pytest.approx(4.5)
        assert gain == pytest.approx(1.0)

    def test_all_equal_distances(self):
        tau, gain = best_threshold([2.0, 2.0, 2.0], [0, 1, 0])
        assert tau == 2.0
        assert gain == 0.0

    def test_matches_exhaustive_midpoint_oracle(self, rng):
        cases = [([1.0, 2.0, 3.0, 4.0], [0, 1, 0, 1])]
        for _ in range(20):
            n = int(rng.integers(2, 10))
            cases.append((list(rng.uniform(0, 3, n)), list(rng.integers(0, 2, n))))
        for dists, labels in cases:
            tau, gain = best_threshold(dists, labels)
            ref_tau, ref_gain = oracle_best_threshold(dists, labels)
            assert gain == pytest.approx(ref_gain, abs=1e-12)
            assert tau == pytest.approx(ref_tau, abs=1e-12)

    def test_reported_gain_consistent_with_info_gain(self, rng):
        dists = rng.uniform(0, 2, 9)
        labels = rng.integers(0, 2, 9)
        tau, gain = best_threshold(dists, labels)
        assert info_gain(dists, labels, tau) == pytest.approx(gain, abs=1e-12)


class TestMiner:
    def test_planted_motif_wins(self):
        # class 0 rows contain a unique [5, 5] motif
        X = np.array(
            [
                [0.0, 5.0, 5.0, 0.0],
                [5.0, 5.0, 0.0, 0.1],
                [0.0, 0.2, 0.0, 0.1],
                [0.1, 0.0, 0.2, 0.0],
            ]
        )
        data = LabeledDataset(X, np.array([0, 0, 1, 1]), 2)
        mined = mine_class_shapelets(data, MinerConfig(length_ratio=0.5))
        assert mined[0].info_gain == pytest.approx(1.0)
        assert np.array_equal(mined[0].values, [5.0, 5.0])

    def test_degenerate_identical_classes(self):
        X = np.tile(np.array([1.0, 2.0, 3.0, 4.0]), (4, 1))
        data = LabeledDataset(X, np.array([0, 0, 1, 1]), 2)
        mined = mine_class_shapelets(data, MinerConfig(length_ratio=0.5))
        for cls, shp in mined.items():
            assert shp.info_gain == 0.0
            assert shp.source_offset == 0  # first candidate wins ties

    def test_stride_subset_monotonicity(self, rng):
        X = rng.standard_normal((6, 12))
        data = LabeledDataset(X, np.array([0, 0, 0, 1, 1, 1]), 2)
        g1 = mine_class_shapelets(data, MinerConfig(candidate_stride=1))
        g2 = mine_class_shapelets(data, MinerConfig(candidate_stride=2))
        for cls in (0, 1):
            assert g2[cls].info_gain <= g1[cls].info_gain + 1e-12

    def test_matches_bruteforce_oracle(self, rng):
        for trial in range(5):
            n = int(rng.integers(4, 9))
            T = int(rng.integers(6, 21))
            labels = np.array([i % 2 for i in range(n)])
            X = rng.standard_normal((n, T)) + labels[:, None] * rng.uniform(0, 2)
            data = LabeledDataset(X, labels, 2)
            mined = mine_class_shapelets(data, MinerConfig(length_ratio=0.5))
            ref = oracle_mine(data, 0.5)
            for cls in (0, 1):
                gain, idx, off, tau = ref[cls]
                assert mined[cls].info_gain == pytest.approx(gain, abs=1e-9)
                assert mined[cls].source_series == idx
                assert mined[cls].source_offset == off


class TestAlignInterval:
    def test_exact_match_window(self, rng):
        x = rng.standard_normal(10)
        shp = Shapelet(0, x[3:5], 0, 3, 0.0, 1.0)
        assert align_interval(shp, x) == (3, 5)

    def test_constant_tie_takes_first(self):
        shp = Shapelet(0, np.zeros(3), 0, 0, 0.0, 0.0)
        assert align_interval(shp, np.zeros(8)) == (0, 3)

    def test_matches_oracle(self, rng):
        x = rng.standard_normal(15)
        vals = rng.standard_normal(4)
        shp = Shapelet(0, vals, 0, 0, 0.0, 0.0)
        i1, i2 = align_interval(shp, x)
        _, ref_off = oracle_subdist(vals, x)
        assert (i1, i2) == (ref_off, ref_off + 4)


class TestRoundHalf:
    def test_length_rounding(self):
        assert shapelet_length(0.5, 9) == 5  # 4.5 rounds up
        assert shapelet_length(0.5, 64) == 32
        assert shapelet_length(0.01, 10) == 1  # clamp to 1
        assert shapelet_length(1.0, 7) == 7


class TestSerialization:
    def test_dict_round_trip(self, rng):
        shp = Shapelet(2, rng.standard_normal(5), 3, 7, 1.25, 0.75)
        back = Shapelet.from_dict(shp.to_dict())
        assert back.class_id == shp.class_id
        assert np.array_equal(back.values, shp.values)
        assert back.threshold == shp.threshold
