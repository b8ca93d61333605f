"""Classifier correctness: hand-computed forwards, finite-difference
gradient checks, closed-form oracles, and training determinism."""

import numpy as np
import pytest

from tsadvkit.models import (
    LossSpec,
    Model,
    ModelSpec,
    TrainingDivergedError,
    cross_entropy,
    finite_diff_gradient,
    init_model,
    input_gradient,
    loss_value,
    predict_proba,
    target_confidence,
    train,
    training_accuracy,
)
from tsadvkit.series import LabeledDataset
from tsadvkit.synthetic import gaussian_bump_dataset


def rel_err(a, b):
    return np.max(np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-8))


def random_model(rng, arch, num_classes=3, length=12):
    spec = ModelSpec(
        architecture=arch,
        conv_channels=4,
        kernel_width=3,
        seed=int(rng.integers(0, 2 ** 31)),
        epochs=0,
    )
    model = init_model(spec, num_classes, length)
    # widen parameters so probabilities are far from uniform
    params = np.asarray(model.parameters) * 20.0
    return Model(spec, params, num_classes, length)


class TestPredict:
    def test_zero_parameters_give_uniform(self):
        spec = ModelSpec(architecture="softmax_linear", epochs=0)
        model = Model(spec, np.zeros(3 * 8 + 3), 3, 8)
        assert np.allclose(predict_proba(model, np.ones(8)), 1.0 / 3.0)

    def test_probabilities_normalized(self, rng):
        model = random_model(rng, "conv_gap")
        for _ in range(5):
            p = predict_proba(model, rng.standard_normal(12))
            assert abs(p.sum() - 1.0) < 1e-9
            assert np.all(p > 0) and np.all(p < 1)

    def test_logit_shift_invariance(self, rng):
        # adding a constant to every row of W shifts all logits equally
        spec = ModelSpec(architecture="softmax_linear", epochs=0)
        W = rng.standard_normal((2, 4))
        b = rng.standard_normal(2)
        x = rng.standard_normal(4)
        m1 = Model(spec, np.concatenate([W.ravel(), b]), 2, 4)
        m2 = Model(spec, np.concatenate([W.ravel(), b + 7.5]), 2, 4)
        assert np.allclose(predict_proba(m1, x), predict_proba(m2, x), atol=1e-12)

    def test_conv_gap_hand_computed(self):
        # T=4, one channel, width 2: conv -> relu -> mean -> dense -> softmax
        spec = ModelSpec(architecture="conv_gap", conv_channels=1, kernel_width=2, epochs=0)
        conv_w = np.array([1.0, -1.0])
        conv_b = np.array([0.5])
        dense_w = np.array([[2.0], [-1.0]])
        dense_b = np.array([0.25, -0.25])
        params = np.concatenate([conv_w, conv_b, dense_w.ravel(), dense_b])
        model = Model(spec, params, 2, 4)
        x = np.array([1.0, 3.0, 2.0, 0.0])
        # windows: [1,3]->1-3+0.5=-1.5 ; [3,2]->3-2+0.5=1.5 ; [2,0]->2-0+0.5=2.5
        # relu: [0, 1.5, 2.5]; mean = 4/3
        pooled = 4.0 / 3.0
        logits = np.array([2.0 * pooled + 0.25, -1.0 * pooled - 0.25])
        expected = np.exp(logits - logits.max())
        expected /= expected.sum()
        assert np.allclose(predict_proba(model, x), expected, atol=1e-12)

    def test_length_mismatch(self, rng):
        model = random_model(rng, "softmax_linear")
        with pytest.raises(ValueError, match="length mismatch"):
            predict_proba(model, np.zeros(5))


class TestGradients:
    @pytest.mark.parametrize("arch", ["softmax_linear", "conv_gap"])
    @pytest.mark.parametrize("kind", ["cross_entropy", "target_confidence"])
    def test_matches_finite_differences(self, rng, arch, kind):
        for _ in range(10):
            model = random_model(rng, arch)
            x = rng.standard_normal(12)
            loss = LossSpec(kind, int(rng.integers(0, 3)))
            g = input_gradient(model, x, loss)
            fd = finite_diff_gradient(model, x, loss, h=1e-5)
            assert rel_err(g, fd) < 1e-4

    def test_softmax_linear_closed_form(self, rng):
        spec = ModelSpec(architecture="softmax_linear", epochs=0)
        W = rng.standard_normal((3, 6))
        b = rng.standard_normal(3)
        model = Model(spec, np.concatenate([W.ravel(), b]), 3, 6)
        x = rng.standard_normal(6)
        probs = predict_proba(model, x)
        c = 1
        expected = sum((probs[j] - (1.0 if j == c else 0.0)) * W[j] for j in range(3))
        assert np.allclose(input_gradient(model, x, cross_entropy(c)), expected, atol=1e-12)

    def test_saturated_target_confidence_gradient_vanishes(self):
        spec = ModelSpec(architecture="softmax_linear", epochs=0)
        W = np.zeros((2, 4))
        W[1] = 500.0  # class 1 saturates for positive inputs
        model = Model(spec, np.concatenate([W.ravel(), np.zeros(2)]), 2, 4)
        x = np.ones(4)
        g = input_gradient(model, x, target_confidence(1))
        assert np.linalg.norm(g) < 1e-6


class TestFiniteDifferenceOracle:
    def test_quadratic_toy(self):
        # directly verify the central-difference formula on L(x) = ||x||^2
        x = np.array([0.5, -1.5, 2.0])
        h = 1e-6

        def quad(v):
            return float(v @ v)

        grad = np.array(
            [
                (quad(x + h * e) - quad(x - h * e)) / (2 * h)
                for e in np.eye(3)
            ]
        )
        assert np.allclose(grad, 2 * x, atol=1e-6)

    def test_h_sweep_error_decreases_then_floors(self, rng):
        model = random_model(rng, "conv_gap")
        x = rng.standard_normal(12)
        loss = cross_entropy(0)
        g = input_gradient(model, x, loss)
        errs = [
            rel_err(g, finite_diff_gradient(model, x, loss, h=h))
            for h in (1e-2, 1e-4, 1e-5)
        ]
        assert errs[1] < errs[0]
        assert errs[2] < 1e-4


def separable_two_class(n_per_class=20, length=16, separation=5.0, seed=5):
    """Class means differ by `separation` sigma along a fixed direction."""
    rng = np.random.default_rng(seed)
    direction = rng.standard_normal(length)
    direction /= np.linalg.norm(direction)
    X = np.vstack(
        [
            rng.standard_normal((n_per_class, length)),
            rng.standard_normal((n_per_class, length)) + separation * direction,
        ]
    )
    y = np.repeat([0, 1], n_per_class)
    return LabeledDataset(X, y, 2)


class TestTraining:
    def test_separable_two_class_accuracy(self):
        data = separable_two_class()
        spec = ModelSpec(architecture="softmax_linear", epochs=50, learning_rate=0.5, seed=1)
        model = train(data, spec)
        assert training_accuracy(model, data) >= 0.95

    def test_epochs_zero_keeps_init(self):
        data = gaussian_bump_dataset(num_classes=2, per_class=4, seed=2)
        spec = ModelSpec(epochs=0, seed=9)
        model = train(data, spec)
        ref = init_model(spec, data.num_classes, data.length)
        assert np.array_equal(model.parameters, ref.parameters)
        p = predict_proba(model, data.X[0])
        assert abs(p.sum() - 1.0) < 1e-9

    def test_determinism(self):
        data = gaussian_bump_dataset(num_classes=2, per_class=6, seed=3)
        spec = ModelSpec(epochs=20, seed=42)
        m1 = train(data, spec)
        m2 = train(data, spec)
        assert np.array_equal(m1.parameters, m2.parameters)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_divergence_reported_with_epoch(self):
        # stable softmax keeps losses finite until the weights themselves
        # overflow, so forcing divergence needs a step near the float ceiling
        data = gaussian_bump_dataset(num_classes=2, per_class=6, seed=3)
        spec = ModelSpec(
            architecture="softmax_linear", epochs=200, learning_rate=1e308, seed=0
        )
        with pytest.raises(TrainingDivergedError, match="training diverged at epoch"):
            train(data, spec)

    def test_conv_training_beats_majority_baseline(self, bump_data):
        train_set, _ = bump_data
        model = train(train_set, ModelSpec(epochs=60, seed=0))
        majority = np.bincount(train_set.y).max() / len(train_set)
        assert training_accuracy(model, train_set) > majority


class TestSerialization:
    def test_json_round_trip(self, rng):
        model = random_model(rng, "conv_gap")
        back = Model.from_dict(model.to_dict())
        assert np.array_equal(back.parameters, model.parameters)
        assert back.spec == model.spec
