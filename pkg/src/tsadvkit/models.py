"""Small differentiable time-series classifiers with exact input gradients.

Two architectures cover the needs of the attack engine and the theorem
checks:

* ``softmax_linear``: logistic regression on the raw values. Its input
  gradient has a closed form, which the tests use as an oracle.
* ``conv_gap``: one 1-D convolution, ReLU, global average pooling over time,
  then a dense softmax head. A desk-scale echo of convolution+GAP
  classifiers.

Training is plain mini-batch SGD on cross-entropy and is bit-deterministic
for a fixed (seed, data, spec).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .series import TimeSeries

Architecture = Literal["softmax_linear", "conv_gap"]


class TrainingDivergedError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    architecture: Architecture = "conv_gap"
    conv_channels: int = 16
    kernel_width: int = 9
    seed: int = 0
    epochs: int = 200
    learning_rate: float = 0.5
    batch_size: int = 16

    def __post_init__(self):
        if self.architecture not in ("softmax_linear", "conv_gap"):
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if self.conv_channels < 1 or self.kernel_width < 1:
            raise ValueError("conv_channels and kernel_width must be positive")
        if self.epochs < 0 or self.batch_size < 1 or self.learning_rate <= 0:
            raise ValueError("invalid training hyperparameters")

    def to_dict(self) -> dict:
        return {
            "architecture": self.architecture,
            "conv_channels": self.conv_channels,
            "kernel_width": self.kernel_width,
            "seed": self.seed,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        return cls(**d)


@dataclass(frozen=True)
class LossSpec:
    """Either cross_entropy(true_class) or target_confidence(target_class).

    cross_entropy is L = -log f_c(x); target_confidence is L = 1 - f_l(x).
    """

    kind: Literal["cross_entropy", "target_confidence"]
    class_index: int


def cross_entropy(true_class: int) -> LossSpec:
    return LossSpec("cross_entropy", true_class)


def target_confidence(target_class: int) -> LossSpec:
    return LossSpec("target_confidence", target_class)


@dataclass(frozen=True)
class Model:
    spec: ModelSpec
    parameters: np.ndarray
    num_classes: int
    input_length: int

    def __post_init__(self):
        params = np.ascontiguousarray(np.asarray(self.parameters, dtype=np.float64))
        params.flags.writeable = False
        object.__setattr__(self, "parameters", params)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "num_classes": self.num_classes,
            "input_length": self.input_length,
            # %.17g keeps every double exact through the text round trip
            "parameters": [float(format(p, ".17g")) for p in self.parameters],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Model":
        return cls(
            spec=ModelSpec.from_dict(d["spec"]),
            parameters=np.asarray(d["parameters"], dtype=np.float64),
            num_classes=int(d["num_classes"]),
            input_length=int(d["input_length"]),
        )


def _param_count(spec: ModelSpec, num_classes: int, length: int) -> int:
    if spec.architecture == "softmax_linear":
        return num_classes * length + num_classes
    k, c = spec.kernel_width, spec.conv_channels
    return c * k + c + num_classes * c + num_classes


def _unpack(model: Model) -> dict[str, np.ndarray]:
    spec, C, T = model.spec, model.num_classes, model.input_length
    p = model.parameters
    if spec.architecture == "softmax_linear":
        return {"W": p[: C * T].reshape(C, T), "b": p[C * T :]}
    K, k = spec.conv_channels, spec.kernel_width
    i = 0
    out = {}
    out["conv_w"] = p[i : i + K * k].reshape(K, k); i += K * k
    out["conv_b"] = p[i : i + K]; i += K
    out["dense_w"] = p[i : i + C * K].reshape(C, K); i += C * K
    out["dense_b"] = p[i : i + C]
    return out


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _forward_batch(model: Model, X: np.ndarray):
    """Logits plus the intermediates the backward pass needs."""
    w = _unpack(model)
    if model.spec.architecture == "softmax_linear":
        return X @ w["W"].T + w["b"], {}
    k = model.spec.kernel_width
    windows = np.lib.stride_tricks.sliding_window_view(X, k, axis=1)  # (B, M, k)
    z = np.einsum("bmk,jk->bjm", windows, w["conv_w"]) + w["conv_b"][None, :, None]
    a = np.maximum(z, 0.0)
    pooled = a.mean(axis=2)  # (B, K)
    logits = pooled @ w["dense_w"].T + w["dense_b"]
    return logits, {"windows": windows, "z": z, "pooled": pooled}


def predict_proba(model: Model, x: TimeSeries) -> np.ndarray:
    """Class probability vector; argmax (first on ties) is the prediction."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.input_length,):
        raise ValueError("length mismatch")
    logits, _ = _forward_batch(model, x[None, :])
    return _softmax(logits[0])


def predict_proba_batch(model: Model, X: np.ndarray) -> np.ndarray:
    if X.shape[1] != model.input_length:
        raise ValueError("length mismatch")
    logits, _ = _forward_batch(model, X)
    return _softmax(logits)


def predict_class(model: Model, x: TimeSeries) -> int:
    return int(np.argmax(predict_proba(model, x)))


def loss_value(model: Model, x: TimeSeries, loss: LossSpec) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.input_length,):
        raise ValueError("length mismatch")
    if not 0 <= loss.class_index < model.num_classes:
        raise ValueError("loss class index out of range")
    logits, _ = _forward_batch(model, x[None, :])
    logits = logits[0]
    if loss.kind == "cross_entropy":
        shifted = logits - logits.max()
        return float(np.log(np.exp(shifted).sum()) - shifted[loss.class_index])
    return float(1.0 - _softmax(logits)[loss.class_index])


def _dlogits(probs: np.ndarray, loss: LossSpec) -> np.ndarray:
    if loss.kind == "cross_entropy":
        g = probs.copy()
        g[loss.class_index] -= 1.0
        return g
    # d(1 - p_l)/dz_j = p_l * p_j - p_l * [j == l]
    p_l = probs[loss.class_index]
    g = p_l * probs
    g[loss.class_index] -= p_l
    return g


def input_gradient(model: Model, x: TimeSeries, loss: LossSpec) -> TimeSeries:
    """Exact reverse-mode gradient of the loss with respect to the input."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.input_length,):
        raise ValueError("length mismatch")
    if not 0 <= loss.class_index < model.num_classes:
        raise ValueError("loss class index out of range")
    w = _unpack(model)
    logits, cache = _forward_batch(model, x[None, :])
    dlog = _dlogits(_softmax(logits[0]), loss)
    if model.spec.architecture == "softmax_linear":
        return w["W"].T @ dlog
    z = cache["z"][0]  # (K, M)
    positions = z.shape[1]
    dpooled = w["dense_w"].T @ dlog  # (K,)
    dz = (z > 0.0) * (dpooled[:, None] / positions)  # ReLU' at 0 is 0
    grad = np.zeros_like(x)
    for j in range(dz.shape[0]):
        grad += np.convolve(dz[j], w["conv_w"][j])
    return grad


def finite_diff_gradient(
    model: Model, x: TimeSeries, loss: LossSpec, h: float = 1e-5
) -> TimeSeries:
    """Central differences (L(x+h e_i) - L(x-h e_i)) / 2h, the test oracle."""
    if h <= 0:
        raise ValueError("h must be positive")
    x = np.asarray(x, dtype=np.float64)
    grad = np.empty_like(x)
    for i in range(x.shape[0]):
        bumped = x.copy()
        bumped[i] = x[i] + h
        up = loss_value(model, bumped, loss)
        bumped[i] = x[i] - h
        down = loss_value(model, bumped, loss)
        grad[i] = (up - down) / (2.0 * h)
    return grad


def init_model(spec: ModelSpec, num_classes: int, input_length: int) -> Model:
    """Seeded uniform [-0.05, 0.05] init over the flat parameter vector."""
    if spec.architecture == "conv_gap" and spec.kernel_width > input_length:
        raise ValueError("kernel width exceeds series length")
    rng = np.random.default_rng(spec.seed)
    params = rng.uniform(-0.05, 0.05, size=_param_count(spec, num_classes, input_length))
    return Model(spec, params, num_classes, input_length)


def _batch_grads(model_arrays, spec, X, y, num_classes):
    """Mean cross-entropy loss and parameter gradients for one batch."""
    B = X.shape[0]
    if spec.architecture == "softmax_linear":
        W, b = model_arrays["W"], model_arrays["b"]
        logits = X @ W.T + b
        probs = _softmax(logits)
        shifted = logits - logits.max(axis=1, keepdims=True)
        logp = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        loss = float(-logp[np.arange(B), y].mean())
        g = probs
        g[np.arange(B), y] -= 1.0
        return loss, {"W": g.T @ X / B, "b": g.mean(axis=0)}

    w, cb, V, db = (
        model_arrays["conv_w"],
        model_arrays["conv_b"],
        model_arrays["dense_w"],
        model_arrays["dense_b"],
    )
    windows = np.lib.stride_tricks.sliding_window_view(X, spec.kernel_width, axis=1)
    z = np.einsum("bmk,jk->bjm", windows, w) + cb[None, :, None]
    a = np.maximum(z, 0.0)
    positions = z.shape[2]
    pooled = a.mean(axis=2)
    logits = pooled @ V.T + db
    probs = _softmax(logits)
    shifted = logits - logits.max(axis=1, keepdims=True)
    logp = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = float(-logp[np.arange(B), y].mean())
    gl = probs
    gl[np.arange(B), y] -= 1.0
    dpooled = gl @ V  # (B, K)
    dz = (z > 0.0) * (dpooled[:, :, None] / positions)
    return loss, {
        "conv_w": np.einsum("bjm,bmk->jk", dz, windows) / B,
        "conv_b": dz.sum(axis=2).mean(axis=0),
        "dense_w": gl.T @ pooled / B,
        "dense_b": gl.mean(axis=0),
    }


def train(data, spec: ModelSpec) -> Model:
    """Mini-batch SGD on cross-entropy; identical inputs give identical bits."""
    rng = np.random.default_rng(spec.seed)
    if spec.architecture == "conv_gap" and spec.kernel_width > data.length:
        raise ValueError("kernel width exceeds series length")
    params = rng.uniform(
        -0.05, 0.05, size=_param_count(spec, data.num_classes, data.length)
    )
    model = Model(spec, params, data.num_classes, data.length)
    work = {k: v.copy() for k, v in _unpack(model).items()}
    n = len(data)
    for epoch in range(spec.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        batches = 0
        for start in range(0, n, spec.batch_size):
            idx = order[start : start + spec.batch_size]
            loss, grads = _batch_grads(work, spec, data.X[idx], data.y[idx], data.num_classes)
            epoch_loss += loss
            batches += 1
            for key, g in grads.items():
                work[key] -= spec.learning_rate * g
        if not np.isfinite(epoch_loss / batches):
            raise TrainingDivergedError(f"training diverged at epoch {epoch}")
    flat = np.concatenate([work[k].ravel() for k in _order(spec)])
    return Model(spec, flat, data.num_classes, data.length)


def _order(spec: ModelSpec) -> tuple[str, ...]:
    if spec.architecture == "softmax_linear":
        return ("W", "b")
    return ("conv_w", "conv_b", "dense_w", "dense_b")


def training_accuracy(model: Model, data) -> float:
    preds = predict_proba_batch(model, data.X).argmax(axis=1)
    return float((preds == data.y).mean())


def with_seed(spec: ModelSpec, seed: int) -> ModelSpec:
    return replace(spec, seed=seed)
