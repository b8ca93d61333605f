"""Gradient attacks: FGSM/FGM/BIM/PGD baselines and the shapelet-localized,
high-pass-filtered attack.

All L2 attacks satisfy ||p||_2 <= eps * (1 + 1e-9); iterative ones take
steps of eps/iterations and project the accumulated perturbation back onto
the budget ball. The localized attack decomposes the chosen gradient
direction into shapelet and remainder parts, reweights the remainder by
lambda, strips frequency content below the cutoff (rescaling back to the
pre-filter norm), then steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import (
    LossSpec,
    Model,
    cross_entropy,
    input_gradient,
    predict_proba,
    target_confidence,
)
from .series import LabeledDataset, TimeSeries
from .shapelets import Shapelet, align_interval
from .spectral import AllLowFrequencyError, FilterSpec, highpass

GRAD_TOL = 1e-12
_PROJ_SLACK = 1e-12

ATTACK_NAMES = ("fgsm", "fgm", "bim", "pgd", "sfattack")


class VanishingShapeletGradientError(ValueError):
    pass


@dataclass(frozen=True)
class AttackConfig:
    epsilon: float = 0.25
    iterations: int = 10
    lam: float = 0.1
    gamma: int = 0
    target_mode: str = "max_cosine"  # or min_cosine_as_written / untargeted
    shapelet_map: dict[int, Shapelet] | None = None
    norm: str = "l2"
    shapelet_source: str = "ground_truth"  # or "target"

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if self.target_mode not in ("max_cosine", "min_cosine_as_written", "untargeted"):
            raise ValueError(f"unknown target_mode {self.target_mode!r}")
        if self.norm not in ("l2", "linf"):
            raise ValueError(f"unknown norm {self.norm!r}")
        if self.shapelet_source not in ("ground_truth", "target"):
            raise ValueError(f"unknown shapelet_source {self.shapelet_source!r}")
        if self.shapelet_source == "target" and self.target_mode == "untargeted":
            raise ValueError("shapelet_source=target needs a targeted mode")

    @property
    def alpha(self) -> float:
        """Per-iteration step size; iterations exhaust the budget."""
        return self.epsilon / self.iterations


@dataclass(frozen=True)
class AdversarialResult:
    original_index: int
    x_adv: np.ndarray
    perturbation: np.ndarray
    original_prediction: int
    adversarial_prediction: int
    target_class: int | None
    success: bool
    filter_fallbacks: int = 0
    vanishing_gradient: bool = False
    error: str | None = None


def select_target(data: LabeledDataset, j: int, mode: str) -> tuple[int, int]:
    """Pick the other-class sample by cosine similarity; return (index, class).

    ``max_cosine`` picks the most similar sample (the default reading);
    ``min_cosine_as_written`` keeps the literal argmin variant. Ties go to
    the lowest index.
    """
    x = data.X[j]
    xn = np.linalg.norm(x)
    if xn <= GRAD_TOL:
        raise ValueError("degenerate vector")
    others = np.flatnonzero(data.y != data.y[j])
    if others.size == 0:
        raise ValueError("no other-class samples to target")
    norms = np.linalg.norm(data.X[others], axis=1)
    if np.any(norms <= GRAD_TOL):
        raise ValueError("degenerate vector")
    cos = (data.X[others] @ x) / (norms * xn)
    pick = int(np.argmax(cos)) if mode == "max_cosine" else int(np.argmin(cos))
    k = int(others[pick])
    return k, int(data.y[k])


def decompose_gradient(
    g: TimeSeries, interval: tuple[int, int]
) -> tuple[np.ndarray, np.ndarray]:
    """Split into the interval part and the remainder; the parts sum to g."""
    i1, i2 = interval
    if not 0 <= i1 < i2 <= g.shape[0]:
        raise ValueError(f"invalid interval [{i1}, {i2}) for length {g.shape[0]}")
    g_s = np.zeros_like(g)
    g_s[i1:i2] = g[i1:i2]
    g_rest = g.copy()
    g_rest[i1:i2] = 0.0
    return g_s, g_rest


def assemble_perturbation(g_s: np.ndarray, g_rest: np.ndarray, lam: float) -> np.ndarray:
    """Unit shapelet direction plus lambda-weighted unit remainder direction."""
    ns = np.linalg.norm(g_s)
    if ns <= GRAD_TOL:
        raise VanishingShapeletGradientError("vanishing shapelet gradient")
    p = g_s / ns
    nr = np.linalg.norm(g_rest)
    if nr > GRAD_TOL:
        p = p + lam * (g_rest / nr)
    return p


def _project_l2(p: np.ndarray, eps: float) -> np.ndarray:
    nrm = np.linalg.norm(p)
    if nrm > eps * (1.0 + _PROJ_SLACK):
        return p * (eps / nrm)
    return p


def _result(
    model: Model,
    index: int,
    x0: np.ndarray,
    p: np.ndarray,
    truth: int,
    target: int | None = None,
    fallbacks: int = 0,
    vanishing: bool = False,
    error: str | None = None,
) -> AdversarialResult:
    x_adv = x0 + p
    orig_pred = int(np.argmax(predict_proba(model, x0)))
    adv_pred = int(np.argmax(predict_proba(model, x_adv)))
    return AdversarialResult(
        original_index=index,
        x_adv=x_adv,
        perturbation=p,
        original_prediction=orig_pred,
        adversarial_prediction=adv_pred,
        target_class=target,
        success=adv_pred != truth,
        filter_fallbacks=fallbacks,
        vanishing_gradient=vanishing,
        error=error,
    )


def _truth(loss: LossSpec, true_class: int | None) -> int:
    if true_class is not None:
        return true_class
    if loss.kind != "cross_entropy":
        raise ValueError("true_class required for non-cross-entropy losses")
    return loss.class_index


def fgsm(
    model: Model,
    x: TimeSeries,
    loss: LossSpec,
    eps: float,
    true_class: int | None = None,
    index: int = 0,
    norm: str = "l2",
) -> AdversarialResult:
    """One step along sign(grad)/sqrt(T), the L2-budget-matched sign attack.

    With ``norm="linf"`` this is the classic eps * sign(grad) step instead.
    """
    x = np.asarray(x, dtype=np.float64)
    g = input_gradient(model, x, loss)
    p = np.sign(g) * (eps if norm == "linf" else eps / np.sqrt(x.shape[0]))
    return _result(model, index, x, p, _truth(loss, true_class))


def fgm(
    model: Model,
    x: TimeSeries,
    loss: LossSpec,
    eps: float,
    true_class: int | None = None,
    index: int = 0,
) -> AdversarialResult:
    """One step of length eps along the L2-normalized gradient."""
    x = np.asarray(x, dtype=np.float64)
    g = input_gradient(model, x, loss)
    nrm = np.linalg.norm(g)
    if nrm <= GRAD_TOL:
        return _result(
            model, index, x, np.zeros_like(x), _truth(loss, true_class), vanishing=True
        )
    return _result(model, index, x, eps * (g / nrm), _truth(loss, true_class))


def _iterate_sign(grad_fn, x0: np.ndarray, eps: float, iters: int, norm: str):
    """Accumulated perturbation after iterated sign steps."""
    scale = 1.0 if norm == "linf" else 1.0 / np.sqrt(x0.shape[0])
    alpha = eps / iters
    p = np.zeros_like(x0)
    for _ in range(iters):
        g = grad_fn(x0 + p)
        if np.linalg.norm(g) <= GRAD_TOL:
            break
        p = p + alpha * scale * np.sign(g)
        if norm == "linf":
            p = np.clip(p, -eps, eps)
    return p


def _iterate_l2(grad_fn, x0: np.ndarray, eps: float, iters: int):
    """Accumulated perturbation after normalized steps with ball projection."""
    alpha = eps / iters
    p = np.zeros_like(x0)
    for _ in range(iters):
        g = grad_fn(x0 + p)
        nrm = np.linalg.norm(g)
        if nrm <= GRAD_TOL:
            break
        p = _project_l2(p + alpha * (g / nrm), eps)
    return p


def bim(
    model: Model,
    x: TimeSeries,
    loss: LossSpec,
    eps: float,
    iters: int,
    true_class: int | None = None,
    index: int = 0,
    norm: str = "l2",
) -> AdversarialResult:
    """Iterated sign steps of size eps/iters; stops early if the gradient dies."""
    x = np.asarray(x, dtype=np.float64)
    p = _iterate_sign(lambda z: input_gradient(model, z, loss), x, eps, iters, norm)
    return _result(model, index, x, p, _truth(loss, true_class))


def pgd(
    model: Model,
    x: TimeSeries,
    loss: LossSpec,
    eps: float,
    iters: int,
    true_class: int | None = None,
    index: int = 0,
) -> AdversarialResult:
    """Iterated normalized-gradient steps with projection onto the eps ball."""
    x = np.asarray(x, dtype=np.float64)
    p = _iterate_l2(lambda z: input_gradient(model, z, loss), x, eps, iters)
    return _result(model, index, x, p, _truth(loss, true_class))


def _sample_interval(
    cfg: AttackConfig, x: np.ndarray, own_class: int, target_class: int | None
) -> tuple[int, int]:
    if cfg.shapelet_map is None:
        return 0, x.shape[0]
    key = own_class if cfg.shapelet_source == "ground_truth" else target_class
    return align_interval(cfg.shapelet_map[key], x)


def _sfattack_one(
    model: Model, data: LabeledDataset, cfg: AttackConfig, j: int
) -> AdversarialResult:
    x0 = data.X[j].copy()
    truth = int(data.y[j])
    if cfg.target_mode == "untargeted":
        target = None
        loss = cross_entropy(truth)
        descend = False
    else:
        _, target = select_target(data, j, cfg.target_mode)
        loss = target_confidence(target)
        descend = True  # lowering 1 - f_l raises the target confidence

    interval = _sample_interval(cfg, x0, truth, target)
    filt = FilterSpec(cutoff=cfg.gamma, preserve_l2=True)
    fallbacks = 0
    p = np.zeros_like(x0)
    for _ in range(cfg.iterations):
        g = input_gradient(model, x0 + p, loss)
        d = -g if descend else g
        nrm = np.linalg.norm(d)
        if nrm <= GRAD_TOL:
            break
        g_s, g_rest = decompose_gradient(d, interval)
        try:
            direction = assemble_perturbation(g_s, g_rest, cfg.lam)
        except VanishingShapeletGradientError:
            direction = d / nrm
        try:
            direction = highpass(direction, filt)
        except AllLowFrequencyError:
            fallbacks += 1  # keep the unfiltered step
        p = _project_l2(p + cfg.alpha * direction, cfg.epsilon)
    return _result(model, j, x0, p, truth, target=target, fallbacks=fallbacks)


def sfattack(model: Model, data: LabeledDataset, cfg: AttackConfig) -> list[AdversarialResult]:
    """Run the localized frequency-filtered attack over a whole dataset.

    A failing sample is reported in place (zero perturbation, the error
    message attached) and never aborts the batch.
    """
    if cfg.norm != "l2":
        raise ValueError("sfattack is defined under the l2 budget only")
    if cfg.shapelet_map is not None:
        present = set(int(c) for c in np.unique(data.y))
        missing = sorted(present - set(cfg.shapelet_map))
        if missing:
            raise ValueError(f"shapelet_map missing classes {missing}")
    results = []
    for j in range(len(data)):
        try:
            results.append(_sfattack_one(model, data, cfg, j))
        except Exception as exc:  # per-sample containment
            x0 = data.X[j].copy()
            results.append(
                _result(
                    model, j, x0, np.zeros_like(x0), int(data.y[j]), error=str(exc)
                )
            )
    return results


def run_attack(
    name: str, model: Model, data: LabeledDataset, cfg: AttackConfig
) -> list[AdversarialResult]:
    """Dispatch one attack over every sample of a dataset."""
    if name not in ATTACK_NAMES:
        raise ValueError(f"unknown attack {name!r}")
    if name == "sfattack":
        return sfattack(model, data, cfg)
    if name in ("fgm", "pgd") and cfg.norm != "l2":
        raise ValueError(f"{name} is defined under the l2 budget only")
    results = []
    for j in range(len(data)):
        x = data.X[j]
        loss = cross_entropy(int(data.y[j]))
        try:
            if name == "fgsm":
                res = fgsm(model, x, loss, cfg.epsilon, index=j, norm=cfg.norm)
            elif name == "fgm":
                res = fgm(model, x, loss, cfg.epsilon, index=j)
            elif name == "bim":
                res = bim(model, x, loss, cfg.epsilon, cfg.iterations, index=j, norm=cfg.norm)
            else:
                res = pgd(model, x, loss, cfg.epsilon, cfg.iterations, index=j)
            results.append(res)
        except Exception as exc:
            x0 = x.copy()
            results.append(
                _result(model, j, x0, np.zeros_like(x0), int(data.y[j]), error=str(exc))
            )
    return results
