"""Flat key=value run configuration with paper defaults.

Every knob has a default, so an empty (or absent) file runs the full
pipeline on the bundled synthetic dataset with epsilon=0.25, 10 iterations,
length ratio 0.5, lambda 0.1, and a cutoff ratio of 0.25 (resolved to
round(ratio * T) once the dataset is loaded). Unknown keys are errors so
typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from pathlib import Path

from .attacks import ATTACK_NAMES, AttackConfig
from .models import ModelSpec
from .shapelets import MinerConfig, round_half_up


@dataclass(frozen=True)
class RunConfig:
    # dataset
    train_path: str = ""
    test_path: str = ""
    znormalize: bool = True
    synthetic_classes: int = 3
    synthetic_train_per_class: int = 25
    synthetic_test_per_class: int = 50
    synthetic_length: int = 64
    synthetic_noise: float = 0.7
    synthetic_amplitude: float = 2.0
    # model
    architecture: str = "conv_gap"
    conv_channels: int = 16
    kernel_width: int = 9
    epochs: int = 200
    learning_rate: float = 0.5
    batch_size: int = 16
    # miner
    length_ratio: float = 0.5
    candidate_stride: int = 1
    max_candidates_per_class: int | None = None
    # attack
    epsilon: float = 0.25
    iterations: int = 10
    lam: float = 0.1
    gamma_ratio: float = 0.25
    target_mode: str = "max_cosine"
    norm: str = "l2"
    shapelet_source: str = "ground_truth"
    attacks: tuple[str, ...] = ("fgsm", "fgm", "bim", "pgd", "sfattack")
    # theorem verification
    theorem1_cases: int = 20
    theorem1_trials: int = 1000
    theorem2_trials: int = 3
    # run
    output_dir: str = "out"
    seed: int = 0

    def model_spec(self) -> ModelSpec:
        return ModelSpec(
            architecture=self.architecture,
            conv_channels=self.conv_channels,
            kernel_width=self.kernel_width,
            seed=self.seed,
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
        )

    def miner_config(self) -> MinerConfig:
        return MinerConfig(
            length_ratio=self.length_ratio,
            candidate_stride=self.candidate_stride,
            max_candidates_per_class=self.max_candidates_per_class,
        )

    def attack_config(self, series_length: int, shapelet_map=None) -> AttackConfig:
        return AttackConfig(
            epsilon=self.epsilon,
            iterations=self.iterations,
            lam=self.lam,
            gamma=resolve_gamma(self.gamma_ratio, series_length),
            target_mode=self.target_mode,
            shapelet_map=shapelet_map,
            norm=self.norm,
            shapelet_source=self.shapelet_source,
        )

    def to_dict(self) -> dict:
        d = {}
        for key in _PARSERS:
            value = getattr(self, _FIELD_NAMES.get(key, key))
            d[key] = list(value) if isinstance(value, tuple) else value
        return d


def resolve_gamma(ratio: float, series_length: int) -> int:
    if not 0.0 <= ratio <= 1.0:
        raise ValueError("gamma ratio must lie in [0, 1]")
    return min(round_half_up(ratio * series_length), series_length)


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(text)


def _parse_optional_int(text: str) -> int | None:
    return None if text == "" else int(text)


def _parse_attacks(text: str) -> tuple[str, ...]:
    names = tuple(tok.strip() for tok in text.split(",") if tok.strip())
    if not names:
        raise ValueError("empty attack list")
    for name in names:
        if name not in ATTACK_NAMES:
            raise ValueError(f"unknown attack {name}")
    return names


_PARSERS = {
    "train_path": str,
    "test_path": str,
    "znormalize": _parse_bool,
    "synthetic_classes": int,
    "synthetic_train_per_class": int,
    "synthetic_test_per_class": int,
    "synthetic_length": int,
    "synthetic_noise": float,
    "synthetic_amplitude": float,
    "architecture": str,
    "conv_channels": int,
    "kernel_width": int,
    "epochs": int,
    "learning_rate": float,
    "batch_size": int,
    "length_ratio": float,
    "candidate_stride": int,
    "max_candidates_per_class": _parse_optional_int,
    "epsilon": float,
    "iterations": int,
    "lambda": float,
    "gamma_ratio": float,
    "target_mode": str,
    "norm": str,
    "shapelet_source": str,
    "attacks": _parse_attacks,
    "theorem1_cases": int,
    "theorem1_trials": int,
    "theorem2_trials": int,
    "output_dir": str,
    "seed": int,
}

# config key -> dataclass field (only where they differ)
_FIELD_NAMES = {"lambda": "lam"}


def load_config(path: str | Path) -> RunConfig:
    """Parse a flat key=value file; missing keys take the defaults above."""
    text = Path(path).read_text()
    overrides: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected key=value at line {lineno}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _PARSERS:
            raise ValueError(f"unknown key {key} at line {lineno}")
        try:
            parsed = _PARSERS[key](value)
        except (ValueError, TypeError):
            raise ValueError(f"invalid value for {key}") from None
        overrides[_FIELD_NAMES.get(key, key)] = parsed
    cfg = RunConfig(**overrides)
    # fail fast on bad enum-ish values
    cfg.model_spec()
    cfg.miner_config()
    cfg.attack_config(series_length=max(cfg.kernel_width, 2))
    return cfg


def with_overrides(cfg: RunConfig, out: str | None = None, seed: int | None = None) -> RunConfig:
    if out is not None:
        cfg = replace(cfg, output_dir=out)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    return cfg


def fingerprint(cfg: RunConfig) -> str:
    """Stable hash of the experiment configuration.

    The output directory is excluded: where artifacts land is not part of
    the experiment's identity, and reruns into different directories must
    stay byte-identical.
    """
    payload = cfg.to_dict()
    payload.pop("output_dir")
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
