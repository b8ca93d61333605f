"""Command-line entry point: tsadvkit <command> --config <path> [--out] [--seed].

Commands: ingest-check, train, mine, attack, evaluate, verify-theorems,
pipeline. All artifacts land in the configured output directory and embed
the config fingerprint; reruns with the same config and seed are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import attacks as attack_mod
from . import metrics as metrics_mod
from . import models as model_mod
from . import shapelets as shapelet_mod
from . import theorems as theorem_mod
from .config import RunConfig, fingerprint, load_config, resolve_gamma, with_overrides
from .series import LabeledDataset
from .synthetic import train_test_datasets
from .ucr import DatasetSource, load_source, write_ucr_text

COMMANDS = (
    "ingest-check",
    "train",
    "mine",
    "attack",
    "evaluate",
    "verify-theorems",
    "pipeline",
)


def _load_datasets(cfg: RunConfig) -> tuple[LabeledDataset, LabeledDataset]:
    if cfg.train_path or cfg.test_path:
        if not (cfg.train_path and cfg.test_path):
            raise ValueError("train_path and test_path must both be set")
        return load_source(
            DatasetSource(cfg.train_path, cfg.test_path, cfg.znormalize)
        )
    train, test = train_test_datasets(
        num_classes=cfg.synthetic_classes,
        train_per_class=cfg.synthetic_train_per_class,
        test_per_class=cfg.synthetic_test_per_class,
        length=cfg.synthetic_length,
        noise=cfg.synthetic_noise,
        amplitude=cfg.synthetic_amplitude,
        seed=cfg.seed,
    )
    if cfg.znormalize:
        from .series import znormalize_matrix

        train = LabeledDataset(
            znormalize_matrix(train.X), train.y, train.num_classes, train.original_labels
        )
        test = LabeledDataset(
            znormalize_matrix(test.X), test.y, test.num_classes, test.original_labels
        )
    return train, test


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _train_model(cfg: RunConfig, train_data: LabeledDataset):
    return model_mod.train(train_data, cfg.model_spec())


def _mine(cfg: RunConfig, train_data: LabeledDataset):
    return shapelet_mod.mine_class_shapelets(train_data, cfg.miner_config())


def _run_attacks(cfg: RunConfig, model, test_data, shapelet_map):
    attack_cfg = cfg.attack_config(test_data.length, shapelet_map)
    return {
        name: attack_mod.run_attack(name, model, test_data, attack_cfg)
        for name in cfg.attacks
    }


def _write_reports(cfg: RunConfig, model, test_data, all_results, out: Path, fp: str):
    gamma = resolve_gamma(cfg.gamma_ratio, test_data.length)
    reports = {
        name: metrics_mod.evaluate(
            model, test_data, results, gamma, config_fingerprint=fp,
            normalization_flag=cfg.znormalize,
        )
        for name, results in all_results.items()
    }
    _write_json(
        out / "report.json",
        {
            "config_fingerprint": fp,
            "normalization": cfg.znormalize,
            "attacks": {name: rep.to_dict() for name, rep in reports.items()},
        },
    )
    lines = [f"# config_fingerprint={fp}", "attack,index,success,l2,dtw,lf"]
    for name in cfg.attacks:
        for row in metrics_mod.report_to_csv(reports[name]).splitlines()[1:]:
            lines.append(f"{name},{row}")
    (out / "report.csv").write_text("\n".join(lines) + "\n")
    return reports


def _write_adversarial(cfg: RunConfig, test_data, all_results, out: Path, fp: str):
    # last attack in the configured order is the one dumped to disk
    name = cfg.attacks[-1]
    adv = np.stack([r.x_adv for r in all_results[name]])
    dataset = LabeledDataset(adv, test_data.y, test_data.num_classes, test_data.original_labels)
    text = f"# config_fingerprint={fp} attack={name}\n" + write_ucr_text(dataset)
    (out / "adversarial.tsv").write_text(text)


def _write_shapelets(shapelet_map, out: Path, fp: str):
    _write_json(
        out / "shapelets.json",
        {
            "config_fingerprint": fp,
            "shapelets": [shapelet_map[c].to_dict() for c in sorted(shapelet_map)],
        },
    )


def _write_model(model, out: Path, fp: str):
    _write_json(out / "model.json", {"config_fingerprint": fp, **model.to_dict()})


def _verify_theorems(cfg: RunConfig, model, train_data, test_data, shapelet_map):
    gamma_eps = cfg.epsilon
    case_verdicts = []
    cases = min(cfg.theorem1_cases, len(test_data))
    for j in range(cases):
        x = test_data.X[j]
        interval = shapelet_mod.align_interval(shapelet_map[int(test_data.y[j])], x)
        try:
            case_verdicts.append(
                theorem_mod.verify_theorem1(
                    model, x, interval, cfg.theorem1_trials, seed=cfg.seed + j
                )
            )
        except ValueError:
            continue  # vacuous case (zero masked gradient)
    if not case_verdicts:
        raise ValueError("theorem 1 vacuous on every sampled case")
    v1 = theorem_mod.merge_theorem1_verdicts(case_verdicts)
    v2 = theorem_mod.verify_theorem2(
        model, test_data, shapelet_map, gamma_eps, cfg.theorem2_trials, cfg.seed
    )
    v3 = theorem_mod.verify_theorem3(model, test_data, gamma_eps, seed=cfg.seed)
    v4 = theorem_mod.verify_theorem4(model, test_data, gamma_eps)
    return [v1, v2, v3, v4]


def run(command: str, cfg: RunConfig) -> int:
    """Execute one CLI command; returns the process exit status."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    out = Path(cfg.output_dir)
    fp = fingerprint(cfg)
    train_data, test_data = _load_datasets(cfg)

    if command == "ingest-check":
        print(
            f"train: {len(train_data)} series  test: {len(test_data)} series  "
            f"length {train_data.length}  classes {train_data.num_classes}  "
            f"znormalized {cfg.znormalize}"
        )
        return 0

    out.mkdir(parents=True, exist_ok=True)
    if command == "train":
        model = _train_model(cfg, train_data)
        _write_model(model, out, fp)
        print(f"wrote {out / 'model.json'}")
        return 0
    if command == "mine":
        shapelet_map = _mine(cfg, train_data)
        _write_shapelets(shapelet_map, out, fp)
        print(f"wrote {out / 'shapelets.json'}")
        return 0

    model = _train_model(cfg, train_data)
    shapelet_map = _mine(cfg, train_data)

    if command == "verify-theorems":
        verdicts = _verify_theorems(cfg, model, train_data, test_data, shapelet_map)
        _write_json(
            out / "verdicts.json",
            {"config_fingerprint": fp, "verdicts": [v.to_dict() for v in verdicts]},
        )
        for v in verdicts:
            print(
                f"theorem {v.theorem_id}: trials={v.trials} violations={v.violations} "
                f"pass={v.passed}"
            )
        return 0

    all_results = _run_attacks(cfg, model, test_data, shapelet_map)
    if command == "attack":
        _write_adversarial(cfg, test_data, all_results, out, fp)
        print(f"wrote {out / 'adversarial.tsv'}")
        return 0
    reports = _write_reports(cfg, model, test_data, all_results, out, fp)
    if command == "evaluate":
        print(f"wrote {out / 'report.json'} and {out / 'report.csv'}")
        return 0

    # pipeline: everything
    _write_adversarial(cfg, test_data, all_results, out, fp)
    _write_shapelets(shapelet_map, out, fp)
    _write_model(model, out, fp)
    for name in cfg.attacks:
        rep = reports[name]
        print(
            f"{name}: asr={rep.asr:.3f} mean_l2={rep.mean_l2:.4f} "
            f"mean_dtw={rep.mean_dtw:.4f} mean_lf={rep.mean_lf:.4f}"
        )
    print(f"artifacts in {out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tsadvkit",
        description="Shapelet-localized, frequency-filtered adversarial attacks "
        "for time-series classifiers",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--out", help="output directory override")
    parser.add_argument("--seed", type=int, help="seed override")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = with_overrides(cfg, out=args.out, seed=args.seed)
        return run(args.command, cfg)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
