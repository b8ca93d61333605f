"""Attack effectiveness (ASR) and imperceptibility (L2, DTW, LF) reporting.

ASR counts flips only among samples the model classified correctly before
the attack. DTW uses squared-difference local costs with a final square
root, so it shares units with the L2 distance and never exceeds it on
equal-length series.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .attacks import AdversarialResult
from .models import Model
from .series import LabeledDataset, TimeSeries, l2_distance
from .spectral import lf_norm


@dataclass(frozen=True)
class SampleMetrics:
    index: int
    success: bool
    l2: float
    dtw: float
    lf: float


@dataclass(frozen=True)
class AttackReport:
    per_sample: tuple[SampleMetrics, ...]
    asr: float
    mean_l2: float
    mean_dtw: float
    mean_lf: float
    vacuous_asr: bool
    config_fingerprint: str
    normalization_flag: bool

    def to_dict(self) -> dict:
        return {
            "per_sample": [
                {
                    "index": s.index,
                    "success": s.success,
                    "l2": s.l2,
                    "dtw": s.dtw,
                    "lf": s.lf,
                }
                for s in self.per_sample
            ],
            "aggregate": {
                "asr": self.asr,
                "mean_l2": self.mean_l2,
                "mean_dtw": self.mean_dtw,
                "mean_lf": self.mean_lf,
                "vacuous_asr": self.vacuous_asr,
            },
            "config_fingerprint": self.config_fingerprint,
            "normalization_flag": self.normalization_flag,
        }


def asr(results: list[AdversarialResult], originally_correct: list[bool]) -> float:
    """Fraction of originally-correct samples the attack flipped."""
    if len(results) != len(originally_correct):
        raise ValueError("results and correctness flags must align")
    denom = sum(originally_correct)
    if denom == 0:
        warnings.warn("vacuous ASR: no sample was originally classified correctly")
        return 0.0
    hits = sum(1 for r, ok in zip(results, originally_correct) if ok and r.success)
    return hits / denom


def dtw(a: TimeSeries, b: TimeSeries) -> float:
    """Dynamic time warping distance (sqrt of the optimal squared cost)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValueError("dtw needs nonempty series")
    return float(np.sqrt(kernels.dtw_sq_cost(a, b)))


def evaluate(
    model: Model,
    originals: LabeledDataset,
    results: list[AdversarialResult],
    gamma: int,
    config_fingerprint: str = "",
    normalization_flag: bool = True,
) -> AttackReport:
    """Per-sample L2/DTW/LF plus aggregates for one attack run."""
    if any(not 0 <= r.original_index < len(originals) for r in results):
        raise ValueError("results must align with the attacked dataset")
    per = []
    correct = []
    for r in results:
        x = originals.X[r.original_index]
        correct.append(r.original_prediction == int(originals.y[r.original_index]))
        per.append(
            SampleMetrics(
                index=r.original_index,
                success=bool(r.success),
                l2=l2_distance(x, r.x_adv),
                dtw=dtw(x, r.x_adv),
                lf=lf_norm(r.perturbation, gamma),
            )
        )
    denom = sum(correct)
    vacuous = denom == 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rate = asr(results, correct)
    return AttackReport(
        per_sample=tuple(per),
        asr=rate,
        mean_l2=float(np.mean([s.l2 for s in per])) if per else 0.0,
        mean_dtw=float(np.mean([s.dtw for s in per])) if per else 0.0,
        mean_lf=float(np.mean([s.lf for s in per])) if per else 0.0,
        vacuous_asr=vacuous,
        config_fingerprint=config_fingerprint,
        normalization_flag=normalization_flag,
    )


def report_to_csv(report: AttackReport) -> str:
    """One row per sample: index, success, l2, dtw, lf."""
    out = io.StringIO()
    out.write("index,success,l2,dtw,lf\n")
    for s in report.per_sample:
        out.write(
            f"{s.index},{int(s.success)},{s.l2:.17g},{s.dtw:.17g},{s.lf:.17g}\n"
        )
    return out.getvalue()
