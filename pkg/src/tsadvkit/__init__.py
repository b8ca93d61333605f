"""Imperceptible adversarial attacks for time-series classifiers.

Shapelet-localized, high-pass-filtered gradient perturbations plus the
standard one-step and iterated baselines, imperceptibility metrics, and
empirical theorem checks.
"""

from .attacks import (
    AdversarialResult,
    AttackConfig,
    assemble_perturbation,
    bim,
    decompose_gradient,
    fgm,
    fgsm,
    pgd,
    run_attack,
    select_target,
    sfattack,
)
from .metrics import AttackReport, asr, dtw, evaluate
from .models import (
    LossSpec,
    Model,
    ModelSpec,
    cross_entropy,
    finite_diff_gradient,
    input_gradient,
    predict_proba,
    target_confidence,
    train,
)
from .series import (
    LabeledDataset,
    TimeSeries,
    cosine_similarity,
    l2_distance,
    znormalize,
)
from .shapelets import (
    MinerConfig,
    Shapelet,
    align_interval,
    best_threshold,
    entropy,
    info_gain,
    mine_class_shapelets,
    subdist,
)
from .spectral import FilterSpec, dc_magnitude, dct, highpass, idct, lf_norm
from .synthetic import gaussian_bump_dataset, train_test_datasets
from .theorems import (
    TheoremVerdict,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
    verify_theorem4,
)
from .ucr import DatasetSource, parse_ucr_text, write_ucr_text

__version__ = "0.1.0"
