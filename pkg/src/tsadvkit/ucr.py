"""Read and write datasets in the UCR archive's delimited text format.

Each non-empty, non-comment line is a class label followed by T values.
Values may be separated by tabs, commas, or runs of spaces; the archive
mixes all three across releases. Labels are remapped to contiguous ids
0..|C|-1 by ascending original value, and the original labels are kept on
the dataset so files round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .series import LabeledDataset, znormalize_matrix


class UcrParseError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetSource:
    """A train/test pair of UCR text files."""

    train_path: str
    test_path: str
    znormalize_on_load: bool = True


def _tokenize(line: str) -> list[str]:
    if "," in line:
        return [tok.strip() for tok in line.split(",")]
    return line.split()


def parse_ucr_text(text: str) -> LabeledDataset:
    """Parse UCR text into a dataset with contiguous remapped labels.

    Lines starting with ``#`` are ignored (artifact files embed a
    provenance comment). Raises :class:`UcrParseError` on empty input,
    ragged rows, or non-numeric tokens.
    """
    rows: list[list[float]] = []
    raw_labels: list[float] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = _tokenize(stripped)
        values = []
        for col, tok in enumerate(tokens, start=1):
            try:
                values.append(float(tok))
            except ValueError:
                raise UcrParseError(
                    f"parse error at line {lineno}, column {col}"
                ) from None
        if not values:
            continue
        raw_labels.append(values[0])
        rows.append(values[1:])
    if not rows:
        raise UcrParseError("empty dataset")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise UcrParseError("inconsistent length")

    originals = sorted(set(raw_labels))
    remap = {orig: idx for idx, orig in enumerate(originals)}
    y = np.array([remap[v] for v in raw_labels], dtype=np.int64)
    X = np.asarray(rows, dtype=np.float64)
    return LabeledDataset(X, y, len(originals), tuple(originals))


def _fmt(v: float) -> str:
    # %.17g round-trips any double exactly.
    return format(float(v), ".17g")


def write_ucr_text(dataset: LabeledDataset, original_label_map=None) -> str:
    """Serialize tab-separated rows with the original labels restored."""
    labels = original_label_map or dataset.original_labels
    lines = []
    for row, cls in zip(dataset.X, dataset.y):
        fields = [_fmt(labels[cls])] + [_fmt(v) for v in row]
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def load_source(source: DatasetSource) -> tuple[LabeledDataset, LabeledDataset]:
    """Load a train/test pair, optionally z-normalizing every series."""
    train = parse_ucr_text(Path(source.train_path).read_text())
    test = parse_ucr_text(Path(source.test_path).read_text())
    if train.length != test.length:
        raise UcrParseError(
            f"train/test series length mismatch: {train.length} vs {test.length}"
        )
    if train.original_labels != test.original_labels:
        raise UcrParseError("train/test class sets differ")
    if source.znormalize_on_load:
        train = LabeledDataset(
            znormalize_matrix(train.X), train.y, train.num_classes, train.original_labels
        )
        test = LabeledDataset(
            znormalize_matrix(test.X), test.y, test.num_classes, test.original_labels
        )
    return train, test
