"""CSV ingestion, schema validation and seeded stratified train/test splitting.

The expected file format is a comma-separated UTF-8 table with a header row,
decimal-point numerics and a binary label column (values 0/1). Id-like
columns can be dropped at load time; everything else must parse as a finite
real number.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import DataError
from .rng import SplitMix64, stream_seed

__all__ = [
    "LabeledDataset",
    "SplitSpec",
    "Split",
    "Standardizer",
    "load_csv",
    "stratified_split",
    "fit_standardizer",
]


@dataclass(frozen=True)
class LabeledDataset:
    """A numeric feature table with binary labels.

    features: (n, p) float64 matrix, all entries finite.
    labels:   length-n integer array with values in {0, 1}.
    feature_names: length-p column names.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise DataError(f"features must be 2-D, got shape {features.shape}")
        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise DataError(
                f"labels length {labels.shape} does not match {features.shape[0]} feature rows"
            )
        if features.shape[0] < 1:
            raise DataError("dataset needs at least one sample")
        if features.size and not np.isfinite(features).all():
            raise DataError("features contain NaN or Inf values")
        if labels.size and not np.isin(labels, (0, 1)).all():
            bad = sorted(set(labels.tolist()) - {0, 1})
            raise DataError(f"labels must be 0 or 1, found {bad}")
        names = tuple(self.feature_names)
        if len(names) != features.shape[1]:
            raise DataError(
                f"{len(names)} feature names for {features.shape[1]} feature columns"
            )
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int]:
        """(count of label 0, count of label 1)."""
        ones = int(self.labels.sum())
        return self.n_samples - ones, ones

    def subset(self, indices) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.intp)
        return LabeledDataset(self.features[idx], self.labels[idx], self.feature_names)


@dataclass(frozen=True)
class SplitSpec:
    """Parameters of a train/test split; the seed fully determines the shuffle."""

    test_fraction: float
    seed: int
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise DataError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        if self.seed < 0:
            raise DataError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True)
class Split:
    train: LabeledDataset
    test: LabeledDataset
    train_indices: np.ndarray = field(repr=False)
    test_indices: np.ndarray = field(repr=False)


def load_csv(path, label_column: str = "class", drop_columns=("id",)) -> LabeledDataset:
    """Load a labeled dataset from a headered CSV file.

    Columns named in ``drop_columns`` are excluded from the features (names
    not present in the file are ignored). The label column must coerce to
    {0, 1}; every other retained cell must parse as a finite real. Parse
    failures report the file line and column name.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")
    drop = set(drop_columns)

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: file is empty")
        header = [name.strip() for name in header]
        if label_column not in header:
            raise DataError(f"{path}: label column '{label_column}' not found in header")
        keep = [
            (i, name)
            for i, name in enumerate(header)
            if name != label_column and name not in drop
        ]
        names = [name for _, name in keep]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"{path}: duplicate feature columns {dupes}")
        if not names:
            raise DataError(f"{path}: no feature columns remain after dropping {sorted(drop)}")
        label_idx = header.index(label_column)

        rows: list[list[float]] = []
        labels: list[int] = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(
                    f"{path}, line {lineno}: expected {len(header)} fields, got {len(row)}"
                )
            labels.append(_parse_label(row[label_idx], path, lineno, label_column))
            rows.append([_parse_cell(row[i], path, lineno, name) for i, name in keep])

    if not rows:
        raise DataError(f"{path}: no data rows")
    return LabeledDataset(np.array(rows, dtype=np.float64), np.array(labels), tuple(names))


def _parse_cell(text: str, path, lineno: int, column: str) -> float:
    text = text.strip()
    if not text:
        raise DataError(f"{path}, line {lineno}, column '{column}': empty cell")
    try:
        value = float(text)
    except ValueError:
        raise DataError(
            f"{path}, line {lineno}, column '{column}': cannot parse '{text}' as a number"
        ) from None
    if not np.isfinite(value):
        raise DataError(f"{path}, line {lineno}, column '{column}': non-finite value '{text}'")
    return value


def _parse_label(text: str, path, lineno: int, column: str) -> int:
    value = _parse_cell(text, path, lineno, column)
    if value not in (0.0, 1.0):
        raise DataError(f"{path}, line {lineno}, column '{column}': label must be 0 or 1, got {text}")
    return int(value)


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def stratified_split(ds: LabeledDataset, spec: SplitSpec) -> Split:
    """Deterministic train/test split.

    When stratified, each class c is shuffled with its own stream
    (SplitMix64 seeded with stream_seed(seed, c)) and contributes
    round(count * test_fraction) samples to the test set, so class
    prevalence is preserved within one sample per class. Row order within
    each side follows the original dataset.
    """
    n = ds.n_samples
    test_idx: list[int] = []
    if spec.stratified:
        for c in (0, 1):
            members = [int(i) for i in np.flatnonzero(ds.labels == c)]
            if not members:
                continue
            k = _round_half_up(len(members) * spec.test_fraction)
            rng = SplitMix64(stream_seed(spec.seed, c))
            rng.shuffle(members)
            test_idx.extend(members[:k])
    else:
        members = list(range(n))
        rng = SplitMix64(spec.seed)
        rng.shuffle(members)
        test_idx = members[: _round_half_up(n * spec.test_fraction)]

    test = np.array(sorted(test_idx), dtype=np.intp)
    in_test = np.zeros(n, dtype=bool)
    in_test[test] = True
    train = np.flatnonzero(~in_test)
    if test.size == 0:
        raise DataError(f"test_fraction {spec.test_fraction} leaves an empty test set (n={n})")
    if train.size == 0:
        raise DataError(f"test_fraction {spec.test_fraction} leaves an empty train set (n={n})")
    return Split(ds.subset(train), ds.subset(test), train, test)


@dataclass(frozen=True)
class Standardizer:
    """Per-column z-scoring with statistics frozen at fit time."""

    mean: np.ndarray
    scale: np.ndarray

    def apply(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64)
        if features.shape[1] != self.mean.shape[0]:
            raise DataError(
                f"standardizer fitted on {self.mean.shape[0]} columns, got {features.shape[1]}"
            )
        return (features - self.mean) / self.scale


def fit_standardizer(features: np.ndarray) -> Standardizer:
    """Column means and sample standard deviations; zero-variance columns get scale 1."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape[0] < 2:
        raise DataError("standardizer needs at least 2 rows")
    mean = features.mean(axis=0)
    scale = features.std(axis=0, ddof=1)
    scale = np.where(scale > 0.0, scale, 1.0)
    return Standardizer(mean=mean, scale=scale)
