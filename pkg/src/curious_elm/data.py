"""Dataset loading, label coding, min-max normalisation and train/test splits."""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class NormStats:
    minimum: np.ndarray
    maximum: np.ndarray

    def to_dict(self) -> dict:
        return {"min": [float(v) for v in self.minimum], "max": [float(v) for v in self.maximum]}

    @classmethod
    def from_dict(cls, doc: dict) -> "NormStats":
        return cls(np.array(doc["min"], dtype=float), np.array(doc["max"], dtype=float))


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    n_classes: int
    feature_names: tuple[str, ...] | None = None
    label_names: tuple[str, ...] | None = None
    norm_stats: NormStats | None = None
    name: str = ""

    def __post_init__(self):
        if self.features.ndim != 2 or len(self.features) != len(self.labels):
            raise DataError("features must be a t x M matrix matching the label vector")
        if len(self.labels) and (self.labels.min() < 1 or self.labels.max() > self.n_classes):
            raise DataError("labels must lie in 1..N")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def input_dim(self) -> int:
        return self.features.shape[1]

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=int)
        return replace(self, features=self.features[idx], labels=self.labels[idx])

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes + 1)[1:]


@dataclass(frozen=True)
class SplitSpec:
    n_train: int
    n_test: int
    seed: int = 0
    stratified: bool = True


def load_csv(path, label_column: int = -1, header: bool = True, label_names=None, name: str | None = None) -> Dataset:
    """Read a comma-separated file of numeric features plus one label column.

    Labels map to 1..N by first appearance unless ``label_names`` fixes the
    order (use it to load a second file with the same coding).
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    feature_names = None
    if header:
        if not rows:
            raise DataError(f"{path}: empty file")
        head, rows = rows[0], rows[1:]
        feature_names = tuple(h.strip() for i, h in enumerate(head) if i != label_column % len(head))
    if not rows:
        raise DataError(f"{path}: no data rows")

    width = len(rows[0])
    lc = label_column % width
    mapping = {n: i + 1 for i, n in enumerate(label_names)} if label_names is not None else {}
    frozen = label_names is not None
    features = np.empty((len(rows), width - 1))
    labels = np.empty(len(rows), dtype=int)
    lineno0 = 2 if header else 1
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataError(f"{path}: row {i + lineno0} has {len(row)} fields, expected {width}")
        raw_label = row[lc].strip()
        if raw_label not in mapping:
            if frozen:
                raise DataError(f"{path}: row {i + lineno0}: unknown label {raw_label!r}")
            mapping[raw_label] = len(mapping) + 1
        labels[i] = mapping[raw_label]
        cells = row[:lc] + row[lc + 1 :]
        for j, cell in enumerate(cells):
            try:
                features[i, j] = float(cell)
            except ValueError:
                col = j if j < lc else j + 1
                raise DataError(f"{path}: row {i + lineno0}, column {col + 1}: non-numeric value {cell!r}") from None
    return Dataset(
        features=features,
        labels=labels,
        n_classes=len(mapping),
        feature_names=feature_names,
        label_names=tuple(mapping),
        name=name if name is not None else path.stem,
    )


def code_labels(c: int, n: int) -> np.ndarray:
    """+1 at position c (1-based), -1 elsewhere."""
    if not 1 <= c <= n:
        raise ValueError(f"class {c} outside 1..{n}")
    y = -np.ones(n)
    y[c - 1] = 1.0
    return y


def code_label_matrix(labels, n: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=int)
    Y = -np.ones((len(labels), n))
    Y[np.arange(len(labels)), labels - 1] = 1.0
    return Y


def normalize_fit(train: Dataset) -> NormStats:
    return NormStats(train.features.min(axis=0), train.features.max(axis=0))


def normalize_apply(ds: Dataset, stats: NormStats) -> Dataset:
    """Map each feature's training range onto [-1, 1]; constant features go to 0."""
    span = stats.maximum - stats.minimum
    safe = np.where(span > 0, span, 1.0)
    scaled = 2.0 * (ds.features - stats.minimum) / safe - 1.0
    scaled[:, span <= 0] = 0.0
    return replace(ds, features=scaled, norm_stats=stats)


def _stratified_counts(class_sizes: np.ndarray, n: int) -> np.ndarray:
    """Proportional per-class allocation by largest remainder.

    Leftover units go to the largest fractional parts, ties to the larger
    class and then the lower class id, so no count is off by a full unit.
    """
    total = class_sizes.sum()
    exact = class_sizes * n / total
    counts = np.floor(exact).astype(int)
    order = sorted(range(len(class_sizes)), key=lambda i: (-(exact[i] - counts[i]), -class_sizes[i], i))
    for i in order[: n - counts.sum()]:
        counts[i] += 1
    return counts


def split(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    t = len(ds)
    if spec.n_train < 0 or spec.n_test < 0 or spec.n_train + spec.n_test > t:
        raise DataError(f"split {spec.n_train}+{spec.n_test} exceeds {t} samples")
    rng = np.random.default_rng(spec.seed)
    if not spec.stratified:
        perm = rng.permutation(t)
        return ds.subset(perm[: spec.n_train]), ds.subset(perm[spec.n_train : spec.n_train + spec.n_test])

    sizes = ds.class_counts()
    n_train_c = _stratified_counts(sizes, spec.n_train)
    train_idx, rest_idx = [], []
    for c in range(1, ds.n_classes + 1):
        members = rng.permutation(np.flatnonzero(ds.labels == c))
        train_idx.append(members[: n_train_c[c - 1]])
        rest_idx.append(members[n_train_c[c - 1] :])
    rest_sizes = np.array([len(r) for r in rest_idx])
    n_test_c = _stratified_counts(rest_sizes, spec.n_test) if spec.n_test else np.zeros(ds.n_classes, int)
    test_idx = [r[:n] for r, n in zip(rest_idx, n_test_c)]
    # shuffle so the training stream is not ordered by class
    train = rng.permutation(np.concatenate(train_idx))
    test = rng.permutation(np.concatenate(test_idx))
    return ds.subset(train), ds.subset(test)
