"""Dataset container, CSV I/O, class bookkeeping and train/test splitting.

Labels are stored as integers: 0 for the negative class, 1 for the positive
class. Feature matrices are float64 and read-only once wrapped in a
:class:`Dataset`.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

NEGATIVE = 0
POSITIVE = 1


class DatasetError(ValueError):
    """Raised for malformed input data or invalid dataset operations."""


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...] = ()
    label_name: str = "target"

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise DatasetError(f"features must be 2-D, got shape {features.shape}")
        labels = np.asarray(self.labels).astype(np.int64, copy=False)
        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise DatasetError(
                f"{features.shape[0]} feature rows but {labels.shape[0]} labels"
            )
        if features.shape[1] < 1:
            raise DatasetError("dataset needs at least one feature column")
        if not np.isfinite(features).all():
            raise DatasetError("features must be finite")
        if not np.isin(labels, (NEGATIVE, POSITIVE)).all():
            raise DatasetError("labels must be 0 (negative) or 1 (positive)")
        names = tuple(self.feature_names) or tuple(
            f"x{i}" for i in range(features.shape[1])
        )
        if len(names) != features.shape[1]:
            raise DatasetError(
                f"{len(names)} feature names for {features.shape[1]} columns"
            )
        object.__setattr__(self, "features", _frozen(features))
        object.__setattr__(self, "labels", _frozen(labels))
        object.__setattr__(self, "feature_names", names)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def take(self, indices) -> "Dataset":
        """Return a new dataset made of the given rows, in the given order."""
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            self.features[indices],
            self.labels[indices],
            self.feature_names,
            self.label_name,
        )

    def with_rows(self, features: np.ndarray, labels: np.ndarray) -> "Dataset":
        """Return a dataset with the same column names and new contents."""
        return Dataset(features, labels, self.feature_names, self.label_name)


@dataclass(frozen=True)
class ClassCounts:
    n_negative: int
    n_positive: int

    @property
    def total(self) -> int:
        return self.n_negative + self.n_positive

    def as_dict(self) -> dict:
        return {"n_negative": self.n_negative, "n_positive": self.n_positive}


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.3
    seed: int = 0
    stratified: bool = False

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise DatasetError(
                f"test_fraction must lie strictly in (0, 1), got {self.test_fraction}"
            )
        if self.seed < 0:
            raise DatasetError("seed must be non-negative")


def class_counts(ds: Dataset) -> ClassCounts:
    n_pos = int(np.count_nonzero(ds.labels == POSITIVE))
    return ClassCounts(n_negative=ds.n_rows - n_pos, n_positive=n_pos)


def imbalance_ratio(ds: Dataset | ClassCounts) -> float:
    """Number of negative examples per positive example.

    Values below 1 are legal and mean the positive class is the larger one.
    """
    counts = ds if isinstance(ds, ClassCounts) else class_counts(ds)
    if counts.n_positive == 0:
        raise DatasetError("imbalance ratio undefined: no positive examples")
    return counts.n_negative / counts.n_positive


def load_csv(
    path: str | os.PathLike,
    label_column: str,
    positive_value: str = "1",
    negative_value: str = "0",
) -> Dataset:
    """Read a header-first CSV into a :class:`Dataset`.

    Every column other than ``label_column`` must hold real numbers. Label
    cells are compared as stripped strings against ``positive_value`` and
    ``negative_value``. Row numbers in error messages count the header as
    row 1.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DatasetError(f"{path}: empty file, expected a header row") from None
        if label_column not in header:
            raise DatasetError(f"{path}: label column {label_column!r} not in header")
        label_pos = header.index(label_column)
        feature_pos = [i for i in range(len(header)) if i != label_pos]
        names = [header[i] for i in feature_pos]
        label_map = {negative_value.strip(): NEGATIVE, positive_value.strip(): POSITIVE}

        rows: list[list[float]] = []
        labels: list[int] = []
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DatasetError(
                    f"{path}: row {row_no} has {len(row)} cells, header has {len(header)}"
                )
            raw_label = row[label_pos].strip()
            if raw_label not in label_map:
                raise DatasetError(
                    f"{path}: row {row_no}: label {raw_label!r} is neither "
                    f"{positive_value!r} nor {negative_value!r}"
                )
            labels.append(label_map[raw_label])
            values = []
            for i in feature_pos:
                cell = row[i].strip()
                try:
                    value = float(cell)
                except ValueError:
                    raise DatasetError(
                        f"{path}: row {row_no}, column {header[i]!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
                if not math.isfinite(value):
                    raise DatasetError(
                        f"{path}: row {row_no}, column {header[i]!r}: non-finite value"
                    )
                values.append(value)
            rows.append(values)

    features = np.array(rows, dtype=np.float64).reshape(len(rows), len(names))
    return Dataset(features, np.array(labels, dtype=np.int64), tuple(names), label_column)


def load_labels(
    path: str | os.PathLike,
    label_column: str,
    positive_value: str = "1",
    negative_value: str = "0",
) -> np.ndarray:
    """Read only the label column of a CSV as a 0/1 vector."""
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such file: {path}")
    label_map = {negative_value.strip(): NEGATIVE, positive_value.strip(): POSITIVE}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DatasetError(f"{path}: empty file, expected a header row") from None
        if label_column not in header:
            raise DatasetError(f"{path}: label column {label_column!r} not in header")
        pos = header.index(label_column)
        labels = []
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            raw = row[pos].strip() if pos < len(row) else ""
            if raw not in label_map:
                raise DatasetError(
                    f"{path}: row {row_no}: label {raw!r} is neither "
                    f"{positive_value!r} nor {negative_value!r}"
                )
            labels.append(label_map[raw])
    return np.array(labels, dtype=np.int64)


def write_csv(ds: Dataset, path: str | os.PathLike) -> None:
    """Write features then the 0/1 label column.

    ``repr`` gives the shortest decimal that parses back to the same double,
    so :func:`load_csv` reproduces every value exactly.
    """
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*ds.feature_names, ds.label_name])
        for values, label in zip(ds.features.tolist(), ds.labels.tolist()):
            writer.writerow([*map(repr, values), label])


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _stratified_test_sizes(class_sizes: Sequence[int], n_test: int) -> list[int]:
    # largest-remainder allocation so the per-class sizes sum to n_test
    total = sum(class_sizes)
    exact = [n_test * c / total for c in class_sizes]
    sizes = [math.floor(e) for e in exact]
    order = sorted(range(len(exact)), key=lambda i: (-(exact[i] - sizes[i]), i))
    for i in order[: n_test - sum(sizes)]:
        sizes[i] += 1
    return sizes


def split_indices(labels: np.ndarray, spec: SplitSpec) -> tuple[np.ndarray, np.ndarray]:
    """Row indices (train, test), each sorted ascending."""
    n = len(labels)
    n_test = _round_half_up(spec.test_fraction * n)
    rng = np.random.default_rng(spec.seed)
    if not spec.stratified:
        perm = rng.permutation(n)
        test = np.sort(perm[:n_test])
        train = np.sort(perm[n_test:])
        return train, test

    groups = [np.flatnonzero(labels == c) for c in (NEGATIVE, POSITIVE)]
    if any(len(g) == 0 for g in groups):
        raise DatasetError("stratified split needs both classes present")
    sizes = _stratified_test_sizes([len(g) for g in groups], n_test)
    test_parts = []
    for group, size in zip(groups, sizes):
        test_parts.append(rng.permutation(group)[:size])
    test = np.sort(np.concatenate(test_parts))
    mask = np.ones(n, dtype=bool)
    mask[test] = False
    return np.flatnonzero(mask), test


def split(ds: Dataset, spec: SplitSpec = SplitSpec()) -> tuple[Dataset, Dataset]:
    """Partition ``ds`` into (train, test); rows keep their original order."""
    train, test = split_indices(ds.labels, spec)
    return ds.take(train), ds.take(test)
