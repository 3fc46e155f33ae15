import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rebalance.dataset import (
    ClassCounts,
    Dataset,
    DatasetError,
    SplitSpec,
    class_counts,
    imbalance_ratio,
    load_csv,
    load_labels,
    split,
    split_indices,
    write_csv,
)

from conftest import make_dataset


def write(tmp_path, text, name="d.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_counts(tmp_path):
    path = write(tmp_path, "a,b,target\n1,2,0\n3,4,0\n5,6,1\n7,8,1\n")
    ds = load_csv(path, "target")
    assert class_counts(ds) == ClassCounts(2, 2)
    assert ds.feature_names == ("a", "b")
    assert ds.features.tolist() == [[1, 2], [3, 4], [5, 6], [7, 8]]


def test_load_label_column_removed_anywhere(tmp_path):
    path = write(tmp_path, "y,a\nyes,1.5\nno,-1\n")
    ds = load_csv(path, "y", positive_value="yes", negative_value="no")
    assert ds.feature_names == ("a",)
    assert ds.labels.tolist() == [1, 0]
    # -1 is an ordinary value, not a missing marker
    assert ds.features[1, 0] == -1.0


def test_load_unparseable_cell_names_row_and_column(tmp_path):
    path = write(tmp_path, "a,b,target\n1,2,0\n3,oops,1\n")
    with pytest.raises(DatasetError, match=r"row 3, column 'b'"):
        load_csv(path, "target")


def test_load_label_outside_domain(tmp_path):
    path = write(tmp_path, "a,target\n1,0\n2,2\n")
    with pytest.raises(DatasetError, match="label '2'"):
        load_csv(path, "target")


@pytest.mark.parametrize("text,match", [
    ("a,b\n1,2\n", "label column"),
    ("", "header"),
    ("a,target\n1,0\n2\n", "cells"),
    ("a,target\nnan,0\n", "non-finite"),
])
def test_load_errors(tmp_path, text, match):
    with pytest.raises(DatasetError, match=match):
        load_csv(write(tmp_path, text), "target")


def test_missing_file(tmp_path):
    with pytest.raises(DatasetError, match="no such file"):
        load_csv(tmp_path / "absent.csv", "target")


def test_load_labels_only(tmp_path):
    path = write(tmp_path, "target\n0\n1\n1\n")
    assert load_labels(path, "target").tolist() == [0, 1, 1]


def test_class_counts_examples():
    assert class_counts(make_dataset([1, 2, 3, 4], [0, 0, 0, 1])) == ClassCounts(3, 1)
    assert class_counts(make_dataset([1, 2], [0, 0])) == ClassCounts(2, 0)


def test_imbalance_ratio_examples():
    assert imbalance_ratio(ClassCounts(5000, 1000)) == 5.0
    assert imbalance_ratio(ClassCounts(573518, 21694)) == pytest.approx(26.44, abs=0.01)
    assert imbalance_ratio(ClassCounts(100, 100)) == 1.0
    # no clamping below 1
    assert imbalance_ratio(ClassCounts(1, 4)) == 0.25
    with pytest.raises(DatasetError):
        imbalance_ratio(ClassCounts(3, 0))


def test_dataset_invariants():
    with pytest.raises(DatasetError):
        Dataset(np.zeros((3, 1)), np.zeros(2))
    with pytest.raises(DatasetError):
        Dataset(np.zeros((2, 0)), np.zeros(2))
    with pytest.raises(DatasetError):
        Dataset(np.array([[np.inf], [0.0]]), np.zeros(2))
    with pytest.raises(DatasetError):
        Dataset(np.zeros((2, 1)), np.array([0, 2]))
    ds = make_dataset([1.0, 2.0], [0, 1])
    with pytest.raises(ValueError):
        ds.features[0, 0] = 5.0


def test_split_sizes_and_determinism():
    ds = make_dataset(np.arange(10.0), [0] * 7 + [1] * 3)
    train, test = split(ds, SplitSpec(0.3, seed=0))
    assert (train.n_rows, test.n_rows) == (7, 3)
    a = split_indices(ds.labels, SplitSpec(0.3, seed=4))
    b = split_indices(ds.labels, SplitSpec(0.3, seed=4))
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_stratified_split_counts():
    labels = np.array([0] * 90 + [1] * 10)
    _, test = split_indices(labels, SplitSpec(0.5, seed=3, stratified=True))
    assert np.count_nonzero(labels[test] == 0) == 45
    assert np.count_nonzero(labels[test] == 1) == 5


def test_stratified_split_needs_both_classes():
    with pytest.raises(DatasetError):
        split_indices(np.zeros(10, dtype=int), SplitSpec(0.3, stratified=True))


def test_split_spec_validation():
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(DatasetError):
            SplitSpec(bad)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 300),
    frac=st.floats(0.01, 0.99),
    seed=st.integers(0, 2**32 - 1),
    stratified=st.booleans(),
)
def test_split_partitions(n, frac, seed, stratified):
    labels = np.zeros(n, dtype=int)
    labels[: max(1, n // 4)] = 1
    if stratified and n < 2:
        return
    if stratified:
        labels[-1] = 0
    train, test = split_indices(labels, SplitSpec(frac, seed, stratified))
    assert test.shape[0] == int(np.floor(frac * n + 0.5))
    assert sorted(np.concatenate([train, test]).tolist()) == list(range(n))
    if stratified:
        for c in (0, 1):
            n_c = np.count_nonzero(labels == c)
            assert abs(np.count_nonzero(labels[test] == c) - frac * n_c) < 1.0 + 1e-9


def test_write_round_trip(tmp_path, rng):
    X = rng.normal(size=(25, 3)) * 10.0 ** rng.integers(-8, 8, size=(25, 3))
    ds = Dataset(X, rng.integers(0, 2, size=25), ("a", "b", "c"), "y")
    path = tmp_path / "out.csv"
    write_csv(ds, path)
    back = load_csv(path, "y")
    assert np.array_equal(back.features, ds.features)
    assert np.array_equal(back.labels, ds.labels)
    assert back.feature_names == ds.feature_names


def test_write_representative_decimal(tmp_path):
    ds = Dataset(np.array([[0.1, 0.2], [1 / 3, 1e-300]]), [0, 1])
    path = tmp_path / "out.csv"
    write_csv(ds, path)
    assert "0.1," in path.read_text()
    assert load_csv(path, "target").features.tolist() == ds.features.tolist()


def test_write_empty_dataset(tmp_path):
    ds = Dataset(np.empty((0, 2)), np.empty(0), ("a", "b"))
    path = tmp_path / "empty.csv"
    write_csv(ds, path)
    assert path.read_text() == "a,b,target\n"
    back = load_csv(path, "target")
    assert back.n_rows == 0 and back.n_features == 2
