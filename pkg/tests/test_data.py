import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curious_elm.data import (
    Dataset, DataError, NormStats, SplitSpec, code_label_matrix, code_labels, load_csv, normalize_apply,
    normalize_fit, split,
)
from curious_elm.network import predict_class


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_first_appearance_mapping(tmp_path):
    ds = load_csv(write(tmp_path, "1,2,a\n3,4,b\n5,6,a\n"), header=False)
    assert ds.n_classes == 2 and ds.labels.tolist() == [1, 2, 1] and ds.label_names == ("a", "b")
    assert ds.features.tolist() == [[1, 2], [3, 4], [5, 6]]


def test_trailing_newline_and_header(tmp_path):
    a = load_csv(write(tmp_path, "x,y,c\n1,2,p\n3,4,q\n", "a.csv"))
    b = load_csv(write(tmp_path, "x,y,c\n1,2,p\n3,4,q", "b.csv"))
    assert a.features.tolist() == b.features.tolist() and a.labels.tolist() == b.labels.tolist()
    assert a.feature_names == ("x", "y")


def test_label_column_override(tmp_path):
    ds = load_csv(write(tmp_path, "k,1.5,2\nj,2.5,3\n"), label_column=0, header=False)
    assert ds.label_names == ("k", "j") and ds.features.tolist() == [[1.5, 2], [2.5, 3]]


def test_fixed_label_names(tmp_path):
    ds = load_csv(write(tmp_path, "1,b\n2,a\n"), header=False, label_names=["a", "b"])
    assert ds.labels.tolist() == [2, 1]
    with pytest.raises(DataError, match="row 2"):
        load_csv(write(tmp_path, "1,a\n2,z\n", "u.csv"), header=False, label_names=["a", "b"])


@pytest.mark.parametrize("text,pattern", [
    ("1,2,a\n3,a\n", "row 2 has 2 fields"),
    ("1,2,a\n3,x,b\n", "row 2, column 2"),
    ("", "no data rows"),
])
def test_parse_errors_name_location(tmp_path, text, pattern):
    with pytest.raises(DataError, match=pattern):
        load_csv(write(tmp_path, text), header=False)


def test_missing_file_names_path(tmp_path):
    with pytest.raises(DataError, match="nope.csv"):
        load_csv(tmp_path / "nope.csv")


def test_bundled_iris_shape(data_dir):
    ds = load_csv(data_dir / "iris.csv")
    assert (len(ds), ds.input_dim, ds.n_classes) == (150, 4, 3)


def test_code_labels_examples():
    assert code_labels(2, 3).tolist() == [-1, 1, -1]
    assert code_labels(1, 2).tolist() == [1, -1]
    assert code_labels(5, 5).tolist() == [-1, -1, -1, -1, 1]
    with pytest.raises(ValueError):
        code_labels(0, 3)
    with pytest.raises(ValueError):
        code_labels(4, 3)


@given(st.integers(2, 10), st.data())
def test_code_labels_one_hot(n, data):
    c = data.draw(st.integers(1, n))
    y = code_labels(c, n)
    assert np.count_nonzero(y == 1) == 1 and predict_class(y) == c
    assert code_label_matrix([c], n)[0].tolist() == y.tolist()


def ds_from(features, labels=None):
    features = np.asarray(features, dtype=float)
    labels = np.ones(len(features), dtype=int) if labels is None else np.asarray(labels)
    return Dataset(features, labels, int(labels.max()))


def test_normalize_examples():
    train = ds_from([[0.0, 5.0], [10.0, 5.0]])
    stats = normalize_fit(train)
    out = normalize_apply(train, stats)
    assert out.features.tolist() == [[-1, 0], [1, 0]]
    test = normalize_apply(ds_from([[20.0, 7.0]]), stats)
    assert test.features.tolist() == [[3.0, 0.0]]
    assert NormStats.from_dict(stats.to_dict()).minimum.tolist() == [0.0, 5.0]


@given(st.integers(0, 2**32 - 1))
def test_normalized_train_spans_unit_box(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(int(rng.integers(2, 30)), 3)) * rng.uniform(0.1, 100, 3)
    out = normalize_apply(ds_from(X), normalize_fit(ds_from(X))).features
    assert np.all(out >= -1 - 1e-12) and np.all(out <= 1 + 1e-12)
    np.testing.assert_allclose(out.min(axis=0), -1)
    np.testing.assert_allclose(out.max(axis=0), 1)


def iris_like():
    return ds_from(np.arange(150.0)[:, None], np.repeat([1, 2, 3], 50))


def test_split_examples():
    train, test = split(iris_like(), SplitSpec(45, 105, seed=0))
    assert train.class_counts().tolist() == [15, 15, 15] and len(test) == 105
    again, _ = split(iris_like(), SplitSpec(45, 105, seed=0))
    assert train.features.tolist() == again.features.tolist()
    full, empty = split(iris_like(), SplitSpec(150, 0, seed=1))
    assert len(full) == 150 and len(empty) == 0
    with pytest.raises(DataError):
        split(iris_like(), SplitSpec(100, 51))


def test_unstratified_split():
    train, test = split(iris_like(), SplitSpec(40, 60, seed=3, stratified=False))
    assert len(train) == 40 and len(test) == 60
    assert not set(train.features.ravel()) & set(test.features.ravel())


@given(st.lists(st.integers(1, 30), min_size=2, max_size=5), st.floats(0.05, 0.95), st.floats(0, 1),
       st.integers(0, 1000))
def test_split_properties(sizes, frac_train, frac_test, seed):
    labels = np.repeat(np.arange(1, len(sizes) + 1), sizes)
    ds = ds_from(np.arange(len(labels), dtype=float)[:, None], labels)
    n_train = int(frac_train * len(ds))
    n_test = int(frac_test * (len(ds) - n_train))
    train, test = split(ds, SplitSpec(n_train, n_test, seed))
    assert len(train) == n_train and len(test) == n_test
    ids_tr, ids_te = set(train.features.ravel()), set(test.features.ravel())
    assert not ids_tr & ids_te and len(ids_tr) == n_train
    exact = np.array(sizes) * n_train / len(ds)
    assert np.all(np.abs(train.class_counts() - exact) < 1)


def test_dataset_validation():
    with pytest.raises(DataError):
        Dataset(np.zeros((2, 1)), np.array([1, 3]), 2)
    with pytest.raises(DataError):
        Dataset(np.zeros(3), np.array([1, 1, 1]), 1)
