import io

import numpy as np
import pytest

from stablesketch import DatasetFormatError, SparseVector, l1_normalize, parse_dataset, write_features
from stablesketch.dataset_io import features_to_encoded, write_dataset
from stablesketch.sign_projection import SignSketch, encode_sign


def test_parse_basic():
    ds = parse_dataset(io.StringIO("1 1:0.5 3:2\n"))
    assert ds.labels == [1]
    v = ds.vectors[0]
    assert v.indices.tolist() == [0, 2] and v.values.tolist() == [0.5, 2.0]
    assert ds.dim >= 3


def test_empty():
    ds = parse_dataset(io.StringIO(""))
    assert len(ds) == 0 and ds.dim == 0


def test_crlf_and_blank_lines():
    ds = parse_dataset(io.StringIO("-1 2:1\r\n\r\n+1 1:3 2:4\r\n"))
    assert ds.labels == [-1, 1] and ds.linenos == [1, 3] and ds.dim == 2


def test_declared_dim():
    ds = parse_dataset(io.StringIO("1 2:1\n"), dim=10)
    assert ds.dim == 10 and ds.vectors[0].dim == 10
    with pytest.raises(DatasetFormatError):
        parse_dataset(io.StringIO("1 12:1\n"), dim=10)


def test_explicit_zero_dropped():
    v = parse_dataset(io.StringIO("0 1:0 2:5\n")).vectors[0]
    assert v.indices.tolist() == [1]


@pytest.mark.parametrize(
    "text,match",
    [
        ("1 3:1 2:1\n", "non-ascending"),
        ("1 2:1 2:3\n", "duplicate"),
        ("1 a:1\n", "non-numeric"),
        ("1 1:x\n", "non-numeric"),
        ("x 1:1\n", "label"),
        ("1.5 1:1\n", "integer"),
        ("1 0:1\n", "1-based"),
        ("1 1\n", "idx:val"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(DatasetFormatError, match=match):
        parse_dataset(io.StringIO("1 1:1\n" + text))


def test_error_reports_line_number():
    with pytest.raises(DatasetFormatError) as exc:
        parse_dataset(io.StringIO("1 1:1\n2 1:1\n1 3:1 2:1\n"))
    assert exc.value.lineno == 3 and "line 3" in str(exc.value)


def test_l1_normalize():
    np.testing.assert_allclose(l1_normalize(SparseVector.from_dense([2, 2])).values, [0.5, 0.5])
    np.testing.assert_allclose(l1_normalize(SparseVector.from_dense([1, 3])).values, [0.25, 0.75])
    v = SparseVector.from_dense([0.1, 0.2, 0.7])
    assert abs(l1_normalize(v).values.sum() - 1) < 1e-12
    np.testing.assert_allclose(l1_normalize(l1_normalize(v)).values, l1_normalize(v).values, atol=1e-12)
    with pytest.raises(ValueError):
        l1_normalize(SparseVector.from_dense([1, -1]))
    with pytest.raises(ValueError):
        l1_normalize(SparseVector.from_dense([0, 0]))


def test_write_sign_layout():
    out = io.StringIO()
    write_features([(1, encode_sign(SignSketch(np.array([True, False]), "f")))], out)
    assert out.getvalue() == "1 1:1 4:1\n"


def test_write_empty():
    out = io.StringIO()
    write_features([], out)
    assert out.getvalue() == ""


def test_write_rejects_mixed_lengths():
    a = encode_sign(SignSketch(np.array([True]), "f"))
    b = encode_sign(SignSketch(np.array([True, True]), "f"))
    with pytest.raises(ValueError):
        write_features([(1, a), (1, b)], io.StringIO())


def test_feature_round_trip(rng):
    encs = [encode_sign(SignSketch(rng.random(50) < 0.5, "f")) for _ in range(10)]
    labels = list(rng.integers(-3, 3, 10))
    out = io.StringIO()
    write_features(zip(labels, encs), out)
    ds = parse_dataset(io.StringIO(out.getvalue()), dim=100)
    assert ds.labels == labels
    assert [features_to_encoded(v, 2) for v in ds.vectors] == encs


def test_real_valued_round_trip(rng):
    x = rng.standard_normal((5, 8)) * (rng.random((5, 8)) < 0.6) * 10.0 ** rng.integers(-8, 8, (5, 8))
    ds = parse_dataset(io.StringIO("".join(f"1 {i + 1}:1\n" for i in range(1))), dim=8)
    ds.labels = [0, 1, 2, 3, 4]
    ds.vectors = [SparseVector.from_dense(row) for row in x]
    out = io.StringIO()
    write_dataset(ds, out)
    back = parse_dataset(io.StringIO(out.getvalue()), dim=8)
    assert back.labels == ds.labels
    for a, b in zip(back.vectors, ds.vectors):
        assert a == b
