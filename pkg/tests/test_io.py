import json
import math
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from topodist.errors import (
    DimensionOverflowError,
    InputFormatError,
    MagicMismatchError,
    NonFiniteValueError,
    SchemaError,
    TrailingDataError,
    TruncatedFileError,
    UnsupportedVersionError,
)
from topodist.io import (
    HEADER,
    diagram_from_json,
    diagram_to_json,
    read_diagram,
    read_features,
    read_report,
    report_payload_bytes,
    write_diagram,
    write_features,
    write_report,
)
from topodist.metrics import ScoreReport
from topodist.persistence import PersistenceDiagram


def test_binary_round_trip(tmp_path):
    x = np.random.default_rng(0).standard_normal((100, 16))
    write_features(x, tmp_path / "x.tdf")
    y = read_features(tmp_path / "x.tdf")
    assert y.tobytes() == x.tobytes()
    assert (tmp_path / "x.tdf").stat().st_size == HEADER.size + 8 * 100 * 16


def test_csv_round_trip(tmp_path):
    x = np.random.default_rng(1).standard_normal((20, 3)) * 1e-7
    write_features(x, tmp_path / "x.csv")
    assert read_features(tmp_path / "x.csv").tobytes() == x.tobytes()


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(1, 5)), elements=st.floats(allow_nan=False, allow_infinity=False)))
def test_round_trip_any_finite(tmp_path_factory, x):
    d = tmp_path_factory.mktemp("rt")
    for name in ("x.tdf", "x.csv"):
        write_features(x, d / name)
        assert read_features(d / name).tobytes() == (x + 0.0).tobytes()


def test_csv_hand_example(tmp_path):
    (tmp_path / "a.csv").write_text("2,1\n0\n2\n")
    x = read_features(tmp_path / "a.csv")
    assert x.shape == (2, 1) and x[:, 0].tolist() == [0.0, 2.0]


def test_format_override(tmp_path):
    write_features([[1.0]], tmp_path / "x.dat", format="csv")
    assert read_features(tmp_path / "x.dat", format="csv").tolist() == [[1.0]]
    with pytest.raises(InputFormatError):
        read_features(tmp_path / "x.dat", format="parquet")


def _binary(tmp_path, header=None, payload=b""):
    p = tmp_path / "bad.tdf"
    p.write_bytes((header or b"") + payload)
    return p


@pytest.mark.parametrize(
    "header,payload,error",
    [
        (b"TDF", b"", TruncatedFileError),
        (HEADER.pack(b"XXXX", 1, 1, 1), b"\0" * 8, MagicMismatchError),
        (HEADER.pack(b"TDF1", 2, 1, 1), b"\0" * 8, UnsupportedVersionError),
        (HEADER.pack(b"TDF1", 1, 2, 2), b"\0" * 24, TruncatedFileError),
        (HEADER.pack(b"TDF1", 1, 1, 1), b"\0" * 9, TrailingDataError),
        (HEADER.pack(b"TDF1", 1, 1, 1), struct.pack("<d", math.nan), NonFiniteValueError),
        (HEADER.pack(b"TDF1", 1, 1, 1), struct.pack("<d", math.inf), NonFiniteValueError),
        (HEADER.pack(b"TDF1", 1, 2**20, 2**20), b"", DimensionOverflowError),
        (HEADER.pack(b"TDF1", 1, 0, 3), b"", InputFormatError),
    ],
)
def test_binary_errors(tmp_path, header, payload, error):
    with pytest.raises(error):
        read_features(_binary(tmp_path, header, payload))


@pytest.mark.parametrize(
    "text,error",
    [
        ("", TruncatedFileError),
        ("a,b\n1\n", InputFormatError),
        ("2,1\n0\n", TruncatedFileError),
        ("1,1\n0\n1\n", TrailingDataError),
        ("1,2\n0\n", InputFormatError),
        ("1,1\nzero\n", InputFormatError),
        ("1,1\nnan\n", NonFiniteValueError),
    ],
)
def test_csv_errors(tmp_path, text, error):
    (tmp_path / "bad.csv").write_text(text)
    with pytest.raises(error):
        read_features(tmp_path / "bad.csv")


def test_missing_file(tmp_path):
    with pytest.raises(InputFormatError):
        read_features(tmp_path / "nope.tdf")


def test_errors_have_distinct_codes():
    errors = [MagicMismatchError, TruncatedFileError, NonFiniteValueError, DimensionOverflowError]
    assert len({e.code for e in errors}) == len(errors)
    assert all(e.exit_code == 2 for e in errors)


def test_diagram_round_trip(tmp_path):
    d = PersistenceDiagram.from_pairs([(0, 1), (0, math.inf)], n_points=2)
    write_diagram(d, tmp_path / "d.json", {"seed": 3})
    back, meta = read_diagram(tmp_path / "d.json")
    assert back == d and meta == {"seed": 3}
    assert json.loads((tmp_path / "d.json").read_text())["pairs"][1] == [0, None]


def test_empty_diagram_round_trip():
    d = PersistenceDiagram.from_pairs([], dim=1, n_points=0)
    back, _ = diagram_from_json(diagram_to_json(d))
    assert back == d and back.dim == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1e6), st.floats(0, 1e6) | st.just(math.inf)), max_size=10))
def test_diagram_round_trip_lossless(pairs):
    pairs = [(min(b, d), max(b, d)) for b, d in pairs]
    d = PersistenceDiagram.from_pairs(pairs, dim=1, n_points=len(pairs))
    back, _ = diagram_from_json(diagram_to_json(d))
    assert back.sorted_pairs().tobytes() == d.sorted_pairs().tobytes()


def _doc(**overrides):
    doc = {"format": "topodist-diagram", "version": 1, "dimension": 0, "n_points": 1, "pairs": [[0, None]]}
    doc.update(overrides)
    return json.dumps(doc)


@pytest.mark.parametrize(
    "text,error",
    [
        ("{", SchemaError),
        (_doc(format="other"), SchemaError),
        (_doc(version=9), UnsupportedVersionError),
        (_doc(dimension=2), SchemaError),
        (_doc(n_points=-1), SchemaError),
        (_doc(pairs=[[2, 1]]), SchemaError),
        (_doc(pairs=[[0]]), SchemaError),
        (_doc(pairs=[[None, 1]]), SchemaError),
        (_doc(pairs=[["0", 1]]), SchemaError),
        (_doc(metadata=[]), SchemaError),
    ],
)
def test_diagram_schema_errors(text, error):
    with pytest.raises(error):
        diagram_from_json(text)


def test_report_payload_is_canonical(tmp_path):
    r1 = ScoreReport("td", 1.5, {"b": 1, "a": [1, 2]}, wall_time=0.1)
    r2 = ScoreReport("td", 1.5, {"a": [1, 2], "b": 1}, wall_time=9.0)
    assert report_payload_bytes(r1) == report_payload_bytes(r2)
    write_report(r1, tmp_path / "r.json")
    doc = read_report(tmp_path / "r.json")
    assert doc["payload"]["value"] == 1.5
    assert doc["runtime"]["wall_time_s"] == 0.1


def test_report_infinite_value():
    payload = json.loads(report_payload_bytes(ScoreReport("bottleneck", math.inf)))
    assert payload["value"] is None
    assert payload["metadata"]["value_is_infinite"] is True


def test_read_report_rejects_other_json(tmp_path):
    (tmp_path / "x.json").write_text("{}")
    with pytest.raises(SchemaError):
        read_report(tmp_path / "x.json")


def test_report_non_finite_metadata():
    payload = json.loads(report_payload_bytes(ScoreReport("x", math.nan, {"r": math.inf, "v": [np.float64(1.5)]})))
    assert payload["value"] is None
    assert payload["metadata"] == {"r": None, "v": [1.5], "value_is_infinite": False}
